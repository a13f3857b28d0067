#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace bingham {

/// Axis-aligned rectangle, the computational domain.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// Structured triangulation of a rectangle. Every cell is split along the
/// same (bottom-left to top-right) diagonal, so the mesh is deterministic
/// for a given (nx, ny). Triangles are counter-clockwise.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;          // unique, sorted pairs
  std::vector<std::array<int, 3>> triangle_edges; // edge k is between local vertices k, (k+1)%3
  Rect domain;
  double h = 0.0; // max cell edge length

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
};

/// Twice the signed area of triangle t (positive for CCW orientation).
double signed_area2(const Mesh& mesh, int t);

Mesh build_rect_mesh(int nx, int ny, const Rect& rect = Rect{});

/// Scalar P2 node layout: vertices first, then edge midpoints. Vector dofs
/// interleave the two velocity components node by node.
struct DofMap {
  int scalar_count = 0;
  std::vector<Eigen::Vector2d> node_coords;
  std::vector<int> boundary_scalar_nodes; // sorted
  std::vector<bool> node_on_boundary;

  static constexpr int kComponents = 2;

  int vector_count() const { return kComponents * scalar_count; }

  /// Global vector dof of (scalar node, component).
  static int vec_dof(int node, int component) { return kComponents * node + component; }

  /// All vector dofs sitting on the boundary, sorted.
  std::vector<int> boundary_vector_dofs() const;
};

DofMap build_p2_dofmap(const Mesh& mesh);

} // namespace bingham
