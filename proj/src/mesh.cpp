#include "bingham/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bingham {

double signed_area2(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d& a = mesh.vertices[tri[0]];
  const Eigen::Vector2d& b = mesh.vertices[tri[1]];
  const Eigen::Vector2d& c = mesh.vertices[tri[2]];
  return (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
}

Mesh build_rect_mesh(int nx, int ny, const Rect& rect) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_rect_mesh: subdivision counts must be positive");
  }
  if (rect.width() <= 0.0 || rect.height() <= 0.0) {
    throw std::invalid_argument("build_rect_mesh: degenerate rectangle");
  }

  Mesh mesh;
  mesh.domain = rect;
  const double dx = rect.width() / nx;
  const double dy = rect.height() / ny;
  mesh.h = std::max(dx, dy);

  mesh.vertices.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? rect.x1 : rect.x0 + i * dx;
      const double y = (j == ny) ? rect.y1 : rect.y0 + j * dy;
      mesh.vertices.emplace_back(x, y);
    }
  }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  mesh.triangles.reserve(static_cast<size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1);
      const int v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // Unique edges; triangle_edges[t][k] is the edge between local vertices k and (k+1)%3.
  std::map<std::array<int, 2>, int> edge_index;
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.triangles[t][k];
      int b = mesh.triangles[t][(k + 1) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back(key);
      }
      mesh.triangle_edges[t][k] = it->second;
    }
  }
  return mesh;
}

namespace {

bool on_rect_boundary(const Eigen::Vector2d& p, const Rect& r) {
  constexpr double tol = 1e-12;
  return std::abs(p.x() - r.x0) < tol || std::abs(p.x() - r.x1) < tol ||
         std::abs(p.y() - r.y0) < tol || std::abs(p.y() - r.y1) < tol;
}

} // namespace

std::vector<int> DofMap::boundary_vector_dofs() const {
  std::vector<int> dofs;
  dofs.reserve(boundary_scalar_nodes.size() * kComponents);
  for (int n : boundary_scalar_nodes) {
    for (int c = 0; c < kComponents; ++c) {
      dofs.push_back(vec_dof(n, c));
    }
  }
  std::sort(dofs.begin(), dofs.end());
  return dofs;
}

DofMap build_p2_dofmap(const Mesh& mesh) {
  DofMap dm;
  dm.scalar_count = mesh.vertex_count() + mesh.edge_count();
  dm.node_coords.reserve(dm.scalar_count);
  for (const auto& v : mesh.vertices) {
    dm.node_coords.push_back(v);
  }
  for (const auto& e : mesh.edges) {
    dm.node_coords.push_back(0.5 * (mesh.vertices[e[0]] + mesh.vertices[e[1]]));
  }

  dm.node_on_boundary.assign(dm.scalar_count, false);
  for (int n = 0; n < dm.scalar_count; ++n) {
    if (on_rect_boundary(dm.node_coords[n], mesh.domain)) {
      dm.node_on_boundary[n] = true;
      dm.boundary_scalar_nodes.push_back(n);
    }
  }
  return dm;
}

} // namespace bingham
