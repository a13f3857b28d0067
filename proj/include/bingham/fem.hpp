#pragma once

#include "bingham/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <vector>

namespace bingham {

/// Sparse symmetric operator (structural symmetry is the caller's contract).
using SparseSym = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Symmetric Gauss rule on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights sum to the reference area 1/2.
struct QuadRule {
  int degree = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule exact for bivariate polynomials up to `degree`, degree in 1..6.
QuadRule quad_rule(int degree);

struct P2Basis {
  std::array<double, 6> value;
  std::array<Eigen::Vector2d, 6> grad; // reference gradients
};

/// Quadratic Lagrange basis at a reference point: 3 vertex functions then the
/// 3 edge-midpoint functions (edge k joins vertices k and (k+1)%3).
P2Basis p2_basis(const Eigen::Vector2d& ref_point);

/// Coefficients of a vector-valued P2 field, interleaved (node, component).
struct VelocityField {
  Eigen::VectorXd dofs;

  static VelocityField zero(const DofMap& dm) {
    VelocityField u;
    u.dofs = Eigen::VectorXd::Zero(dm.vector_count());
    return u;
  }
};

using CoordFunction = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Field equal to fn at boundary nodes and zero at interior nodes.
VelocityField lift_boundary(const Mesh& mesh, const DofMap& dm, const CoordFunction& fn);

/// Nodal interpolant of fn at every scalar node.
VelocityField interpolate(const Mesh& mesh, const DofMap& dm, const CoordFunction& fn);

enum class TensorForm {
  Sym, // strain-rate tensor (symmetric gradient)
  Grad // full velocity gradient
};

struct KinematicSample {
  Eigen::Matrix2d strain; // symmetric gradient for Sym, full gradient for Grad
  double divergence = 0.0;
  double weight = 0.0; // physical quadrature weight
};

std::vector<KinematicSample> eval_kinematics(const Mesh& mesh, const DofMap& dm,
                                             const VelocityField& u, int element,
                                             const QuadRule& rule, TensorForm form);

struct AssembledSystem {
  SparseSym matrix;
  Eigen::VectorXd rhs;
};

/// Symmetric elimination of Dirichlet constraints: constrained rows/columns
/// zeroed, unit diagonal, rhs adjusted so constrained dofs take `values`.
AssembledSystem apply_dirichlet(const SparseSym& matrix, const Eigen::VectorXd& rhs,
                                const std::vector<int>& constrained_dofs,
                                const Eigen::VectorXd& values);

// --- element-level helpers shared by the assembly kernels ---

/// Affine geometry of one triangle.
struct ElementGeometry {
  Eigen::Matrix2d jac_inv_t; // maps reference gradients to physical ones
  double detj = 0.0;
  std::array<int, 6> nodes;  // global scalar nodes, local order: vertices then edge midpoints
  Eigen::Vector2d origin;    // physical image of the reference origin
  Eigen::Matrix2d jac;
};

ElementGeometry element_geometry(const Mesh& mesh, int element);

/// Basis values and reference gradients tabulated at the rule points.
struct BasisTable {
  std::vector<P2Basis> at_point;
};

BasisTable tabulate_basis(const QuadRule& rule);

} // namespace bingham
