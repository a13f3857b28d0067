#include "bingham/fem.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <unordered_set>

namespace bingham {

namespace {

void push_orbit1(QuadRule& r, double w) {
  r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  r.weights.push_back(w);
}

// Orbit of barycentric (a, b, b), a = 1 - 2b: three permutations.
void push_orbit3(QuadRule& r, double b, double w) {
  const double a = 1.0 - 2.0 * b;
  r.points.emplace_back(b, b);
  r.points.emplace_back(a, b);
  r.points.emplace_back(b, a);
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

// Full orbit of barycentric (a, b, c): six permutations.
void push_orbit6(QuadRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double xs[6] = {a, b, a, c, b, c};
  const double ys[6] = {b, a, c, a, c, b};
  for (int i = 0; i < 6; ++i) {
    r.points.emplace_back(xs[i], ys[i]);
    r.weights.push_back(w);
  }
}

} // namespace

QuadRule quad_rule(int degree) {
  QuadRule r;
  r.degree = degree;
  // Dunavant rules; published weights are normalized to 1, ours to the
  // reference area 1/2.
  const double half = 0.5;
  switch (degree) {
    case 1:
      push_orbit1(r, half);
      break;
    case 2:
      push_orbit3(r, 1.0 / 6.0, half / 3.0);
      break;
    case 3:
      push_orbit1(r, half * -0.5625);
      push_orbit3(r, 0.2, half * 0.520833333333333333333333333333);
      break;
    case 4:
      push_orbit3(r, 0.445948490915965, half * 0.223381589678011);
      push_orbit3(r, 0.091576213509771, half * 0.109951743655322);
      break;
    case 5:
      push_orbit1(r, half * 0.225);
      push_orbit3(r, 0.470142064105115, half * 0.132394152788506);
      push_orbit3(r, 0.101286507323456, half * 0.125939180544827);
      break;
    case 6:
      push_orbit3(r, 0.249286745170910, half * 0.116786275726379);
      push_orbit3(r, 0.063089014491502, half * 0.050844906370207);
      push_orbit6(r, 0.053145049844816, 0.310352451033785, half * 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("quad_rule: supported degrees are 1..6");
  }
  return r;
}

P2Basis p2_basis(const Eigen::Vector2d& p) {
  const double x = p.x();
  const double y = p.y();
  const double l0 = 1.0 - x - y;
  const double l1 = x;
  const double l2 = y;

  P2Basis b;
  b.value = {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
             4.0 * l0 * l1, 4.0 * l1 * l2, 4.0 * l2 * l0};

  const Eigen::Vector2d g0(-1.0, -1.0);
  const Eigen::Vector2d g1(1.0, 0.0);
  const Eigen::Vector2d g2(0.0, 1.0);
  b.grad = {
      (4.0 * l0 - 1.0) * g0,
      (4.0 * l1 - 1.0) * g1,
      (4.0 * l2 - 1.0) * g2,
      4.0 * (l1 * g0 + l0 * g1),
      4.0 * (l2 * g1 + l1 * g2),
      4.0 * (l0 * g2 + l2 * g0),
  };
  return b;
}

BasisTable tabulate_basis(const QuadRule& rule) {
  BasisTable t;
  t.at_point.reserve(rule.size());
  for (const auto& p : rule.points) {
    t.at_point.push_back(p2_basis(p));
  }
  return t;
}

ElementGeometry element_geometry(const Mesh& mesh, int element) {
  const auto& tri = mesh.triangles[element];
  const Eigen::Vector2d& a = mesh.vertices[tri[0]];
  const Eigen::Vector2d& b = mesh.vertices[tri[1]];
  const Eigen::Vector2d& c = mesh.vertices[tri[2]];

  ElementGeometry g;
  g.origin = a;
  g.jac.col(0) = b - a;
  g.jac.col(1) = c - a;
  g.detj = g.jac.determinant();
  Eigen::Matrix2d inv;
  inv << g.jac(1, 1), -g.jac(0, 1), -g.jac(1, 0), g.jac(0, 0);
  inv /= g.detj;
  g.jac_inv_t = inv.transpose();

  const int nv = mesh.vertex_count();
  const auto& te = mesh.triangle_edges[element];
  g.nodes = {tri[0], tri[1], tri[2], nv + te[0], nv + te[1], nv + te[2]};
  return g;
}

VelocityField lift_boundary(const Mesh& mesh, const DofMap& dm, const CoordFunction& fn) {
  VelocityField u = VelocityField::zero(dm);
  for (int n : dm.boundary_scalar_nodes) {
    const Eigen::Vector2d v = fn(dm.node_coords[n]);
    u.dofs[DofMap::vec_dof(n, 0)] = v.x();
    u.dofs[DofMap::vec_dof(n, 1)] = v.y();
  }
  return u;
}

VelocityField interpolate(const Mesh& mesh, const DofMap& dm, const CoordFunction& fn) {
  VelocityField u = VelocityField::zero(dm);
  for (int n = 0; n < dm.scalar_count; ++n) {
    const Eigen::Vector2d v = fn(dm.node_coords[n]);
    u.dofs[DofMap::vec_dof(n, 0)] = v.x();
    u.dofs[DofMap::vec_dof(n, 1)] = v.y();
  }
  return u;
}

std::vector<KinematicSample> eval_kinematics(const Mesh& mesh, const DofMap& dm,
                                             const VelocityField& u, int element,
                                             const QuadRule& rule, TensorForm form) {
  const ElementGeometry geo = element_geometry(mesh, element);
  const BasisTable table = tabulate_basis(rule);

  std::vector<KinematicSample> out(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero(); // row c = gradient of component c
    for (int i = 0; i < 6; ++i) {
      const Eigen::Vector2d gphys = geo.jac_inv_t * table.at_point[q].grad[i];
      for (int c = 0; c < 2; ++c) {
        grad.row(c) += u.dofs[DofMap::vec_dof(geo.nodes[i], c)] * gphys.transpose();
      }
    }
    KinematicSample& s = out[q];
    s.divergence = grad.trace();
    s.strain = (form == TensorForm::Sym) ? Eigen::Matrix2d(0.5 * (grad + grad.transpose()))
                                         : grad;
    s.weight = rule.weights[q] * geo.detj;
  }
  return out;
}

AssembledSystem apply_dirichlet(const SparseSym& matrix, const Eigen::VectorXd& rhs,
                                const std::vector<int>& constrained_dofs,
                                const Eigen::VectorXd& values) {
  const Eigen::Index n = matrix.rows();
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd fixed_value = Eigen::VectorXd::Zero(n);
  for (size_t k = 0; k < constrained_dofs.size(); ++k) {
    fixed[constrained_dofs[k]] = 1;
    fixed_value[constrained_dofs[k]] = values[static_cast<Eigen::Index>(k)];
  }

  AssembledSystem sys;
  sys.rhs = rhs;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(matrix.nonZeros()) + constrained_dofs.size());
  for (Eigen::Index row = 0; row < n; ++row) {
    for (SparseSym::InnerIterator it(matrix, row); it; ++it) {
      const Eigen::Index col = it.col();
      if (fixed[row] || fixed[col]) {
        if (!fixed[row] && fixed[col]) {
          sys.rhs[row] -= it.value() * fixed_value[col];
        }
        continue;
      }
      trips.emplace_back(static_cast<int>(row), static_cast<int>(col), it.value());
    }
  }
  for (int d : constrained_dofs) {
    trips.emplace_back(d, d, 1.0);
    sys.rhs[d] = fixed_value[d];
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.matrix.makeCompressed();
  return sys;
}

} // namespace bingham
