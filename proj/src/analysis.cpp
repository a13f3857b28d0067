#include "bingham/analysis.hpp"

#include "bingham/linsolve.hpp"

#include <cmath>

namespace bingham {

namespace {

/// Integral of each P1 vertex hat function (area/3 per adjacent triangle).
Eigen::VectorXd p1_hat_integrals(const Mesh& mesh) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double third = signed_area2(mesh, t) / 6.0;
    for (int k = 0; k < 3; ++k) {
      w[mesh.triangles[t][k]] += third;
    }
  }
  return w;
}

double p1_value_at(const Mesh& mesh, const ScalarFieldP1& f, int t,
                   const Eigen::Vector2d& ref) {
  const auto& tri = mesh.triangles[t];
  const double l0 = 1.0 - ref.x() - ref.y();
  return l0 * f.vertex_values[tri[0]] + ref.x() * f.vertex_values[tri[1]] +
         ref.y() * f.vertex_values[tri[2]];
}

} // namespace

double p1_mean(const Mesh& mesh, const ScalarFieldP1& f) {
  return p1_hat_integrals(mesh).dot(f.vertex_values) / mesh.domain.area();
}

double p1_l2_norm(const Mesh& mesh, const ScalarFieldP1& f) {
  const QuadRule rule = quad_rule(4);
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const double v = p1_value_at(mesh, f, t, rule.points[q]);
      acc += rule.weights[q] * geo.detj * v * v;
    }
  }
  return std::sqrt(acc);
}

double p1_l2_error(const Mesh& mesh, const ScalarFieldP1& f,
                   const std::function<double(const Eigen::Vector2d&)>& exact) {
  const QuadRule rule = quad_rule(6);
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = geo.origin + geo.jac * rule.points[q];
      const double d = p1_value_at(mesh, f, t, rule.points[q]) - exact(x);
      acc += rule.weights[q] * geo.detj * d * d;
    }
  }
  return std::sqrt(acc);
}

double poiseuille_exact(double y, double g) {
  if (g >= 0.5) {
    return 0.0; // yield stress exceeds the driving stress: rigid flow
  }
  const double a = 1.0 - 2.0 * g;
  if (y < 0.5 - g) {
    const double b = a - 2.0 * y;
    return 0.125 * (a * a - b * b);
  }
  if (y <= 0.5 + g) {
    return 0.125 * a * a;
  }
  const double b = 2.0 * y - 2.0 * g - 1.0;
  return 0.125 * (a * a - b * b);
}

double poiseuille_exact_dy(double y, double g) {
  if (g >= 0.5) {
    return 0.0;
  }
  if (y < 0.5 - g) {
    return 0.5 * (1.0 - 2.0 * g - 2.0 * y);
  }
  if (y <= 0.5 + g) {
    return 0.0;
  }
  return -0.5 * (2.0 * y - 2.0 * g - 1.0);
}

PoiseuilleSetup poiseuille_setup() {
  PoiseuilleSetup s;
  s.params.mu = 1.0;
  s.params.g = 0.3;
  s.params.beta = 1e3;
  s.params.gamma = 1e9;
  s.params.sigma = 30.0;
  s.params.nu = 0.0;
  s.params.form = TensorForm::Grad;
  // Constant body force equivalent to the unit pressure drop: in the yielded
  // region the profile satisfies mu * u1'' = -1.
  s.forcing = [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 0.0); };
  s.domain = Rect{0.0, 0.0, 1.0, 1.0};
  const double g = s.params.g;
  s.exact_velocity = [g](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(poiseuille_exact(x.y(), g), 0.0);
  };
  s.exact_gradient = [g](const Eigen::Vector2d& x) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m(0, 1) = poiseuille_exact_dy(x.y(), g);
    return m;
  };
  return s;
}

ErrorNorms error_norms(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                       const CoordFunction& exact_value,
                       const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& exact_grad,
                       int quad_degree) {
  const QuadRule rule = quad_rule(quad_degree);
  const BasisTable table = tabulate_basis(rule);
  double l2 = 0.0;
  double h1 = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      Eigen::Matrix2d gh = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d gp = geo.jac_inv_t * table.at_point[q].grad[i];
        for (int c = 0; c < 2; ++c) {
          const double coeff = u.dofs[DofMap::vec_dof(geo.nodes[i], c)];
          uh[c] += coeff * table.at_point[q].value[i];
          gh.row(c) += coeff * gp.transpose();
        }
      }
      const Eigen::Vector2d x = geo.origin + geo.jac * rule.points[q];
      const double w = rule.weights[q] * geo.detj;
      l2 += w * (uh - exact_value(x)).squaredNorm();
      h1 += w * (gh - exact_grad(x)).squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

namespace {

/// (lambda, Div v) coupling over free velocity dofs; rows are P1 vertex hats.
Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_div_coupling(
    const Mesh& mesh, const DofMap& dm, const std::vector<char>& dof_fixed, int quad_degree) {
  const QuadRule rule = quad_rule(quad_degree);
  const BasisTable table = tabulate_basis(rule);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * rule.size() * 36);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d& ref = rule.points[q];
      const double hat[3] = {1.0 - ref.x() - ref.y(), ref.x(), ref.y()};
      const double w = rule.weights[q] * geo.detj;
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d gp = geo.jac_inv_t * table.at_point[q].grad[i];
        for (int c = 0; c < 2; ++c) {
          const int dof = DofMap::vec_dof(geo.nodes[i], c);
          if (dof_fixed[dof]) continue;
          for (int a = 0; a < 3; ++a) {
            trips.emplace_back(mesh.triangles[t][a], dof, w * hat[a] * gp[c]);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> B(mesh.vertex_count(), dm.vector_count());
  B.setFromTriplets(trips.begin(), trips.end());
  B.makeCompressed();
  return B;
}

/// Diagonal velocity mass scaling (diagonal of the consistent P2 mass).
Eigen::VectorXd mass_diagonal(const Mesh& mesh, const DofMap& dm) {
  const QuadRule rule = quad_rule(4);
  const BasisTable table = tabulate_basis(rule);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dm.vector_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * geo.detj;
      for (int i = 0; i < 6; ++i) {
        const double v = table.at_point[q].value[i];
        for (int c = 0; c < 2; ++c) {
          d[DofMap::vec_dof(geo.nodes[i], c)] += w * v * v;
        }
      }
    }
  }
  return d;
}

void subtract_mean(const Mesh& mesh, ScalarFieldP1& f) {
  f.vertex_values.array() -= p1_mean(mesh, f);
  f.zero_mean = true;
}

} // namespace

ScalarFieldP1 recover_multiplier(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                 const ModelParams& params, const Forcing& f,
                                 int quad_degree) {
  std::vector<char> fixed(dm.vector_count(), 0);
  for (int d : dm.boundary_vector_dofs()) fixed[d] = 1;

  Eigen::VectorXd r = assemble_grad_J(mesh, dm, u, params, f, quad_degree);
  for (int i = 0; i < dm.vector_count(); ++i) {
    if (fixed[i]) r[i] = 0.0;
  }

  const auto B = assemble_div_coupling(mesh, dm, fixed, quad_degree);
  Eigen::VectorXd inv_m = mass_diagonal(mesh, dm).cwiseInverse();
  for (int i = 0; i < dm.vector_count(); ++i) {
    if (fixed[i]) inv_m[i] = 0.0;
  }

  // Normal equations B M^-1 B^T lambda = B M^-1 r. The kernel is exactly the
  // constants (B^T 1 = 0 on free dofs); pinning one vertex removes it and the
  // mean correction below restores the zero-mean representative.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> Bw =
      B * inv_m.asDiagonal();
  SparseSym S = (Bw * B.transpose()).pruned();
  const Eigen::VectorXd rhs = Bw * r;

  AssembledSystem sys = apply_dirichlet(S, rhs, {0}, Eigen::VectorXd::Zero(1));
  LinearSolveResult sol = solve_spd(sys.matrix, sys.rhs, 1e-12);

  ScalarFieldP1 lambda;
  lambda.vertex_values = std::move(sol.x);
  subtract_mean(mesh, lambda);
  return lambda;
}

double estimate_sigma0(const Mesh& mesh, const ScalarFieldP1& lambda, double area_exponent) {
  return p1_l2_norm(mesh, lambda) * std::pow(mesh.domain.area(), area_exponent);
}

ScalarFieldP1 qp_pressure_estimate(const Mesh& mesh, const DofMap& dm,
                                   const VelocityField& u, const ModelParams& params,
                                   int quad_degree) {
  const QuadRule rule = quad_rule(quad_degree);
  const BasisTable table = tabulate_basis(rule);

  // rhs_a = -nu * int psi_a Div u; consistent P1 mass on the left.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.vertex_count());
  std::vector<Eigen::Triplet<double>> trips;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry geo = element_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d& ref = rule.points[q];
      const double hat[3] = {1.0 - ref.x() - ref.y(), ref.x(), ref.y()};
      const double w = rule.weights[q] * geo.detj;
      double div = 0.0;
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d gp = geo.jac_inv_t * table.at_point[q].grad[i];
        div += u.dofs[DofMap::vec_dof(geo.nodes[i], 0)] * gp.x() +
               u.dofs[DofMap::vec_dof(geo.nodes[i], 1)] * gp.y();
      }
      for (int a = 0; a < 3; ++a) {
        rhs[mesh.triangles[t][a]] += -params.nu * w * hat[a] * div;
        for (int b = 0; b < 3; ++b) {
          trips.emplace_back(mesh.triangles[t][a], mesh.triangles[t][b], w * hat[a] * hat[b]);
        }
      }
    }
  }
  SparseSym M(mesh.vertex_count(), mesh.vertex_count());
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();

  LinearSolveResult sol = solve_spd(M, rhs, 1e-12);
  ScalarFieldP1 p;
  p.vertex_values = std::move(sol.x);
  subtract_mean(mesh, p);
  return p;
}

} // namespace bingham
