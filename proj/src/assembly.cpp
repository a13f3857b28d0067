#include "bingham/assembly.hpp"

#include "bingham/huber.hpp"

#include <cmath>

namespace bingham {

namespace {

constexpr int kLocalNodes = 6;
constexpr int kLocalDofs = 12; // (node, component) pairs, idx = 2*i + c

struct PointState {
  Eigen::Matrix2d tensor; // strain tensor of the selected form
  double div = 0.0;
  double weight = 0.0;
  Eigen::Vector2d x;                             // physical point
  std::array<Eigen::Vector2d, kLocalNodes> gphys; // physical basis gradients
  const P2Basis* basis = nullptr;
};

/// Walks all quadrature points of all elements, handing the element-local
/// velocity coefficients and pointwise kinematics to `fn`.
template <typename Fn>
void for_each_qpoint(const Mesh& mesh, const DofMap& dm, const VelocityField* u,
                     TensorForm form, int quad_degree, Fn&& fn) {
  const QuadRule rule = quad_rule(quad_degree);
  const BasisTable table = tabulate_basis(rule);

  PointState st;
  std::array<double, kLocalDofs> ucoef{};
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const ElementGeometry geo = element_geometry(mesh, e);
    if (u) {
      for (int i = 0; i < kLocalNodes; ++i) {
        ucoef[2 * i] = u->dofs[DofMap::vec_dof(geo.nodes[i], 0)];
        ucoef[2 * i + 1] = u->dofs[DofMap::vec_dof(geo.nodes[i], 1)];
      }
    }
    for (int q = 0; q < rule.size(); ++q) {
      const P2Basis& b = table.at_point[q];
      st.basis = &b;
      for (int i = 0; i < kLocalNodes; ++i) {
        st.gphys[i] = geo.jac_inv_t * b.grad[i];
      }
      Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
      if (u) {
        for (int i = 0; i < kLocalNodes; ++i) {
          grad.row(0) += ucoef[2 * i] * st.gphys[i].transpose();
          grad.row(1) += ucoef[2 * i + 1] * st.gphys[i].transpose();
        }
      }
      st.div = grad.trace();
      st.tensor = (form == TensorForm::Sym) ? Eigen::Matrix2d(0.5 * (grad + grad.transpose()))
                                            : grad;
      st.weight = rule.weights[q] * geo.detj;
      st.x = geo.origin + geo.jac * rule.points[q];
      fn(geo, st, ucoef);
    }
  }
}

/// Tensor contraction T(i,c) : T(j,d) for the basis tensors of `form`.
inline double basis_tensor_dot(const PointState& st, TensorForm form, int i, int c, int j,
                               int d) {
  const double gg = st.gphys[i].dot(st.gphys[j]);
  if (form == TensorForm::Grad) {
    return (c == d) ? gg : 0.0;
  }
  double v = st.gphys[i][d] * st.gphys[j][c];
  if (c == d) v += gg;
  return 0.5 * v;
}

/// State tensor contracted with the basis tensor of local dof (i, c). For the
/// symmetric form this equals S : grad(phi) because S is symmetric.
inline double state_basis_dot(const PointState& st, int i, int c) {
  return st.tensor.row(c).dot(st.gphys[i]);
}

SparseSym from_local(const Mesh& mesh, const DofMap& dm,
                     const std::vector<Eigen::Triplet<double>>& trips) {
  SparseSym A(dm.vector_count(), dm.vector_count());
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

void scatter_local(const ElementGeometry& geo, const Eigen::Matrix<double, 12, 12>& local,
                   std::vector<Eigen::Triplet<double>>& trips) {
  for (int a = 0; a < kLocalDofs; ++a) {
    const int ga = DofMap::vec_dof(geo.nodes[a / 2], a % 2);
    for (int b = 0; b < kLocalDofs; ++b) {
      const double v = local(a, b);
      if (v != 0.0) {
        trips.emplace_back(ga, DofMap::vec_dof(geo.nodes[b / 2], b % 2), v);
      }
    }
  }
}

} // namespace

Forcing zero_forcing() {
  return [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
}

double eval_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
              const ModelParams& params, const Forcing& f, int quad_degree) {
  const double ce = params.quad_energy_coeff();
  double value = 0.0;
  for_each_qpoint(mesh, dm, &u, params.form, quad_degree,
                  [&](const ElementGeometry&, const PointState& st,
                      const std::array<double, kLocalDofs>& ucoef) {
                    const double ns = st.tensor.norm();
                    double e = ce * ns * ns;
                    if (params.g > 0.0) {
                      e += huber_frobenius_norm(ns, params.g, params.beta);
                    }
                    Eigen::Vector2d uval = Eigen::Vector2d::Zero();
                    for (int i = 0; i < kLocalNodes; ++i) {
                      uval.x() += ucoef[2 * i] * st.basis->value[i];
                      uval.y() += ucoef[2 * i + 1] * st.basis->value[i];
                    }
                    e -= f(st.x).dot(uval);
                    value += st.weight * e;
                  });
  return value;
}

double eval_Jsigma(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                   const ModelParams& params, const Forcing& f, int quad_degree) {
  const auto [l1, l2] = div_norms(mesh, dm, u, quad_degree);
  (void)l2;
  return eval_J(mesh, dm, u, params, f, quad_degree) + params.sigma * l1;
}

double eval_Jnu(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                const ModelParams& params, const Forcing& f, int quad_degree) {
  const auto [l1, l2] = div_norms(mesh, dm, u, quad_degree);
  (void)l1;
  return eval_J(mesh, dm, u, params, f, quad_degree) + 0.5 * params.nu * l2 * l2;
}

Eigen::VectorXd assemble_grad_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, const Forcing& f,
                                int quad_degree) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dm.vector_count());
  const double cg = params.quad_grad_coeff();
  for_each_qpoint(
      mesh, dm, &u, params.form, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        double coef = cg;
        if (params.g > 0.0) {
          // g*beta/theta is branch-safe: theta >= g > 0 everywhere.
          coef += params.g * params.beta / theta_beta_norm(st.tensor.norm(), params.g, params.beta);
        }
        const Eigen::Vector2d fx = f(st.x);
        for (int i = 0; i < kLocalNodes; ++i) {
          for (int c = 0; c < 2; ++c) {
            const int gd = DofMap::vec_dof(geo.nodes[i], c);
            r[gd] += st.weight * (coef * state_basis_dot(st, i, c) - fx[c] * st.basis->value[i]);
          }
        }
      });
  return r;
}

Eigen::VectorXd assemble_grad_h(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, int quad_degree) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dm.vector_count());
  if (params.sigma <= 0.0) {
    return s;
  }
  for_each_qpoint(
      mesh, dm, &u, params.form, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        const double coef =
            params.sigma * params.gamma * st.div /
            std::max(params.sigma, params.gamma * std::abs(st.div));
        for (int i = 0; i < kLocalNodes; ++i) {
          for (int c = 0; c < 2; ++c) {
            s[DofMap::vec_dof(geo.nodes[i], c)] += st.weight * coef * st.gphys[i][c];
          }
        }
      });
  return s;
}

Eigen::VectorXd assemble_grad_div_quadratic(const Mesh& mesh, const DofMap& dm,
                                            const VelocityField& u, double nu,
                                            int quad_degree) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dm.vector_count());
  if (nu == 0.0) {
    return s;
  }
  for_each_qpoint(
      mesh, dm, &u, TensorForm::Grad, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        const double coef = nu * st.div;
        for (int i = 0; i < kLocalNodes; ++i) {
          for (int c = 0; c < 2; ++c) {
            s[DofMap::vec_dof(geo.nodes[i], c)] += st.weight * coef * st.gphys[i][c];
          }
        }
      });
  return s;
}

SparseSym assemble_hessian_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                             const ModelParams& params, const AssemblyOptions& opts) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * kLocalDofs * kLocalDofs);
  const double cg = params.quad_grad_coeff();

  Eigen::Matrix<double, 12, 12> local;
  std::array<double, kLocalDofs> sdot{};
  for_each_qpoint(
      mesh, dm, &u, params.form, opts.quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        double lin = cg;
        double rank1 = 0.0;
        if (params.g > 0.0) {
          const double ns = st.tensor.norm();
          if (strain_active(ns, params.g, params.beta)) {
            lin += params.beta;
          } else {
            lin += params.g / ns;
            if (!opts.drop_rank_one) {
              rank1 = params.g / (ns * ns * ns);
            }
          }
        }
        if (rank1 != 0.0) {
          for (int a = 0; a < kLocalDofs; ++a) {
            sdot[a] = state_basis_dot(st, a / 2, a % 2);
          }
        }
        local.setZero();
        for (int a = 0; a < kLocalDofs; ++a) {
          for (int b = a; b < kLocalDofs; ++b) {
            double v = lin * basis_tensor_dot(st, params.form, a / 2, a % 2, b / 2, b % 2);
            if (rank1 != 0.0) {
              v -= rank1 * sdot[a] * sdot[b];
            }
            v *= st.weight;
            local(a, b) = v;
            if (b != a) local(b, a) = v;
          }
        }
        scatter_local(geo, local, trips);
      });
  return from_local(mesh, dm, trips);
}

SparseSym assemble_hessian_H(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                             const ModelParams& params, const AssemblyOptions& opts) {
  std::vector<Eigen::Triplet<double>> trips;
  if (params.sigma <= 0.0) {
    return from_local(mesh, dm, trips);
  }
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * kLocalDofs * kLocalDofs);

  Eigen::Matrix<double, 12, 12> local;
  for_each_qpoint(
      mesh, dm, &u, params.form, opts.quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        double coef;
        if (div_active(st.div, params.sigma, params.gamma)) {
          coef = params.gamma;
        } else {
          // Both inactive-branch terms of the selection; in one dimension the
          // subtraction cancels the first term exactly.
          const double ad = std::abs(st.div);
          coef = params.sigma / ad;
          if (!opts.drop_rank_one) {
            coef -= params.sigma * (st.div * st.div) / (ad * ad * ad);
          }
        }
        if (coef == 0.0) {
          return;
        }
        local.setZero();
        for (int a = 0; a < kLocalDofs; ++a) {
          const double da = st.gphys[a / 2][a % 2];
          for (int b = a; b < kLocalDofs; ++b) {
            const double v = st.weight * coef * da * st.gphys[b / 2][b % 2];
            local(a, b) = v;
            if (b != a) local(b, a) = v;
          }
        }
        scatter_local(geo, local, trips);
      });
  return from_local(mesh, dm, trips);
}

SparseSym assemble_divdiv(const Mesh& mesh, const DofMap& dm, double coeff,
                          int quad_degree) {
  std::vector<Eigen::Triplet<double>> trips;
  if (coeff == 0.0) {
    return from_local(mesh, dm, trips);
  }
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * kLocalDofs * kLocalDofs);
  Eigen::Matrix<double, 12, 12> local;
  for_each_qpoint(
      mesh, dm, nullptr, TensorForm::Grad, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        local.setZero();
        for (int a = 0; a < kLocalDofs; ++a) {
          const double da = st.gphys[a / 2][a % 2];
          for (int b = a; b < kLocalDofs; ++b) {
            const double v = st.weight * coeff * da * st.gphys[b / 2][b % 2];
            local(a, b) = v;
            if (b != a) local(b, a) = v;
          }
        }
        scatter_local(geo, local, trips);
      });
  return from_local(mesh, dm, trips);
}

SparseSym assemble_strain_stiffness(const Mesh& mesh, const DofMap& dm, TensorForm form,
                                    int quad_degree) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.triangle_count()) * kLocalDofs * kLocalDofs);
  Eigen::Matrix<double, 12, 12> local;
  for_each_qpoint(
      mesh, dm, nullptr, form, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        local.setZero();
        for (int a = 0; a < kLocalDofs; ++a) {
          for (int b = a; b < kLocalDofs; ++b) {
            const double v =
                st.weight * basis_tensor_dot(st, form, a / 2, a % 2, b / 2, b % 2);
            local(a, b) = v;
            if (b != a) local(b, a) = v;
          }
        }
        scatter_local(geo, local, trips);
      });
  return from_local(mesh, dm, trips);
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm, const Forcing& f,
                              int quad_degree) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(dm.vector_count());
  for_each_qpoint(
      mesh, dm, nullptr, TensorForm::Grad, quad_degree,
      [&](const ElementGeometry& geo, const PointState& st, const std::array<double, 12>&) {
        const Eigen::Vector2d fx = f(st.x);
        for (int i = 0; i < kLocalNodes; ++i) {
          for (int c = 0; c < 2; ++c) {
            load[DofMap::vec_dof(geo.nodes[i], c)] += st.weight * fx[c] * st.basis->value[i];
          }
        }
      });
  return load;
}

ActiveSetStats active_set_stats(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, int quad_degree) {
  ActiveSetStats stats;
  double area = 0.0;
  for_each_qpoint(mesh, dm, &u, params.form, quad_degree,
                  [&](const ElementGeometry&, const PointState& st,
                      const std::array<double, 12>&) {
                    area += st.weight;
                    if (!strain_active(st.tensor.norm(), params.g, params.beta)) {
                      stats.fraction_strain_inactive += st.weight;
                    }
                    if (!div_active(st.div, params.sigma, params.gamma)) {
                      stats.fraction_div_inactive += st.weight;
                    }
                  });
  stats.fraction_strain_inactive /= area;
  stats.fraction_div_inactive /= area;
  return stats;
}

std::pair<double, double> div_norms(const Mesh& mesh, const DofMap& dm,
                                    const VelocityField& u, int quad_degree) {
  double l1 = 0.0;
  double l2sq = 0.0;
  for_each_qpoint(mesh, dm, &u, TensorForm::Grad, quad_degree,
                  [&](const ElementGeometry&, const PointState& st,
                      const std::array<double, 12>&) {
                    l1 += st.weight * std::abs(st.div);
                    l2sq += st.weight * st.div * st.div;
                  });
  return {l1, std::sqrt(l2sq)};
}

} // namespace bingham
