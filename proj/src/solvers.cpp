#include "bingham/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace bingham {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd zeros_like(const std::vector<int>& dofs) {
  return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
}

void zero_entries(Eigen::VectorXd& v, const std::vector<int>& dofs) {
  for (int d : dofs) v[d] = 0.0;
}

struct SystemSolve {
  Eigen::VectorXd w;
  int iterations = 0;
  bool used_fallback = false;
};

/// Dirichlet-constrained SPD solve of (assemble(drop_rank_one)) w = -r with a
/// single retry with the rank-one terms dropped on indefiniteness.
SystemSolve solve_descent_system(const Mesh& mesh, const DofMap& dm,
                                 const std::function<SparseSym(bool)>& assemble,
                                 const Eigen::VectorXd& r,
                                 const std::vector<int>& dirichlet,
                                 const SolverOptions& opts) {
  SystemSolve out;
  bool drop = false;
  for (;;) {
    const SparseSym A = assemble(drop);
    const AssembledSystem sys = apply_dirichlet(A, -r, dirichlet, zeros_like(dirichlet));
    try {
      LinearSolveResult lin = solve_spd(sys.matrix, sys.rhs, opts.cg_rel_tol, opts.cg_max_iter);
      out.w = std::move(lin.x);
      out.iterations += lin.iterations;
      out.used_fallback = drop;
      return out;
    } catch (const IndefiniteOperator&) {
      if (drop || !opts.rank_one_fallback) throw;
      drop = true;
    }
  }
}

struct CommonState {
  std::vector<int> dirichlet;
};

void require_divergence_free(const Mesh& mesh, const DofMap& dm, const VelocityField& u0) {
  const auto [l1, l2] = div_norms(mesh, dm, u0);
  (void)l1;
  if (l2 > 1e-10 * (1.0 + u0.dofs.norm())) {
    throw std::invalid_argument("initial field is not divergence-free");
  }
}

} // namespace

void LineSearchConfig::validate() const {
  if (!(alpha0 > 0.0) || !(c1 > 0.0 && c1 < 1.0) || !(c_l > 0.0 && c_l < c_u && c_u < 1.0) ||
      max_backtracks < 1) {
    throw std::invalid_argument("LineSearchConfig: invalid constants");
  }
}

LineSearchResult backtracking_line_search(const std::function<double(double)>& objective,
                                          double phi0, double slope,
                                          const LineSearchConfig& cfg) {
  cfg.validate();
  if (!(slope < 0.0)) {
    throw std::invalid_argument("line search: slope must be negative");
  }

  LineSearchResult res;
  double alpha = cfg.alpha0;
  double phi = objective(alpha);
  ++res.evals;
  if (phi <= phi0 + cfg.c1 * alpha * slope) {
    res.alpha = alpha;
    return res;
  }

  // First rejection: quadratic model through phi0, slope, phi(alpha).
  double alpha_prev = alpha;
  double phi_prev = phi;
  {
    double cand = -slope * alpha * alpha / (2.0 * (phi - phi0 - slope * alpha));
    alpha = std::clamp(cand, cfg.c_l * alpha_prev, cfg.c_u * alpha_prev);
  }

  double alpha_prev2 = alpha_prev;
  double phi_prev2 = phi_prev;
  for (int k = 1; k < cfg.max_backtracks; ++k) {
    phi = objective(alpha);
    ++res.evals;
    if (phi <= phi0 + cfg.c1 * alpha * slope) {
      res.alpha = alpha;
      return res;
    }
    // Cubic model through phi0, slope and the last two trials.
    const double a1 = alpha;
    const double a2 = alpha_prev;
    const double r1 = phi - phi0 - slope * a1;
    const double r2 = phi_prev - phi0 - slope * a2;
    const double denom = a1 * a1 * a2 * a2 * (a1 - a2);
    const double ca = (a2 * a2 * r1 - a1 * a1 * r2) / denom;
    const double cb = (-a2 * a2 * a2 * r1 + a1 * a1 * a1 * r2) / denom;
    double cand;
    if (std::abs(ca) < 1e-30) {
      cand = -slope / (2.0 * cb);
    } else {
      const double disc = cb * cb - 3.0 * ca * slope;
      cand = (disc > 0.0) ? (-cb + std::sqrt(disc)) / (3.0 * ca) : 0.5 * a1;
    }
    alpha_prev2 = alpha_prev;
    phi_prev2 = phi_prev;
    (void)alpha_prev2;
    (void)phi_prev2;
    alpha_prev = alpha;
    phi_prev = phi;
    alpha = std::clamp(cand, cfg.c_l * alpha_prev, cfg.c_u * alpha_prev);
  }
  throw LineSearchFailure(alpha, res.evals);
}

DescentResult descent_direction(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, const Forcing& f,
                                const std::vector<int>& dirichlet_dofs,
                                const SolverOptions& opts) {
  DescentResult out;
  out.residual = assemble_grad_J(mesh, dm, u, params, f, opts.quad_degree);
  const auto assemble = [&](bool drop) {
    AssemblyOptions aopts{opts.quad_degree, drop};
    SparseSym A = assemble_hessian_J(mesh, dm, u, params, aopts);
    A += assemble_hessian_H(mesh, dm, u, params, aopts);
    return A;
  };
  SystemSolve sol = solve_descent_system(mesh, dm, assemble, out.residual, dirichlet_dofs, opts);
  out.w.dofs = std::move(sol.w);
  out.linear_iters = sol.iterations;
  out.used_fallback = sol.used_fallback;
  out.slope = out.residual.dot(out.w.dofs);
  return out;
}

DescentDiagnostics check_descent_properties(const Mesh& mesh, const DofMap& dm,
                                            const VelocityField& u, const VelocityField& w,
                                            const ModelParams& params, const Forcing& f,
                                            const SolverOptions& opts) {
  DescentDiagnostics diag;
  Eigen::VectorXd r = assemble_grad_J(mesh, dm, u, params, f, opts.quad_degree);
  zero_entries(r, dm.boundary_vector_dofs());
  AssemblyOptions aopts{opts.quad_degree, false};
  SparseSym G = assemble_hessian_J(mesh, dm, u, params, aopts);
  G += assemble_hessian_H(mesh, dm, u, params, aopts);

  diag.slope = r.dot(w.dofs);
  diag.wGw = w.dofs.dot(G * w.dofs);
  diag.div_w_l2 = div_norms(mesh, dm, w, opts.quad_degree).second;
  const double rnorm2 = r.squaredNorm();
  diag.theorem3_ratio =
      rnorm2 > 0.0 ? params.gamma * diag.div_w_l2 * diag.div_w_l2 / rnorm2 : 0.0;
  return diag;
}

namespace {

enum class Method { Ep, Qp };

SolveReport penalized_descent(Method method, const Mesh& mesh, const DofMap& dm,
                              const ModelParams& params, const Forcing& f,
                              const std::optional<VelocityField>& u0,
                              const SolverOptions& opts) {
  params.validate();
  opts.line_search.validate();
  if (method == Method::Ep && params.sigma <= 0.0) {
    throw std::invalid_argument("ep_solve: sigma must be positive");
  }

  SolveReport report;
  report.method = (method == Method::Ep) ? "ep" : "qp";

  VelocityField u = u0 ? *u0 : VelocityField::zero(dm);
  if (method == Method::Ep) {
    require_divergence_free(mesh, dm, u);
  }
  const std::vector<int> dirichlet = dm.boundary_vector_dofs();

  // The quadratic-penalty Hessian block does not depend on u.
  SparseSym qp_divdiv;
  if (method == Method::Qp) {
    qp_divdiv = assemble_divdiv(mesh, dm, params.nu, opts.quad_degree);
  }

  const auto penalized_value = [&](const VelocityField& v) {
    return method == Method::Ep ? eval_Jsigma(mesh, dm, v, params, f, opts.quad_degree)
                                : eval_Jnu(mesh, dm, v, params, f, opts.quad_degree);
  };

  for (int k = 0; k <= opts.max_iter; ++k) {
    const auto t0 = Clock::now();
    IterationRecord rec;
    rec.k = k;
    rec.J_value = eval_J(mesh, dm, u, params, f, opts.quad_degree);
    rec.Jpen_value = penalized_value(u);
    std::tie(rec.div_l1, rec.div_l2) = div_norms(mesh, dm, u, opts.quad_degree);

    Eigen::VectorXd r = assemble_grad_J(mesh, dm, u, params, f, opts.quad_degree);
    if (method == Method::Qp) {
      r += assemble_grad_div_quadratic(mesh, dm, u, params.nu, opts.quad_degree);
    }

    const auto assemble = [&](bool drop) {
      AssemblyOptions aopts{opts.quad_degree, drop};
      SparseSym A = assemble_hessian_J(mesh, dm, u, params, aopts);
      if (method == Method::Ep) {
        A += assemble_hessian_H(mesh, dm, u, params, aopts);
      } else {
        A += qp_divdiv;
      }
      return A;
    };

    VelocityField w;
    try {
      SystemSolve sol = solve_descent_system(mesh, dm, assemble, r, dirichlet, opts);
      w.dofs = std::move(sol.w);
      rec.linear_iters = sol.iterations;
      report.used_rank_one_fallback |= sol.used_fallback;
    } catch (const std::runtime_error&) {
      rec.wall_time_s = seconds_since(t0);
      report.history.push_back(rec);
      report.stop_reason = "linear_solver_failure";
      break;
    }

    const double slope = r.dot(w.dofs);
    rec.descent_indicator = std::abs(slope);
    if (rec.descent_indicator <= opts.tol) {
      rec.wall_time_s = seconds_since(t0);
      report.history.push_back(rec);
      report.converged = true;
      report.stop_reason = "converged";
      break;
    }

    double alpha = 0.0;
    try {
      const auto objective = [&](double a) {
        VelocityField trial;
        trial.dofs = u.dofs + a * w.dofs;
        return penalized_value(trial);
      };
      alpha = backtracking_line_search(objective, rec.Jpen_value, slope, opts.line_search).alpha;
    } catch (const LineSearchFailure&) {
      rec.wall_time_s = seconds_since(t0);
      report.history.push_back(rec);
      report.stop_reason = "line_search_failure";
      break;
    }

    rec.alpha = alpha;
    u.dofs += alpha * w.dofs;
    rec.wall_time_s = seconds_since(t0);
    report.history.push_back(rec);
    if (k == opts.max_iter) {
      report.stop_reason = "max_iterations";
    }
  }

  if (report.stop_reason.empty()) {
    report.stop_reason = "max_iterations";
  }
  report.final_field = std::move(u);
  return report;
}

} // namespace

SolveReport ep_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                     const Forcing& f, const std::optional<VelocityField>& u0,
                     const SolverOptions& opts) {
  return penalized_descent(Method::Ep, mesh, dm, params, f, u0, opts);
}

SolveReport qp_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                     const Forcing& f, const std::optional<VelocityField>& u0,
                     const SolverOptions& opts) {
  return penalized_descent(Method::Qp, mesh, dm, params, f, u0, opts);
}

SolveReport ssn_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                      const Forcing& f, const std::optional<VelocityField>& u0,
                      const SolverOptions& opts) {
  params.validate();
  if (params.sigma <= 0.0 || params.gamma <= 0.0) {
    throw std::invalid_argument("ssn_solve: sigma and gamma must be positive");
  }

  SolveReport report;
  report.method = "ssn";
  VelocityField u = u0 ? *u0 : VelocityField::zero(dm);
  const std::vector<int> dirichlet = dm.boundary_vector_dofs();

  const auto residual_at = [&](const VelocityField& v) {
    Eigen::VectorXd r = assemble_grad_J(mesh, dm, v, params, f, opts.quad_degree) +
                        assemble_grad_h(mesh, dm, v, params, opts.quad_degree);
    zero_entries(r, dirichlet);
    return r;
  };

  Eigen::VectorXd r = residual_at(u);
  for (int k = 0; k <= opts.max_iter; ++k) {
    const auto t0 = Clock::now();
    IterationRecord rec;
    rec.k = k;
    rec.J_value = eval_J(mesh, dm, u, params, f, opts.quad_degree);
    rec.Jpen_value = eval_Jsigma(mesh, dm, u, params, f, opts.quad_degree);
    std::tie(rec.div_l1, rec.div_l2) = div_norms(mesh, dm, u, opts.quad_degree);
    const double rnorm = r.norm();
    rec.descent_indicator = rnorm;

    if (rnorm <= opts.tol) {
      rec.wall_time_s = seconds_since(t0);
      report.history.push_back(rec);
      report.converged = true;
      report.stop_reason = "converged";
      break;
    }

    const auto assemble = [&](bool drop) {
      AssemblyOptions aopts{opts.quad_degree, drop};
      SparseSym A = assemble_hessian_J(mesh, dm, u, params, aopts);
      A += assemble_hessian_H(mesh, dm, u, params, aopts);
      return A;
    };
    VelocityField delta;
    try {
      SystemSolve sol = solve_descent_system(mesh, dm, assemble, r, dirichlet, opts);
      delta.dofs = std::move(sol.w);
      rec.linear_iters = sol.iterations;
      report.used_rank_one_fallback |= sol.used_fallback;
    } catch (const std::runtime_error&) {
      rec.wall_time_s = seconds_since(t0);
      report.history.push_back(rec);
      report.stop_reason = "linear_solver_failure";
      break;
    }

    double alpha = 1.0;
    VelocityField trial;
    trial.dofs = u.dofs + delta.dofs;
    Eigen::VectorXd r_trial = residual_at(trial);
    if (r_trial.norm() > 100.0 * rnorm) {
      alpha = 0.5;
      trial.dofs = u.dofs + 0.5 * delta.dofs;
      r_trial = residual_at(trial);
      ++report.damping_events;
    }
    u = std::move(trial);
    r = std::move(r_trial);

    rec.alpha = alpha;
    rec.wall_time_s = seconds_since(t0);
    report.history.push_back(rec);
    if (k == opts.max_iter) {
      report.stop_reason = "max_iterations";
    }
  }

  if (report.stop_reason.empty()) {
    report.stop_reason = "max_iterations";
  }
  report.final_field = std::move(u);
  return report;
}

} // namespace bingham
