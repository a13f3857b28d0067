#pragma once

#include "bingham/assembly.hpp"
#include "bingham/linsolve.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bingham {

/// Backtracking with polynomial interpolation models; rejected trials are
/// replaced inside [c_l * alpha_prev, c_u * alpha_prev].
struct LineSearchConfig {
  double alpha0 = 1.0;
  double c1 = 1e-4;
  double c_l = 0.1;
  double c_u = 0.5;
  int max_backtracks = 30;

  void validate() const;
};

struct LineSearchFailure : std::runtime_error {
  double last_alpha;
  int evals;
  LineSearchFailure(double alpha, int n)
      : std::runtime_error("line search: max backtracks exceeded"), last_alpha(alpha),
        evals(n) {}
};

struct LineSearchResult {
  double alpha = 0.0;
  int evals = 0;
};

/// Finds the largest tested alpha with
///   objective(alpha) <= objective(0) + c1 * alpha * slope,   slope < 0.
LineSearchResult backtracking_line_search(const std::function<double(double)>& objective,
                                          double phi0, double slope,
                                          const LineSearchConfig& cfg);

struct SolverOptions {
  double tol = 1e-5; // on the descent indicator |<J'(u_k), w_k>|
  int max_iter = 100;
  LineSearchConfig line_search;
  double cg_rel_tol = 1e-10;
  int cg_max_iter = 0; // 0: linsolve default
  bool rank_one_fallback = true;
  int quad_degree = 4;
};

/// One per-iterate telemetry row. `Jpen_value` carries the penalized
/// objective the method minimizes (J_sigma for ep/ssn, J_nu for qp).
struct IterationRecord {
  int k = 0;
  double J_value = 0.0;
  double Jpen_value = 0.0;
  double div_l1 = 0.0;
  double div_l2 = 0.0;
  double descent_indicator = 0.0;
  double alpha = 0.0; // step accepted from this iterate; 0 on the terminal row
  int linear_iters = 0;
  double wall_time_s = 0.0;
};

struct SolveReport {
  std::string method;
  std::vector<IterationRecord> history;
  VelocityField final_field;
  bool converged = false;
  std::string stop_reason;
  int damping_events = 0;          // ssn only
  bool used_rank_one_fallback = false;

  const IterationRecord& last() const { return history.back(); }
};

struct DescentResult {
  VelocityField w;
  Eigen::VectorXd residual; // J'(u) over all dofs
  double slope = 0.0;       // <J'(u), w>
  int linear_iters = 0;
  bool used_fallback = false;
};

/// Solves (J'' + H)(u) w = -J'(u) with homogeneous Dirichlet rows on
/// `dirichlet_dofs`; the simplified direction of the exact-penalty method.
DescentResult descent_direction(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, const Forcing& f,
                                const std::vector<int>& dirichlet_dofs,
                                const SolverOptions& opts = {});

struct DescentDiagnostics {
  double slope = 0.0;    // <J'(u), w>, nonpositive for exact directions
  double wGw = 0.0;      // w . (J''+H) w
  double div_w_l2 = 0.0; // ||Div w||_L2
  double theorem3_ratio = 0.0; // gamma ||Div w||^2 / ||residual||^2, reported only
};

DescentDiagnostics check_descent_properties(const Mesh& mesh, const DofMap& dm,
                                            const VelocityField& u, const VelocityField& w,
                                            const ModelParams& params, const Forcing& f,
                                            const SolverOptions& opts = {});

/// Exact-penalization descent. u0, when given, provides both the initial
/// iterate and the Dirichlet boundary values; it must be divergence-free
/// (checked numerically at startup). Boundary dofs are all of them.
SolveReport ep_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                     const Forcing& f, const std::optional<VelocityField>& u0 = {},
                     const SolverOptions& opts = {});

/// Quadratic-penalization descent on J_nu.
SolveReport qp_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                     const Forcing& f, const std::optional<VelocityField>& u0 = {},
                     const SolverOptions& opts = {});

/// Generalized Newton on the Huberized penalized system: full steps on
/// (J''+H) delta = -(J' + h'); a 0.5 damping kicks in when the residual norm
/// grows by more than 100x. Stops when ||J' + h'|| <= tol on free dofs.
SolveReport ssn_solve(const Mesh& mesh, const DofMap& dm, const ModelParams& params,
                      const Forcing& f, const std::optional<VelocityField>& u0 = {},
                      const SolverOptions& opts = {});

} // namespace bingham
