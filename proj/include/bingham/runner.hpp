#pragma once

#include "bingham/analysis.hpp"
#include "bingham/config.hpp"

#include <optional>

namespace bingham {

/// Everything a configured run needs: discretization, forcing, and the
/// initial/boundary field implied by the preset (zero for rotational and
/// custom, the analytic profile interpolant for poiseuille, the lid lift for
/// lid2d).
struct ProblemSetup {
  Mesh mesh;
  DofMap dofmap;
  Forcing forcing;
  std::optional<VelocityField> initial;
};

ProblemSetup build_problem(const RunConfig& cfg);

struct RunResult {
  SolveReport report;
  std::optional<double> sigma0_estimate;
  std::optional<ErrorNorms> poiseuille_errors;
};

/// Runs the configured method on the configured problem.
RunResult run_experiment(const RunConfig& cfg);

/// history.csv content: fixed header, %.6e numeric formatting.
std::string history_csv(const SolveReport& report);

/// report.json content: method, convergence, final telemetry, extras, and
/// the resolved config.
std::string report_json(const RunConfig& cfg, const RunResult& result);

/// Writes history.csv / report.json / solution.vtk per the output config.
void write_outputs(const RunConfig& cfg, const ProblemSetup& setup, const RunResult& result,
                   const std::string& dir);

struct GradCheckResult {
  double worst_grad_J = 0.0;
  double worst_grad_h = 0.0;
  double worst_hessian = 0.0;
  bool pass = false;
};

/// Finite-difference audit of the first derivatives (5 seeded random fields)
/// and of the generalized second derivatives (margin-checked active sets).
/// `corrupt` perturbs one residual entry, a negative control for the exit
/// status.
GradCheckResult run_gradcheck(unsigned seed, bool corrupt = false, bool print = true);

} // namespace bingham
