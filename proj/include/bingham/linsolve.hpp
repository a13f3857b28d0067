#pragma once

#include "bingham/fem.hpp"

#include <stdexcept>

namespace bingham {

struct LinearSolveResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0; // relative
};

/// Linear solver did not reach the requested tolerance within max_iter.
struct LinearSolveFailure : std::runtime_error {
  double residual;
  explicit LinearSolveFailure(double res)
      : std::runtime_error("solve_spd: max iterations exceeded"), residual(res) {}
};

/// CG met a direction of nonpositive curvature; the operator is not SPD in
/// floating point. Callers may retry with the rank-one terms dropped.
struct IndefiniteOperator : std::runtime_error {
  IndefiniteOperator() : std::runtime_error("solve_spd: nonpositive curvature detected") {}
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive-definite
/// systems. max_iter = 0 selects the default 10 * dimension.
LinearSolveResult solve_spd(const SparseSym& A, const Eigen::VectorXd& b,
                            double rel_tol = 1e-10, int max_iter = 0);

} // namespace bingham
