#include "bingham/linsolve.hpp"

#include <cmath>

namespace bingham {

LinearSolveResult solve_spd(const SparseSym& A, const Eigen::VectorXd& b, double rel_tol,
                            int max_iter) {
  const Eigen::Index n = A.rows();
  if (rel_tol <= 0.0 || rel_tol >= 1.0) {
    throw std::invalid_argument("solve_spd: rel_tol must lie in (0,1)");
  }
  if (max_iter <= 0) {
    max_iter = 10 * static_cast<int>(n);
  }

  LinearSolveResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    return res;
  }

  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    inv_diag[i] = (d > 0.0) ? 1.0 / d : 1.0;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(n);
  double rz = r.dot(z);

  for (int k = 1; k <= max_iter; ++k) {
    Ap.noalias() = A * p;
    const double pAp = p.dot(Ap);
    if (pAp <= 0.0) {
      throw IndefiniteOperator();
    }
    const double alpha = rz / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    res.iterations = k;
    res.residual = r.norm() / bnorm;
    if (res.residual <= rel_tol) {
      return res;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw LinearSolveFailure(res.residual);
}

} // namespace bingham
