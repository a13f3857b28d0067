#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace bingham {

// Pointwise Huber kernels. The C1 junctions sit at |A| = g/beta for the
// tensor kernel and |z| = sigma/gamma for the scalar one; ties are assigned
// to the quadratic branch.

/// max(g, beta*|A|) for a scalar norm value.
template <typename Scalar>
Scalar theta_beta_norm(Scalar norm_a, Scalar g, Scalar beta) {
  return std::max(g, beta * norm_a);
}

template <typename Derived>
typename Derived::Scalar theta_beta(const Eigen::MatrixBase<Derived>& A,
                                    typename Derived::Scalar g,
                                    typename Derived::Scalar beta) {
  return theta_beta_norm(A.norm(), g, beta);
}

/// Local C1 regularization of g*|A| (Frobenius norm), evaluated from the norm.
template <typename Scalar>
Scalar huber_frobenius_norm(Scalar norm_a, Scalar g, Scalar beta) {
  if (beta * norm_a >= g) {
    return g * norm_a - g * g / (2 * beta);
  }
  return Scalar(0.5) * beta * norm_a * norm_a;
}

template <typename Derived>
typename Derived::Scalar huber_frobenius(const Eigen::MatrixBase<Derived>& A,
                                         typename Derived::Scalar g,
                                         typename Derived::Scalar beta) {
  return huber_frobenius_norm(A.norm(), g, beta);
}

/// Local C1 regularization of sigma*|z|.
template <typename Scalar>
Scalar huber_abs(Scalar z, Scalar sigma, Scalar gamma) {
  const Scalar az = std::abs(z);
  if (gamma * az >= sigma) {
    return sigma * az - sigma * sigma / (2 * gamma);
  }
  return Scalar(0.5) * gamma * az * az;
}

/// Quadratic (active) branch test for the strain kernel; ties are active.
template <typename Scalar>
bool strain_active(Scalar norm_a, Scalar g, Scalar beta) {
  return beta * norm_a <= g;
}

/// Quadratic (active) branch test for the divergence kernel; ties are active.
template <typename Scalar>
bool div_active(Scalar z, Scalar sigma, Scalar gamma) {
  return gamma * std::abs(z) <= sigma;
}

/// Measurable selection of the generalized Jacobian of the scalar map
/// z -> sigma*gamma*z / max(sigma, gamma|z|). The two inactive-branch terms
/// cancel exactly in one dimension; both are kept as written.
template <typename Scalar>
Scalar div_selection_weight(Scalar z, Scalar sigma, Scalar gamma) {
  if (div_active(z, sigma, gamma)) {
    return gamma;
  }
  const Scalar az = std::abs(z);
  return sigma / az - sigma * (z * z) / (az * az * az);
}

} // namespace bingham
