#pragma once

#include "bingham/fem.hpp"

#include <stdexcept>

namespace bingham {

/// Scalar model and regularization parameters.
///   mu    viscosity (> 0)
///   g     yield stress (>= 0)
///   beta  Huber parameter of the strain term (> 0)
///   gamma Huber parameter of the divergence term (> 0)
///   sigma exact-penalty weight (>= 0)
///   nu    quadratic-penalty weight (>= 0)
/// form selects the tensor entering the energy: Sym uses the strain-rate
/// tensor with mu*|Eu|^2, Grad uses the full gradient with (mu/2)*|Du|^2.
struct ModelParams {
  double mu = 1.0;
  double g = 0.0;
  double beta = 1e3;
  double gamma = 1e9;
  double sigma = 0.0;
  double nu = 0.0;
  TensorForm form = TensorForm::Sym;

  /// Coefficient of |T|^2 in the energy for the selected form.
  double quad_energy_coeff() const { return form == TensorForm::Sym ? mu : 0.5 * mu; }
  /// Coefficient of (Tu : Tv) in the first derivative.
  double quad_grad_coeff() const { return 2.0 * quad_energy_coeff(); }

  void validate() const {
    if (mu <= 0.0) throw std::invalid_argument("ModelParams: mu must be positive");
    if (g < 0.0) throw std::invalid_argument("ModelParams: g must be nonnegative");
    if (beta <= 0.0) throw std::invalid_argument("ModelParams: beta must be positive");
    if (gamma <= 0.0) throw std::invalid_argument("ModelParams: gamma must be positive");
    if (sigma < 0.0 || nu < 0.0) {
      throw std::invalid_argument("ModelParams: penalty weights must be nonnegative");
    }
  }
};

/// Measure fractions of the regions where the Huber kernels sit on their
/// affine branch (outside E_beta, resp. outside A_gamma).
struct ActiveSetStats {
  double fraction_strain_inactive = 0.0;
  double fraction_div_inactive = 0.0;
};

} // namespace bingham
