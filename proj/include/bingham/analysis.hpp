#pragma once

#include "bingham/assembly.hpp"

#include <functional>

namespace bingham {

/// Piecewise-linear scalar field on mesh vertices (multipliers, pressures).
struct ScalarFieldP1 {
  Eigen::VectorXd vertex_values;
  bool zero_mean = false;
};

double p1_mean(const Mesh& mesh, const ScalarFieldP1& f);
double p1_l2_norm(const Mesh& mesh, const ScalarFieldP1& f);
double p1_l2_error(const Mesh& mesh, const ScalarFieldP1& f,
                   const std::function<double(const Eigen::Vector2d&)>& exact);

/// Channel-flow profile u1(y) between plates y=0 and y=1 under unit pressure
/// drop, yield stress g. Fully rigid (zero) for g >= 1/2.
double poiseuille_exact(double y, double g);
double poiseuille_exact_dy(double y, double g);

struct PoiseuilleSetup {
  ModelParams params; // grad form, mu = 1, g = 0.3
  Forcing forcing;    // constant (1, 0)
  Rect domain;        // unit square
  CoordFunction exact_velocity;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> exact_gradient; // rows per component
};

PoiseuilleSetup poiseuille_setup();

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

ErrorNorms error_norms(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                       const CoordFunction& exact_value,
                       const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& exact_grad,
                       int quad_degree = 6);

/// Least-squares multiplier of the divergence pairing: the zero-mean P1 field
/// minimizing || r - B^T lambda || in the scaled dual norm, with
/// r = assemble_grad_J(u) restricted to free dofs and B the (lambda, Div v)
/// coupling. Solves B M^-1 B^T lambda = B M^-1 r, M a diagonal mass scaling.
ScalarFieldP1 recover_multiplier(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                 const ModelParams& params, const Forcing& f,
                                 int quad_degree = 4);

/// sigma_0 estimate ||lambda||_L2 * |Omega|^exponent. The derivation fixes
/// exponent = -1/2; it is configurable because the two occurrences in the
/// source material disagree (they coincide on unit-area domains).
double estimate_sigma0(const Mesh& mesh, const ScalarFieldP1& lambda,
                       double area_exponent = -0.5);

/// Zero-mean P1 projection of -nu * Div u.
ScalarFieldP1 qp_pressure_estimate(const Mesh& mesh, const DofMap& dm,
                                   const VelocityField& u, const ModelParams& params,
                                   int quad_degree = 4);

} // namespace bingham
