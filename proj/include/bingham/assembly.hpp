#pragma once

#include "bingham/model.hpp"

#include <utility>

namespace bingham {

using Forcing = CoordFunction;

/// Forcing that is identically zero.
Forcing zero_forcing();

struct AssemblyOptions {
  int quad_degree = 4;
  bool drop_rank_one = false; // positive-definiteness fallback
};

/// Huber-regularized Bingham energy
///   J(u) = c_e * int |Tu|^2 + int Psi(Tu) - int f.u,
/// with Tu the form's tensor and c_e its energy coefficient.
double eval_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
              const ModelParams& params, const Forcing& f, int quad_degree = 4);

/// J(u) + sigma * ||Div u||_L1 (exact penalty, not its Huber surrogate).
double eval_Jsigma(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                   const ModelParams& params, const Forcing& f, int quad_degree = 4);

/// J(u) + (nu/2) * ||Div u||_L2^2.
double eval_Jnu(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                const ModelParams& params, const Forcing& f, int quad_degree = 4);

/// Residual r with r.v = c_g int Tu:Tv + g int beta (Tu:Tv)/theta_beta - int f.v.
Eigen::VectorXd assemble_grad_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, const Forcing& f,
                                int quad_degree = 4);

/// Derivative of int |Div u|_gamma: s.v = sigma int gamma (Div u)(Div v)/max(sigma, gamma|Div u|).
Eigen::VectorXd assemble_grad_h(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, int quad_degree = 4);

/// Derivative of the quadratic divergence penalty: nu int (Div u)(Div v).
Eigen::VectorXd assemble_grad_div_quadratic(const Mesh& mesh, const DofMap& dm,
                                            const VelocityField& u, double nu,
                                            int quad_degree = 4);

/// Generalized second derivative of J; branch decided per quadrature point.
SparseSym assemble_hessian_J(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                             const ModelParams& params, const AssemblyOptions& opts = {});

/// Generalized second derivative of the Huberized divergence penalty.
SparseSym assemble_hessian_H(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                             const ModelParams& params, const AssemblyOptions& opts = {});

/// coeff * int (Div w)(Div v); the quadratic-penalty Hessian.
SparseSym assemble_divdiv(const Mesh& mesh, const DofMap& dm, double coeff,
                          int quad_degree = 4);

/// int Tw : Tv for the given form.
SparseSym assemble_strain_stiffness(const Mesh& mesh, const DofMap& dm, TensorForm form,
                                    int quad_degree = 4);

/// Load vector (f, v).
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm, const Forcing& f,
                              int quad_degree = 4);

ActiveSetStats active_set_stats(const Mesh& mesh, const DofMap& dm, const VelocityField& u,
                                const ModelParams& params, int quad_degree = 4);

/// (||Div u||_L1, ||Div u||_L2).
std::pair<double, double> div_norms(const Mesh& mesh, const DofMap& dm,
                                    const VelocityField& u, int quad_degree = 4);

} // namespace bingham
