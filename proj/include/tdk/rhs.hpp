/// @file rhs.hpp
/// @brief Nonlinear forcing terms of the perturbation system.
///
/// The evolution splits as  d/dt W = L W + F(W)  with L the linearized
/// generator handled by the semigroup module and F the five forcing slots
/// returned here.  Products are formed pointwise in physical space; results
/// are transformed back and dealiased with the 2/3-style cutoff of the grid.
/// At the exact equilibrium (W = 0) every slot vanishes bitwise, and the
/// density slot F1 = -gamma lambda div(a v) has exactly zero mean because the
/// divergence symbol annihilates the zero mode.

#pragma once

#include "tdk/model.hpp"
#include "tdk/state.hpp"

namespace tdk {

/// Pointwise turbulence production terms (real representation):
///   s_k = mu Sum_ij d_j u_i (d_j u_i + d_i u_j) - (2/3) mu (div u)^2
///         + (mu_t / rho^2) p'(rho) |grad rho|^2
///   g   = mu_e Sum_ij d_j u_i (d_j u_i + d_i u_j)
///         - (2/3) div u (rho k + mu_e div u)
/// evaluated on rho = a + rho_bar, u = gamma lambda v, k = m + k_bar.
struct SourceFields {
  ScalarField s_k;
  ScalarField g;
};

SourceFields turbulence_sources(const PerturbationState& state,
                                const ModelParams& params,
                                const DerivedConstants& con);

/// Pointwise validity floors rho >= 0.1 rho_bar and k >= 0.1 k_bar.
/// A violation raises a state-validity error naming the first offending grid
/// point; values are never clamped.
void check_state_validity(const PerturbationState& state,
                          const ModelParams& params);

/// Evaluate the nonlinear forcing F(W) = (F1, F2, F3, F4, F5), mapped onto
/// the (a, v, h, m, eps) slots of the returned state.  Output is spectral and
/// dealiased.  Validity floors are checked first.
PerturbationState rhs(const PerturbationState& state, const ModelParams& params,
                      const DerivedConstants& con);

}  // namespace tdk
