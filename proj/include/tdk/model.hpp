/// @file model.hpp
/// @brief Model constants, decay-rate bookkeeping, and the equilibrium /
///        perturbation change of variables for the compressible k-epsilon system.
///
/// The system couples density rho, velocity u, enthalpy-like scalar h,
/// turbulent kinetic energy k and its dissipation rate eps around the constant
/// equilibrium (rho_bar, 0, 0, k_bar, 0).  Perturbation variables are
///   a = rho - rho_bar,  v = u / (gamma*lambda),  h,  m = k - k_bar,  eps,
/// with gamma = sqrt(p'(rho_bar) + k_bar) and lambda = 1/rho_bar, which
/// symmetrizes the acoustic part of the linearization.

#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "tdk/errors.hpp"

namespace tdk {

/// Barotropic pressure law; dp must be the exact derivative of p.
struct PressureLaw {
  std::function<double(double)> p;
  std::function<double(double)> dp;
  std::string name;

  /// p(rho) = rho^g; the default law (g = 1.4 unless overridden).
  static PressureLaw power_law(double g);
};

struct ModelParams {
  double rho_bar = 1.0;  // equilibrium density, > 0
  double k_bar = 1.0;    // equilibrium turbulent energy, >= 0
  double mu = 1.0;       // molecular viscosity in the k/eps sources
  double mu_t = 1.0;     // eddy viscosity in the k/eps sources (mu_e = mu + mu_t)
  double c1 = 1.44;      // eps-equation production constant
  double c2 = 1.92;      // eps-equation destruction constant
  PressureLaw pressure = PressureLaw::power_law(1.4);

  double mu_e() const { return mu + mu_t; }
};

/// Constants of the symmetrized linear system.
struct DerivedConstants {
  double gamma;   // sqrt(p'(rho_bar) + k_bar), acoustic coupling
  double lambda;  // 1/rho_bar, effective diffusivity
};

/// Errors unless p'(rho_bar) + k_bar > 0 (hyperbolicity) and rho_bar > 0.
DerivedConstants derive_constants(const ModelParams& params);

/// Whole-space decay exponent sigma(p, q; l) = (3/2)(1/p - 1/q) + l/2 governing
/// ||grad^l U(t)||_q for L^p initial data.  Requires 1 <= p <= q (q may be
/// infinity) and l >= 0.
double sigma(double p, double q, int l);

/// Sharp constant 2^(r2+1)/(r1-1) bounding
/// int_0^t (1+t-s)^(-r1) (1+s)^(-r2) ds <= C1 * (1+t)^(-r2)
/// for r1 > 1 and 0 <= r2 <= r1.
double c1_bound(double r1, double r2);

struct IterationCap {
  int value;    // floor(2n(3/(2p) - 1/4) - 2); may be negative
  bool usable;  // value >= 0
};

/// Number of usable steps in the decay-bootstrap iteration for integrability
/// exponent p in [1, 6/5) and regularity index n >= 1.
IterationCap iteration_cap(int n, double p);

}  // namespace tdk
