#include "tdk/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tdk {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameters: return "invalid-parameters";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::StateValidity: return "state-validity";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::AbortedRun: return "aborted-run";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

PressureLaw PressureLaw::power_law(double g) {
  PressureLaw law;
  law.p = [g](double rho) { return std::pow(rho, g); };
  law.dp = [g](double rho) { return g * std::pow(rho, g - 1.0); };
  std::ostringstream name;
  name << "power-law(" << g << ")";
  law.name = name.str();
  return law;
}

DerivedConstants derive_constants(const ModelParams& params) {
  if (!(params.rho_bar > 0.0))
    fail(ErrorKind::InvalidParameters, "rho_bar must be positive");
  if (!(params.k_bar >= 0.0))
    fail(ErrorKind::InvalidParameters, "k_bar must be non-negative");
  if (!(params.mu > 0.0) || !(params.mu_t >= 0.0))
    fail(ErrorKind::InvalidParameters, "viscosities must satisfy mu > 0, mu_t >= 0");
  if (!(params.c1 > 0.0) || !(params.c2 > 0.0))
    fail(ErrorKind::InvalidParameters, "c1 and c2 must be positive");
  double stiffness = params.pressure.dp(params.rho_bar) + params.k_bar;
  if (!(stiffness > 0.0))
    fail(ErrorKind::InvalidParameters,
         "p'(rho_bar) + k_bar must be positive for a hyperbolic equilibrium");
  return DerivedConstants{std::sqrt(stiffness), 1.0 / params.rho_bar};
}

double sigma(double p, double q, int l) {
  if (!(p >= 1.0)) fail(ErrorKind::Domain, "sigma requires p >= 1");
  if (!(q >= p)) fail(ErrorKind::Domain, "sigma requires q >= p");
  if (l < 0) fail(ErrorKind::Domain, "sigma requires l >= 0");
  double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return 1.5 * (1.0 / p - inv_q) + 0.5 * static_cast<double>(l);
}

double c1_bound(double r1, double r2) {
  if (!(r1 > 1.0)) fail(ErrorKind::Domain, "c1_bound requires r1 > 1");
  if (!(r2 >= 0.0 && r2 <= r1))
    fail(ErrorKind::Domain, "c1_bound requires 0 <= r2 <= r1");
  return std::pow(2.0, r2 + 1.0) / (r1 - 1.0);
}

IterationCap iteration_cap(int n, double p) {
  if (n < 1) fail(ErrorKind::Domain, "iteration_cap requires n >= 1");
  if (!(p >= 1.0 && p < 1.2))
    fail(ErrorKind::Domain, "iteration_cap requires p in [1, 6/5)");
  // Integer-valued arguments land exactly on integers; the nudge keeps floor()
  // from dropping a step to rounding.
  double raw = 2.0 * n * (3.0 / (2.0 * p) - 0.25) - 2.0;
  int value = static_cast<int>(std::floor(raw + 1e-12));
  return IterationCap{value, value >= 0};
}

}  // namespace tdk
