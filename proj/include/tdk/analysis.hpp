/// @file analysis.hpp
/// @brief Norm battery, energy functional, decay-rate fits, and the
///        convolution inequality checker.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tdk/model.hpp"
#include "tdk/state.hpp"

namespace tdk {

/// One row of the norm battery recorded along a trajectory.
struct NormRecord {
  double t = 0.0;
  double l2 = 0.0;      // L2 of the pointwise 7-component magnitude
  double l3 = 0.0;
  double l6 = 0.0;
  double linf = 0.0;
  double h2grad = 0.0;  // sqrt(sum_{1<=|alpha|<=3} ||d^alpha W||_2^2)
  double dtl2 = 0.0;    // L2 of dW/dt
  double energy = 0.0;  // weighted energy functional, see energy_functional
  double mass = 0.0;    // integral of the density perturbation
};

/// Weighted energy functional
///   M(W) = c1_weight * sum_{1<=|alpha|<=3} ||d^alpha W||_2^2
///        + sum_{1<=|alpha|<=2} <d^alpha v, grad d^alpha a>
/// evaluated as a single spectral mode sum.  Quadratic: M(sW) = s^2 M(W),
/// exactly so in floating point when s is a power of two.
double energy_functional(const PerturbationState& state, double c1_weight);

/// sqrt(sum_{1<=|alpha|<=3} ||d^alpha W||_2^2), all seven components.
double grad_h2_norm(const PerturbationState& state);

/// Smallest constant C2 with (1/C2) Q <= M <= C2 Q over the sample states,
/// where Q = grad_h2_norm^2.  A non-positive M raises a numeric error (the
/// weight is too small for equivalence).
double check_equivalence(const std::vector<PerturbationState>& states,
                         double c1_weight);

/// Battery row for a spectral state and its spectral time derivative.
NormRecord make_norm_record(double t, const PerturbationState& spectral_state,
                            const PerturbationState& spectral_time_derivative,
                            double c1_weight);

void write_norm_csv_header(std::ostream& os);
void write_norm_csv_row(std::ostream& os, const NormRecord& row);
std::vector<NormRecord> read_norm_csv(const std::string& path);

struct FitResult {
  double exponent = 0.0;  // slope on log(1+t); negative for decay
  double intercept = 0.0;
  double residual_rms = 0.0;
  int samples = 0;
};

/// Least-squares exponent of value ~ (1+t)^exponent over t in [t0, t1].
/// Requires at least 8 samples in the window, all positive.
FitResult fit_exponent(const std::vector<double>& t,
                       const std::vector<double>& value, double t0, double t1);

struct FitWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Default window [5, min(50, 0.8 * t_wrap)] capped by the trajectory length;
/// t0 is lowered toward zero when needed so the window spans at least one
/// decade in (1 + t).  Explicit overrides are taken verbatim.
FitWindow resolve_fit_window(double t_max, double t_wrap,
                             std::optional<double> t0_override,
                             std::optional<double> t1_override);

struct ClaimResult {
  std::string name;    // which decay claim
  std::string column;  // battery column fitted
  double target = 0.0; // predicted decay exponent (positive)
  double slack = 0.0;
  FitResult fit;
  bool degenerate = false;
  bool pass = false;
};

struct DecayReport {
  double p = 1.0;
  FitWindow window;
  std::vector<ClaimResult> claims;
  bool degenerate = false;  // identically-zero trajectory: vacuous pass
  bool all_pass = false;
};

/// One-sided decay verdicts: fitted exponent <= -target + slack for
///   amplitude-l2 / l3 / l6   against sigma(p, q; 0), q = 2, 3, 6,
///   max-norm, gradient-energy, time-derivative  against sigma(p, 2; 1).
/// The max-norm claim uses `slack_linf`, all others `slack`.
DecayReport make_decay_report(const std::vector<NormRecord>& records,
                                  double p, const FitWindow& window,
                                  double slack, double slack_linf);

struct ConvolutionCheck {
  double r1 = 0.0, r2 = 0.0, t = 0.0;
  double integral = 0.0;  // int_0^t (1+t-s)^{-r1} (1+s)^{-r2} ds
  double bound = 0.0;     // C1(r1, r2) (1+t)^{-r2}
  double ratio = 0.0;
  bool pass = false;
};

/// Quadrature check of the convolution inequality at the given times.
std::vector<ConvolutionCheck> verify_convolution_bound(
    double r1, double r2, const std::vector<double>& times);

}  // namespace tdk
