/// @file semigroup.hpp
/// @brief Exact solution operators for the linearized perturbation system.
///
/// Per Fourier mode the linear dynamics decouple into
///   * a 2x2 acoustic block coupling the density amplitude `a_hat` to the
///     longitudinal velocity amplitude `w_hat = i xi.v_hat / |xi|`, with
///     generator  M(xi) = [[0, -gamma|xi|], [gamma|xi|, -2 lambda |xi|^2]];
///   * scalar heat factors exp(-lambda |xi|^2 t) for the transverse
///     (divergence-free) velocity part and for each of h, m, eps.
///
/// On the discrete torus every first-order derivative uses the odd symbol
/// (zero at the Nyquist index), and the semigroup is generated by
/// compositions of that operator.  All |xi| appearing here are therefore the
/// odd-symbol magnitudes; modes supported only on Nyquist indices are
/// conserved.  This keeps real input exactly real, makes the semigroup law
/// hold mode-by-mode, and matches the symbols used for derivatives of odd
/// order elsewhere in the library.
///
/// The matrix exponential is evaluated in closed form through a branch-free
/// representation: with z = -lambda k^2 (half-trace) and
/// disc = lambda^2 k^4 - gamma^2 k^2 the identity (M - zI)^2 = disc * I gives
///   exp(tM) = e^{zt} [ C(w) I + t S(w) (M - zI) ],   w = t^2 disc,
/// where C(w) = cosh(sqrt(w)) and S(w) = sinh(sqrt(w))/sqrt(w) continue
/// analytically through w <= 0 (cosine/sinc) and through the degenerate
/// double-eigenvalue point w = 0.  A uniform power series handles |w| small;
/// for strongly overdamped modes the numerically stable two-exponential
/// spectral form (with the small eigenvalue computed cancellation-free) is
/// used instead.  Entries are real for every (k, t).

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "tdk/field.hpp"
#include "tdk/model.hpp"
#include "tdk/state.hpp"

namespace tdk {

/// 2x2 complex matrix, row-major.  Acoustic blocks are real-valued; the
/// complex carrier keeps the interface uniform with spectral coefficients.
struct Mode2 {
  std::array<std::complex<double>, 4> e;

  std::complex<double>& operator()(int r, int c) { return e[2 * r + c]; }
  const std::complex<double>& operator()(int r, int c) const { return e[2 * r + c]; }
};

/// Real entries {e00, e01, e10, e11} of exp(t M(|xi|)).
std::array<double, 4> acoustic_mode_entries(double xi_abs, double t,
                                            const DerivedConstants& con);

/// exp(t M(|xi|)) as a complex 2x2 matrix (imaginary parts exactly zero).
Mode2 acoustic_mode(double xi_abs, double t, const DerivedConstants& con);

/// Density/velocity pair evolved by the acoustic-viscous semigroup.
struct AcousticPair {
  ScalarField a;
  std::array<ScalarField, 3> v;
};

/// Evolve (a0, v0) by the linearized acoustic-viscous flow for time t.
/// Output representation matches the input (real in -> real out).
AcousticPair apply_E(const ScalarField& a0, const std::array<ScalarField, 3>& v0,
                     double t, const DerivedConstants& con);

/// Scalar heat semigroup exp(lambda t Laplacian) (odd-symbol wavenumbers).
ScalarField apply_S(const ScalarField& f0, double t, const DerivedConstants& con);

/// Full linear propagator on a 7-component perturbation state: acoustic
/// block on (a, longitudinal v), heat factors on transverse v and h, m, eps.
/// The state is converted to spectral representation in place.
void apply_linear(PerturbationState& state, double t, const DerivedConstants& con);

/// Radial samples of a spherically symmetric transform profile, with
/// quadrature weights for whole-space L2 integrals.  Values use the unitary
/// transform normalization, so at t = 0
///   ||f||_L2^2 = integral 4 pi r^2 |profile(r)|^2 dr
/// holds exactly and heat decay multiplies the integrand by exp(-2 lambda r^2 t).
struct RadialProfile {
  std::vector<double> r;       // quadrature abscissae, descending panels merged
  std::vector<double> weight;  // matching quadrature weights
  std::vector<double> value;   // profile samples at r
  double xi_max = 0.0;         // truncation radius actually used
};

struct RadialProfileOptions {
  int panels = 64;            // geometric octave panels below xi_max
  int points_per_panel = 24;  // Gauss-Legendre order within each panel
  double tail_tol = 1e-10;    // relative tail mass allowed beyond xi_max
  double xi_max_hint = 0.0;   // starting truncation radius (0 = automatic)
};

/// Sample a radial transform profile on a truncated geometric-panel lattice.
/// The truncation radius grows until the outermost octave carries less than
/// `tail_tol` of the L2 mass; failure to decay raises a truncation error.
RadialProfile make_radial_profile(const std::function<double(double)>& profile,
                                  const RadialProfileOptions& opts = {});

/// Profile of the Gaussian A exp(-|x|^2 / (4 s)) in the unitary convention:
/// A (2 s)^{3/2} exp(-s r^2).
RadialProfile gaussian_radial_profile(double amplitude, double s,
                                      const RadialProfileOptions& opts = {});

/// || |grad|^l S(t) f ||_L2 over the whole space from a radial profile.
double radial_l2_norm(const RadialProfile& profile, double t, int l,
                      const DerivedConstants& con);

/// Whole-space L2 norm of the acoustic pair evolved from radial profiles
/// (a0_hat = profile_a, w0_hat = profile_w on the same lattice), with an
/// optional derivative weight |xi|^l.
double radial_acoustic_l2_norm(const RadialProfile& profile_a,
                               const RadialProfile& profile_w, double t, int l,
                               const DerivedConstants& con);

}  // namespace tdk
