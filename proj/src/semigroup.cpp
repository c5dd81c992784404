#include "tdk/semigroup.hpp"

#include <cmath>

#include "tdk/quadrature.hpp"
#include "tdk/symbols.hpp"

namespace tdk {

namespace {

// Branch-free closed form; see the header notes.  No argument validation so
// the per-mode loops stay cheap; the public wrappers validate once.
std::array<double, 4> mode_entries_raw(double k, double t,
                                       const DerivedConstants& con) {
  if (k == 0.0) return {1.0, 0.0, 0.0, 1.0};
  const double gamma = con.gamma;
  const double lambda = con.lambda;
  const double k2 = k * k;
  const double disc = k2 * (lambda * lambda * k2 - gamma * gamma);
  const double w = t * t * disc;

  if (disc > 0.0 && w > 1e-8) {
    // Overdamped: two real decaying exponentials.  The slow eigenvalue is
    // computed without cancellation as z+ = -gamma^2 k^2 / (lambda k^2 + sqrt(disc)).
    const double root = std::sqrt(disc);
    const double zp = -(gamma * gamma * k2) / (lambda * k2 + root);
    const double zm = -(lambda * k2 + root);
    const double ep = std::exp(zp * t);
    const double em = std::exp(zm * t);
    const double inv = 1.0 / (zp - zm);
    const double off = gamma * k * (ep - em) * inv;
    return {(em * zp - ep * zm) * inv, -off, off, (ep * zp - em * zm) * inv};
  }

  // Oscillatory, degenerate, or mildly damped: e^{zt}[C I + t S (M - zI)].
  double c_w;
  double s_w;
  if (std::abs(w) < 1e-4) {
    c_w = 1.0 + w * (0.5 + w * (1.0 / 24.0 + w / 720.0));
    s_w = 1.0 + w * (1.0 / 6.0 + w * (1.0 / 120.0 + w / 5040.0));
  } else if (w > 0.0) {
    const double rw = std::sqrt(w);
    c_w = std::cosh(rw);
    s_w = std::sinh(rw) / rw;
  } else {
    const double rw = std::sqrt(-w);
    c_w = std::cos(rw);
    s_w = std::sin(rw) / rw;
  }
  const double ezt = std::exp(-lambda * k2 * t);
  const double diag = t * s_w * lambda * k2;
  const double off = ezt * t * s_w * gamma * k;
  return {ezt * (c_w + diag), -off, off, ezt * (c_w - diag)};
}

void require_time(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::Domain, "semigroup time must be >= 0");
}

// Shared per-mode linear flow.  `heat_only` fields get the scalar factor;
// when `a` is present the acoustic block acts on (a, longitudinal v) and the
// transverse velocity part gets the heat factor.
void evolve_modes(const Grid& grid, double t, const DerivedConstants& con,
                  std::complex<double>* a, std::array<std::complex<double>*, 3> v,
                  const std::vector<std::complex<double>*>& heat_only) {
  const int n = grid.n;
  const int half = n / 2 + 1;
  const std::complex<double> im(0.0, 1.0);
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const double tx = axis_wavenumber(grid, j0, 1);
    for (int j1 = 0; j1 < n; ++j1) {
      const double ty = axis_wavenumber(grid, j1, 1);
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double tz = axis_wavenumber(grid, j2, 1);
        const double k2 = tx * tx + ty * ty + tz * tz;
        const double heat = std::exp(-con.lambda * k2 * t);
        for (auto* f : heat_only) f[idx] *= heat;
        if (a == nullptr) continue;
        if (k2 == 0.0) continue;  // zero mode of (a, v) is conserved
        const double k = std::sqrt(k2);
        const auto ent = mode_entries_raw(k, t, con);
        const std::complex<double> d =
            tx * v[0][idx] + ty * v[1][idx] + tz * v[2][idx];
        const std::complex<double> w_amp = im * d / k;
        const std::complex<double> a_new = ent[0] * a[idx] + ent[1] * w_amp;
        const std::complex<double> w_new = ent[2] * a[idx] + ent[3] * w_amp;
        a[idx] = a_new;
        // v = transverse * heat + xi * (new longitudinal amplitude)
        const std::complex<double> long_scale = -im * w_new / k;
        const std::complex<double> old_long = d / k2;
        v[0][idx] = (v[0][idx] - tx * old_long) * heat + tx * long_scale;
        v[1][idx] = (v[1][idx] - ty * old_long) * heat + ty * long_scale;
        v[2][idx] = (v[2][idx] - tz * old_long) * heat + tz * long_scale;
      }
    }
  }
}

}  // namespace

std::array<double, 4> acoustic_mode_entries(double xi_abs, double t,
                                            const DerivedConstants& con) {
  if (!(xi_abs >= 0.0)) fail(ErrorKind::Domain, "acoustic_mode requires |xi| >= 0");
  require_time(t);
  return mode_entries_raw(xi_abs, t, con);
}

Mode2 acoustic_mode(double xi_abs, double t, const DerivedConstants& con) {
  const auto ent = acoustic_mode_entries(xi_abs, t, con);
  Mode2 m;
  for (int i = 0; i < 4; ++i) m.e[i] = std::complex<double>(ent[i], 0.0);
  return m;
}

AcousticPair apply_E(const ScalarField& a0, const std::array<ScalarField, 3>& v0,
                     double t, const DerivedConstants& con) {
  require_time(t);
  for (const auto& comp : v0) {
    if (!(comp.grid() == a0.grid())) {
      fail(ErrorKind::Shape, "apply_E: velocity component grid mismatch");
    }
  }
  const bool was_real = a0.rep() == ScalarField::Rep::Real;
  AcousticPair out{a0.to_spectral(), {v0[0].to_spectral(), v0[1].to_spectral(),
                                      v0[2].to_spectral()}};
  evolve_modes(a0.grid(), t, con, out.a.spectral_data().data(),
               {out.v[0].spectral_data().data(), out.v[1].spectral_data().data(),
                out.v[2].spectral_data().data()},
               {});
  if (was_real) {
    out.a = out.a.to_real();
    for (auto& comp : out.v) comp = comp.to_real();
  }
  return out;
}

ScalarField apply_S(const ScalarField& f0, double t, const DerivedConstants& con) {
  require_time(t);
  const bool was_real = f0.rep() == ScalarField::Rep::Real;
  ScalarField out = f0.to_spectral();
  evolve_modes(f0.grid(), t, con, nullptr, {{nullptr, nullptr, nullptr}},
               {out.spectral_data().data()});
  if (was_real) out.to_real();
  return out;
}

void apply_linear(PerturbationState& state, double t, const DerivedConstants& con) {
  require_time(t);
  state = state.to_spectral();
  evolve_modes(state.grid(), t, con, state.a.spectral_data().data(),
               {state.v[0].spectral_data().data(), state.v[1].spectral_data().data(),
                state.v[2].spectral_data().data()},
               {state.h.spectral_data().data(), state.m.spectral_data().data(),
                state.eps.spectral_data().data()});
}

namespace {

struct Lattice {
  std::vector<double> r;
  std::vector<double> weight;
};

// Geometric octave panels [ximax 2^{-j-1}, ximax 2^{-j}] plus an innermost
// stub [0, ximax 2^{-panels}], Gauss-Legendre within each.
Lattice build_lattice(double xi_max, int panels, int order) {
  const QuadratureRule& rule = gauss_legendre(order);
  Lattice lat;
  lat.r.reserve(static_cast<std::size_t>(panels + 1) * order);
  lat.weight.reserve(lat.r.capacity());
  double hi = xi_max * std::pow(0.5, panels);
  // innermost stub first so abscissae come out ascending
  {
    const double mid = 0.5 * hi;
    const double rad = 0.5 * hi;
    for (int i = 0; i < order; ++i) {
      lat.r.push_back(mid + rad * rule.nodes[i]);
      lat.weight.push_back(rad * rule.weights[i]);
    }
  }
  for (int j = panels - 1; j >= 0; --j) {
    const double lo = xi_max * std::pow(0.5, j + 1);
    const double up = xi_max * std::pow(0.5, j);
    const double mid = 0.5 * (lo + up);
    const double rad = 0.5 * (up - lo);
    for (int i = 0; i < order; ++i) {
      lat.r.push_back(mid + rad * rule.nodes[i]);
      lat.weight.push_back(rad * rule.weights[i]);
    }
  }
  return lat;
}

RadialProfile sample_profile(const std::function<double(double)>& profile,
                             double xi_max, int panels, int order) {
  Lattice lat = build_lattice(xi_max, panels, order);
  RadialProfile out;
  out.r = std::move(lat.r);
  out.weight = std::move(lat.weight);
  out.value.resize(out.r.size());
  for (std::size_t i = 0; i < out.r.size(); ++i) out.value[i] = profile(out.r[i]);
  out.xi_max = xi_max;
  return out;
}

double mass_l2(const RadialProfile& p, double t, int l, double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double r = p.r[i];
    double rpow = r * r;
    for (int a = 0; a < l; ++a) rpow *= r * r;
    sum += p.weight[i] * rpow * std::exp(-2.0 * lambda * r * r * t) *
           p.value[i] * p.value[i];
  }
  return 4.0 * M_PI * sum;
}

}  // namespace

RadialProfile make_radial_profile(const std::function<double(double)>& profile,
                                  const RadialProfileOptions& opts) {
  if (opts.panels < 4 || opts.panels > 256) {
    fail(ErrorKind::InvalidParameters, "radial profile: panels must be in [4, 256]");
  }
  if (opts.points_per_panel < 4 || opts.points_per_panel > 64) {
    fail(ErrorKind::InvalidParameters,
         "radial profile: points_per_panel must be in [4, 64]");
  }
  if (!(opts.tail_tol > 0.0)) {
    fail(ErrorKind::InvalidParameters, "radial profile: tail_tol must be > 0");
  }

  // Grow the truncation radius until the outermost octave carries a
  // negligible share of the t = 0 mass.
  double xi_max = opts.xi_max_hint > 0.0 ? opts.xi_max_hint : 4.0;
  const QuadratureRule& probe = gauss_legendre(24);
  bool settled = false;
  for (int attempt = 0; attempt < 40; ++attempt) {
    auto octave_mass = [&](double lo, double hi) {
      const double mid = 0.5 * (lo + hi);
      const double rad = 0.5 * (hi - lo);
      double sum = 0.0;
      for (std::size_t i = 0; i < probe.nodes.size(); ++i) {
        const double r = mid + rad * probe.nodes[i];
        const double f = profile(r);
        sum += probe.weights[i] * r * r * f * f;
      }
      return rad * sum;
    };
    double total = 0.0;
    for (int j = 0; j < opts.panels; ++j) {
      total += octave_mass(xi_max * std::pow(0.5, j + 1), xi_max * std::pow(0.5, j));
    }
    total += octave_mass(0.0, xi_max * std::pow(0.5, opts.panels));
    const double top = octave_mass(0.5 * xi_max, xi_max);
    if (total == 0.0) {
      fail(ErrorKind::InvalidParameters, "radial profile is identically zero");
    }
    if (top <= opts.tail_tol * total) {
      settled = true;
      break;
    }
    xi_max *= 2.0;
  }
  if (!settled) {
    fail(ErrorKind::Truncation,
         "radial profile tail does not decay: truncation criterion unreachable");
  }

  // Quadrature self-check: the norm must be stable under order refinement at
  // representative decay times; raise the order if it is not.
  int order = opts.points_per_panel;
  RadialProfile candidate = sample_profile(profile, xi_max, opts.panels, order);
  for (;;) {
    RadialProfile refined =
        sample_profile(profile, xi_max, opts.panels, order + 8);
    double worst = 0.0;
    for (double t : {0.0, 1.0, 100.0, 1e4}) {
      for (int l : {0, 2}) {
        const double a = mass_l2(candidate, t, l, 1.0);
        const double b = mass_l2(refined, t, l, 1.0);
        const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        worst = std::max(worst, std::abs(a - b) / scale);
      }
    }
    if (worst < 1e-11) break;
    order += 8;
    candidate = std::move(refined);
    if (order > 56) {
      fail(ErrorKind::Numeric, "radial quadrature failed to converge");
    }
  }
  return candidate;
}

RadialProfile gaussian_radial_profile(double amplitude, double s,
                                      const RadialProfileOptions& opts) {
  if (!(s > 0.0)) {
    fail(ErrorKind::InvalidParameters, "gaussian profile requires width s > 0");
  }
  const double coef = amplitude * std::pow(2.0 * s, 1.5);
  return make_radial_profile(
      [coef, s](double r) { return coef * std::exp(-s * r * r); }, opts);
}

double radial_l2_norm(const RadialProfile& profile, double t, int l,
                      const DerivedConstants& con) {
  require_time(t);
  if (l < 0 || l > 4) fail(ErrorKind::Domain, "radial_l2_norm requires 0 <= l <= 4");
  if (profile.r.empty()) fail(ErrorKind::Shape, "radial profile is empty");
  return std::sqrt(mass_l2(profile, t, l, con.lambda));
}

double radial_acoustic_l2_norm(const RadialProfile& profile_a,
                               const RadialProfile& profile_w, double t, int l,
                               const DerivedConstants& con) {
  require_time(t);
  if (l < 0 || l > 4) {
    fail(ErrorKind::Domain, "radial_acoustic_l2_norm requires 0 <= l <= 4");
  }
  if (profile_a.r.size() != profile_w.r.size() || profile_a.r != profile_w.r) {
    fail(ErrorKind::Shape, "acoustic radial profiles must share one lattice");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < profile_a.r.size(); ++i) {
    const double r = profile_a.r[i];
    const auto ent = mode_entries_raw(r, t, con);
    const double ea = ent[0] * profile_a.value[i] + ent[1] * profile_w.value[i];
    const double ew = ent[2] * profile_a.value[i] + ent[3] * profile_w.value[i];
    double rpow = r * r;
    for (int a = 0; a < l; ++a) rpow *= r * r;
    sum += profile_a.weight[i] * rpow * (ea * ea + ew * ew);
  }
  return std::sqrt(4.0 * M_PI * sum);
}

}  // namespace tdk
