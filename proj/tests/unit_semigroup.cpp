// Unit tests for the exact linear solution operators: the closed-form 2x2
// acoustic exponential, grid propagators, and the whole-space radial
// quadrature used as the box-free reference.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdk/errors.hpp"
#include "tdk/semigroup.hpp"

using namespace tdk;

namespace {
constexpr double kPi = 3.14159265358979323846;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error to be thrown");
  return ErrorKind::Numeric;
}

// Independent 2x2 matrix exponential: scaling and squaring with a 30-term
// Taylor series in extended precision.
std::array<double, 4> expm2_oracle(const std::array<double, 4>& m, double t) {
  long double a[4] = {m[0] * (long double)t, m[1] * (long double)t,
                      m[2] * (long double)t, m[3] * (long double)t};
  long double norm = std::max(std::fabs(a[0]) + std::fabs(a[1]),
                              std::fabs(a[2]) + std::fabs(a[3]));
  int squarings = 0;
  while (norm > 0.25L) {
    norm /= 2.0L;
    ++squarings;
  }
  const long double scale = std::pow(0.5L, squarings);
  for (auto& x : a) x *= scale;
  long double r[4] = {1, 0, 0, 1};
  long double term[4] = {1, 0, 0, 1};
  for (int j = 1; j <= 30; ++j) {
    const long double t0 = (term[0] * a[0] + term[1] * a[2]) / j;
    const long double t1 = (term[0] * a[1] + term[1] * a[3]) / j;
    const long double t2 = (term[2] * a[0] + term[3] * a[2]) / j;
    const long double t3 = (term[2] * a[1] + term[3] * a[3]) / j;
    term[0] = t0;
    term[1] = t1;
    term[2] = t2;
    term[3] = t3;
    for (int i = 0; i < 4; ++i) r[i] += term[i];
  }
  for (int sq = 0; sq < squarings; ++sq) {
    const long double r0 = r[0] * r[0] + r[1] * r[2];
    const long double r1 = r[0] * r[1] + r[1] * r[3];
    const long double r2 = r[2] * r[0] + r[3] * r[2];
    const long double r3 = r[2] * r[1] + r[3] * r[3];
    r[0] = r0;
    r[1] = r1;
    r[2] = r2;
    r[3] = r3;
  }
  return {static_cast<double>(r[0]), static_cast<double>(r[1]),
          static_cast<double>(r[2]), static_cast<double>(r[3])};
}

std::array<double, 4> generator(double k, const DerivedConstants& con) {
  return {0.0, -con.gamma * k, con.gamma * k, -2.0 * con.lambda * k * k};
}

std::array<double, 4> multiply(const std::array<double, 4>& a,
                               const std::array<double, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

double max_field_diff(const ScalarField& a, const ScalarField& b) {
  const ScalarField ra = a.to_real();
  const ScalarField rb = b.to_real();
  const auto& da = ra.real_data();
  const auto& db = rb.real_data();
  double m = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}
}  // namespace

TEST_CASE("acoustic block is the identity at t = 0 and k = 0") {
  const DerivedConstants con{1.3, 0.7};
  for (double k : {0.0, 0.3, 2.0, 40.0}) {
    const auto e = acoustic_mode_entries(k, 0.0, con);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(0.0));
    CHECK(e[2] == doctest::Approx(0.0));
    CHECK(e[3] == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (double t : {0.1, 3.0, 1e4}) {
    const auto e = acoustic_mode_entries(0.0, t, con);
    CHECK(e[0] == 1.0);
    CHECK(e[1] == 0.0);
    CHECK(e[2] == 0.0);
    CHECK(e[3] == 1.0);
  }
}

TEST_CASE("acoustic block matches an independent Taylor exponential") {
  // Both real-eigenvalue (overdamped) and complex (oscillatory) regimes,
  // plus near-degenerate wavenumbers.
  for (auto con : {DerivedConstants{1.0, 1.0}, DerivedConstants{1.3, 0.7},
                   DerivedConstants{0.2, 2.0}}) {
    for (double k : {0.05, 0.5, 1.0, 1.0 + 1e-7, 2.0, 7.5}) {
      for (double t : {0.1, 1.0, 10.0}) {
        const auto got = acoustic_mode_entries(k, t, con);
        const auto want = expm2_oracle(generator(k, con), t);
        for (int i = 0; i < 4; ++i)
          CHECK(got[i] == doctest::Approx(want[i]).epsilon(5e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("degenerate wavenumber reproduces the Jordan-block closed form") {
  // gamma = lambda = 1, k = 1: double eigenvalue -1, exp = e^{-t}(I + t(M+I)).
  const DerivedConstants con{1.0, 1.0};
  for (double t : {0.05, 0.5, 2.0, 8.0}) {
    const auto e = acoustic_mode_entries(1.0, t, con);
    const double f = std::exp(-t);
    CHECK(e[0] == doctest::Approx(f * (1.0 + t)).epsilon(1e-13));
    CHECK(e[1] == doctest::Approx(-f * t).epsilon(1e-13));
    CHECK(e[2] == doctest::Approx(f * t).epsilon(1e-13));
    CHECK(e[3] == doctest::Approx(f * (1.0 - t)).epsilon(1e-13));
  }
  // Entries are continuous across the degeneracy.
  const auto at = acoustic_mode_entries(1.0, 1.0, con);
  const auto lo = acoustic_mode_entries(1.0 - 1e-8, 1.0, con);
  const auto hi = acoustic_mode_entries(1.0 + 1e-8, 1.0, con);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(at[i] - lo[i]) < 1e-7);
    CHECK(std::abs(at[i] - hi[i]) < 1e-7);
  }
}

TEST_CASE("acoustic block satisfies the semigroup law") {
  const DerivedConstants con{1.3, 0.7};
  for (double k : {1e-3, 0.02, 0.5, con.gamma / con.lambda, 2.0, 5.5, 30.0}) {
    for (double t : {0.05, 0.4, 1.7}) {
      for (double s : {0.05, 0.3, 3.0}) {
        const auto ets = acoustic_mode_entries(k, t + s, con);
        const auto comp =
            multiply(acoustic_mode_entries(k, t, con), acoustic_mode_entries(k, s, con));
        for (int i = 0; i < 4; ++i)
          CHECK(ets[i] == doctest::Approx(comp[i]).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("acoustic evolution never amplifies the mode energy") {
  const DerivedConstants con{1.3, 0.7};
  for (double k : {0.05, 0.7, con.gamma / con.lambda, 3.0, 25.0}) {
    for (double t : {0.01, 0.5, 5.0, 500.0}) {
      const auto e = acoustic_mode_entries(k, t, con);
      for (double th = 0.0; th < 6.28; th += 0.39) {
        const double x0 = std::cos(th), x1 = std::sin(th);
        const double y0 = e[0] * x0 + e[1] * x1;
        const double y1 = e[2] * x0 + e[3] * x1;
        CHECK(y0 * y0 + y1 * y1 <= 1.0 + 1e-13);
      }
    }
  }
}

TEST_CASE("strongly overdamped modes evaluate without overflow") {
  const DerivedConstants con{0.01, 1.0};  // gamma tiny: disc >> 0
  const double k = 30.0;
  const double root = std::sqrt(con.lambda * con.lambda * std::pow(k, 4.0) -
                                con.gamma * con.gamma * k * k);
  const double z_slow = -con.gamma * con.gamma * k * k /
                        (con.lambda * k * k + root);
  for (double t : {1.0, 100.0, 1000.0}) {
    const auto e = acoustic_mode_entries(k, t, con);
    for (double x : e) CHECK(std::isfinite(x));
    // The slow eigenvalue dominates; e00 tracks exp(z_slow t) closely.
    CHECK(e[0] == doctest::Approx(std::exp(z_slow * t)).epsilon(1e-6));
    CHECK(std::abs(e[1]) < 1e-3);
  }
  CHECK(kind_of([&] { acoustic_mode_entries(1.0, -0.5, con); }) == ErrorKind::Domain);
}

TEST_CASE("acoustic_mode wraps the entries with exactly-zero imaginary parts") {
  const DerivedConstants con{1.3, 0.7};
  const Mode2 m = acoustic_mode(2.2, 0.7, con);
  const auto e = acoustic_mode_entries(2.2, 0.7, con);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      CHECK(m(r, c).real() == e[2 * r + c]);
      CHECK(m(r, c).imag() == 0.0);
    }
}

TEST_CASE("apply_E leaves divergence-free velocity on the heat flow") {
  const Grid g = Grid::make(16, 2.5);
  const DerivedConstants con{1.3, 0.7};
  const double xi = 2.0 * kPi / 2.5;
  const double t = 0.3;
  std::array<ScalarField, 3> v{
      ScalarField::from_function(g, [&](double, double y, double) { return std::sin(xi * y); }),
      ScalarField::zeros(g), ScalarField::zeros(g)};
  const ScalarField a0 = ScalarField::zeros(g);
  const AcousticPair out = apply_E(a0, v, t, con);
  CHECK(out.a.rep() == ScalarField::Rep::Real);
  const double decay = std::exp(-con.lambda * xi * xi * t);
  const ScalarField expect = ScalarField::from_function(
      g, [&](double, double y, double) { return decay * std::sin(xi * y); });
  CHECK(max_field_diff(out.v[0], expect) < 1e-12);
  const ScalarField out_a = out.a.to_real();
  double amax = 0.0;
  for (double x : out_a.real_data()) amax = std::max(amax, std::abs(x));
  CHECK(amax < 1e-13);
  const ScalarField out_v1 = out.v[1].to_real();
  double v1max = 0.0;
  for (double x : out_v1.real_data()) v1max = std::max(v1max, std::abs(x));
  CHECK(v1max < 1e-13);
}

TEST_CASE("grid propagator composes like a semigroup") {
  const Grid g = Grid::make(16, 2.5);
  const DerivedConstants con{1.3, 0.7};
  const ScalarField a0 = ScalarField::from_function(g, [](double x, double y, double) {
    return std::sin(2.0 * kPi * x / 2.5) + 0.3 * std::cos(2.0 * kPi * (x + y) / 2.5);
  });
  std::array<ScalarField, 3> v0{
      ScalarField::from_function(
          g, [](double x, double, double z) { return std::cos(2.0 * kPi * (x - z) / 2.5); }),
      ScalarField::from_function(
          g, [](double, double y, double) { return 0.5 * std::sin(2.0 * kPi * y / 2.5); }),
      ScalarField::zeros(g)};
  const AcousticPair full = apply_E(a0, v0, 0.8, con);
  const AcousticPair half = apply_E(a0, v0, 0.4, con);
  const AcousticPair again = apply_E(half.a, half.v, 0.4, con);
  CHECK(max_field_diff(full.a, again.a) < 1e-12);
  for (int d = 0; d < 3; ++d) CHECK(max_field_diff(full.v[d], again.v[d]) < 1e-12);
}

TEST_CASE("heat semigroup on a wide box matches the whole-space Gaussian law") {
  // exp(-|x-c|^2/4) has s = 1; with lambda = 1 the L2 norm decays as
  // (2 pi)^{3/4} (1+t)^{-3/4}.  Box L = 40 makes wrap-around ~1e-11.
  const Grid g = Grid::make(64, 40.0);
  const DerivedConstants con{1.0, 1.0};
  const double c = 20.0;
  const ScalarField f = ScalarField::from_function(g, [&](double x, double y, double z) {
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c);
    return std::exp(-r2 / 4.0);
  });
  for (double t : {0.0, 1.0, 5.0}) {
    const ScalarField ft = apply_S(f, t, con);
    const double want = std::pow(2.0 * kPi, 0.75) * std::pow(1.0 + t, -0.75);
    CHECK(lq_norm(ft, 2.0) == doctest::Approx(want).epsilon(1e-8));
  }
  // apply_S == apply_E on (0, longitudinal-free) data is implied; check
  // the heat factor agrees with a one-mode hand computation instead.
  const ScalarField mode = ScalarField::from_function(
      g, [](double x, double, double) { return std::sin(2.0 * kPi * x / 40.0); });
  const ScalarField mt = apply_S(mode, 2.0, con);
  const double xi1 = 2.0 * kPi / 40.0;
  const double factor = std::exp(-con.lambda * xi1 * xi1 * 2.0);
  const ScalarField expect = ScalarField::from_function(
      g, [&](double x, double, double) { return factor * std::sin(2.0 * kPi * x / 40.0); });
  CHECK(max_field_diff(mt, expect) < 1e-12);
}

TEST_CASE("radial Gaussian profile reproduces closed-form norms") {
  const DerivedConstants con{1.0, 1.0};
  const RadialProfile prof = gaussian_radial_profile(1.0, 1.0);
  // l = 0: (2 pi)^{3/4} (1+t)^{-3/4}.
  for (double t : {0.0, 3.0, 100.0}) {
    const double want = std::pow(2.0 * kPi, 0.75) * std::pow(1.0 + t, -0.75);
    CHECK(radial_l2_norm(prof, t, 0, con) == doctest::Approx(want).epsilon(1e-10));
  }
  // l = 1: sqrt(3/sqrt(2)) pi^{3/4} (1+t)^{-5/4}.
  for (double t : {0.0, 2.0, 10.0}) {
    const double want =
        std::sqrt(3.0 / std::sqrt(2.0)) * std::pow(kPi, 0.75) * std::pow(1.0 + t, -1.25);
    CHECK(radial_l2_norm(prof, t, 1, con) == doctest::Approx(want).epsilon(1e-10));
  }
  // General amplitude/shape: ||f||_2 = A (2s)^{3/4} pi^{3/4}, decay in
  // lambda t through (s + lambda t).
  const double A = 0.7, s = 2.3;
  const DerivedConstants con2{1.0, 2.0};
  const RadialProfile prof2 = gaussian_radial_profile(A, s);
  for (double t : {0.0, 1.7}) {
    const double want = A * std::pow(2.0 * s, 1.5) * std::pow(kPi, 0.75) *
                        std::pow(2.0 * (s + con2.lambda * t), -0.75);
    CHECK(radial_l2_norm(prof2, t, 0, con2) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(kind_of([&] { radial_l2_norm(prof, 1.0, 5, con); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { radial_l2_norm(prof, -1.0, 0, con); }) == ErrorKind::Domain);
}

TEST_CASE("radial profile construction rejects bad profiles") {
  CHECK(kind_of([] { make_radial_profile([](double) { return 0.0; }); }) ==
        ErrorKind::InvalidParameters);
  // L2 mass r^2/(1+r)^2 does not decay: truncation must fail.
  CHECK(kind_of([] { make_radial_profile([](double r) { return 1.0 / (1.0 + r); }); }) ==
        ErrorKind::Truncation);
}

TEST_CASE("radial acoustic norm matches the grid propagator on a wide box") {
  // Pure density Gaussian: compare whole-space radial evaluation against the
  // periodic grid at box-faithful times.
  const Grid g = Grid::make(48, 60.0);
  ModelParams params;
  params.rho_bar = 0.5;
  params.k_bar = 0.1;
  const DerivedConstants con = derive_constants(params);
  const double c = 30.0, w = 2.0;       // bump width w: s = w^2/2 = 2
  const double s = w * w / 2.0;
  const ScalarField a0 = ScalarField::from_function(g, [&](double x, double y, double z) {
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c);
    return std::exp(-r2 / (2.0 * w * w));
  });
  std::array<ScalarField, 3> v0{ScalarField::zeros(g), ScalarField::zeros(g),
                                ScalarField::zeros(g)};
  const RadialProfile prof_a = gaussian_radial_profile(1.0, s);
  RadialProfile prof_w = prof_a;
  std::fill(prof_w.value.begin(), prof_w.value.end(), 0.0);

  for (double t : {0.0, 1.0, 5.0}) {
    const AcousticPair out = apply_E(a0, v0, t, con);
    const double grid_norm = std::sqrt(
        std::pow(lq_norm(out.a, 2.0), 2.0) + std::pow(lq_norm(out.v[0], 2.0), 2.0) +
        std::pow(lq_norm(out.v[1], 2.0), 2.0) + std::pow(lq_norm(out.v[2], 2.0), 2.0));
    const double radial_norm = radial_acoustic_l2_norm(prof_a, prof_w, t, 0, con);
    CHECK(radial_norm == doctest::Approx(grid_norm).epsilon(1e-3));
  }
  // Acoustic energy decays from a pure-density start.
  const double n0 = radial_acoustic_l2_norm(prof_a, prof_w, 0.0, 0, con);
  const double n1 = radial_acoustic_l2_norm(prof_a, prof_w, 2.0, 0, con);
  CHECK(n1 < n0);
  // Lattice mismatch is rejected.
  RadialProfile other = gaussian_radial_profile(1.0, 4.0);
  if (other.r.size() == prof_a.r.size() && other.r != prof_a.r)
    CHECK(kind_of([&] { radial_acoustic_l2_norm(prof_a, other, 0.0, 0, con); }) ==
          ErrorKind::Shape);
}
