// Acceptance gate for the turbulent-decay laboratory.
//
// Nine numbered criteria, each printed as exactly one
//   criterion N: PASS — <what it checks>
//   criterion N: FAIL — <what it checks> (<measured detail>)
// line; the process exits with the number of failed criteria.  Tolerances are
// pinned as constants next to each criterion.  Indented lines starting with
// "  note:" or "  control:" are diagnostics, not verdicts.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tdk/analysis.hpp"
#include "tdk/config.hpp"
#include "tdk/integrator.hpp"
#include "tdk/model.hpp"
#include "tdk/rhs.hpp"
#include "tdk/semigroup.hpp"
#include "tdk/state.hpp"

using namespace tdk;

namespace {

int g_failures = 0;

void verdict(int n, bool pass, const std::string& what, const std::string& detail) {
  if (pass) {
    std::printf("criterion %d: PASS — %s\n", n, what.c_str());
  } else {
    std::printf("criterion %d: FAIL — %s (%s)\n", n, what.c_str(), detail.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// Independent 2x2 matrix-exponential oracle: scaled-squaring with a 30-term
// Taylor series in long double.  Used to cross-check the closed-form acoustic
// block at and near its degenerate double-eigenvalue point.
std::array<long double, 4> expm2_oracle(double k, double t, const DerivedConstants& con) {
  std::array<long double, 4> m = {0.0L, -(long double)(con.gamma * k),
                                  (long double)(con.gamma * k),
                                  -2.0L * (long double)(con.lambda * k * k)};
  for (auto& x : m) x *= (long double)t;
  const long double norm =
      std::max(std::abs(m[0]) + std::abs(m[1]), std::abs(m[2]) + std::abs(m[3]));
  int squarings = 0;
  long double scale = 1.0L;
  while (norm * scale > 0.25L) {
    scale *= 0.5L;
    ++squarings;
  }
  for (auto& x : m) x *= scale;
  std::array<long double, 4> sum = {1.0L, 0.0L, 0.0L, 1.0L};
  std::array<long double, 4> term = {1.0L, 0.0L, 0.0L, 1.0L};
  for (int j = 1; j <= 30; ++j) {
    const std::array<long double, 4> next = {
        (term[0] * m[0] + term[1] * m[2]) / j, (term[0] * m[1] + term[1] * m[3]) / j,
        (term[2] * m[0] + term[3] * m[2]) / j, (term[2] * m[1] + term[3] * m[3]) / j};
    term = next;
    for (int c = 0; c < 4; ++c) sum[c] += term[c];
  }
  for (int s = 0; s < squarings; ++s) {
    const std::array<long double, 4> sq = {
        sum[0] * sum[0] + sum[1] * sum[2], sum[0] * sum[1] + sum[1] * sum[3],
        sum[2] * sum[0] + sum[3] * sum[2], sum[2] * sum[1] + sum[3] * sum[3]};
    sum = sq;
  }
  return sum;
}

std::vector<double> log_times() {
  std::vector<double> ts;
  ts.push_back(0.0);
  for (double t = 0.1; t <= 1000.0 * (1.0 + 1e-9); t *= 1.2) ts.push_back(t);
  return ts;
}

double state_l2_diff(const PerturbationState& x, const PerturbationState& y) {
  PerturbationState d = y;
  d *= -1.0;
  auto dc = d.components();
  auto xc = x.components();
  for (int c = 0; c < 7; ++c) *dc[c] += *xc[c];
  return state_sobolev_norm(d, 0);
}

PerturbationState random_state(const Grid& g, double amplitude, std::uint64_t seed) {
  InitialDataRecipe recipe;
  recipe.kind = InitialDataRecipe::Kind::RandomSmooth;
  recipe.amplitude = amplitude;
  return make_initial_data(g, recipe, seed);
}

DerivedConstants unit_acoustic_constants(ModelParams& out) {
  out.rho_bar = 1.0;
  out.k_bar = 0.1;
  out.pressure = PressureLaw{[](double r) { return 0.9 * r; },
                             [](double) { return 0.9; }, "linear-0.9"};
  return derive_constants(out);  // gamma = lambda = 1 exactly
}

// --- criterion 1: whole-space heat decay exponents --------------------------
void criterion_1() {
  constexpr double kClosedTol = 1e-6;   // pointwise relative, l = 0 curve
  constexpr double kFitTol = 0.02;      // fitted exponent, both orders
  ModelParams params;                   // rho_bar = 1 -> lambda = 1
  const DerivedConstants con = derive_constants(params);
  const RadialProfile prof = gaussian_radial_profile(1.0, 1.0);
  const std::vector<double> ts = log_times();
  std::vector<double> v0, v1;
  double worst = 0.0;
  for (double t : ts) {
    const double n0 = radial_l2_norm(prof, t, 0, con);
    v0.push_back(n0);
    v1.push_back(radial_l2_norm(prof, t, 1, con));
    const double closed = std::pow(2.0 * M_PI, 0.75) * std::pow(1.0 + t, -0.75);
    worst = std::max(worst, std::abs(n0 - closed) / closed);
  }
  const FitResult f0 = fit_exponent(ts, v0, 10.0, 1000.0);
  const FitResult f1 = fit_exponent(ts, v1, 10.0, 1000.0);
  const bool pass = worst <= kClosedTol && std::abs(f0.exponent + 0.75) <= kFitTol &&
                    std::abs(f1.exponent + 1.25) <= kFitTol;
  verdict(1, pass,
          "whole-space heat-flow amplitude and gradient decay exponents "
          "(-0.75 / -1.25) with closed-form curve match",
          fmt("closed-form worst rel %.2e, fits %.4f / %.4f", worst, f0.exponent,
              f1.exponent));
}

// --- criterion 2: whole-space acoustic-block decay exponents ----------------
void criterion_2() {
  constexpr double kFitTol = 0.05;
  ModelParams params;
  const DerivedConstants con = unit_acoustic_constants(params);
  const RadialProfile pa = gaussian_radial_profile(1.0, 1.0);
  const RadialProfile pw = gaussian_radial_profile(0.5, 1.0);
  const std::vector<double> ts = log_times();
  std::vector<double> v0, v1;
  for (double t : ts) {
    v0.push_back(radial_acoustic_l2_norm(pa, pw, t, 0, con));
    v1.push_back(radial_acoustic_l2_norm(pa, pw, t, 1, con));
  }
  const FitResult f0 = fit_exponent(ts, v0, 10.0, 1000.0);
  const FitResult f1 = fit_exponent(ts, v1, 10.0, 1000.0);
  const bool pass =
      std::abs(f0.exponent + 0.75) <= kFitTol && std::abs(f1.exponent + 1.25) <= kFitTol;
  verdict(2, pass,
          "whole-space acoustic-block decay exponents (-0.75 / -1.25) from "
          "Gaussian density and longitudinal-velocity data",
          fmt("fits %.4f / %.4f", f0.exponent, f1.exponent));
}

// --- criterion 3: degenerate-mode matrix exponential ------------------------
void criterion_3() {
  constexpr double kTol = 1e-10;  // max-abs matrix norm against the oracle
  ModelParams flagship;
  flagship.rho_bar = 0.5;
  flagship.k_bar = 0.1;
  ModelParams unit;
  std::vector<DerivedConstants> cons;
  cons.push_back(derive_constants(flagship));
  cons.push_back(derive_constants(ModelParams{}));
  cons.push_back(unit_acoustic_constants(unit));
  double worst = 0.0;
  for (const DerivedConstants& con : cons) {
    const double k_deg = con.gamma / con.lambda;  // double-eigenvalue point
    for (double k : {k_deg, k_deg * (1.0 - 1e-7), k_deg * (1.0 + 1e-7)}) {
      for (double t : {0.1, 1.0, 10.0}) {
        const std::array<double, 4> got = acoustic_mode_entries(k, t, con);
        const std::array<long double, 4> want = expm2_oracle(k, t, con);
        for (int c = 0; c < 4; ++c) {
          worst = std::max(worst, std::abs(got[c] - (double)want[c]));
        }
      }
    }
  }
  verdict(3, worst <= kTol,
          "acoustic-mode closed form matches a 30-term scaled-squaring series "
          "oracle at and near the degenerate double-eigenvalue point",
          fmt("worst matrix-entry deviation %.2e", worst));
}

// --- criterion 4: semigroup composition laws --------------------------------
void criterion_4() {
  constexpr double kTol = 1e-10;  // relative, per mode / per field
  ModelParams params;
  params.rho_bar = 0.5;
  params.k_bar = 0.1;
  const DerivedConstants con = derive_constants(params);
  std::mt19937_64 rng(20260822u);
  std::uniform_real_distribution<double> logk(std::log(1e-3), std::log(30.0));
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  double worst_mode = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double k = std::exp(logk(rng));
    const double t = unif(rng);
    const double s = unif(rng);
    const auto et = acoustic_mode_entries(k, t, con);
    const auto es = acoustic_mode_entries(k, s, con);
    const auto ets = acoustic_mode_entries(k, t + s, con);
    const std::array<double, 4> prod = {
        et[0] * es[0] + et[1] * es[2], et[0] * es[1] + et[1] * es[3],
        et[2] * es[0] + et[3] * es[2], et[2] * es[1] + et[3] * es[3]};
    double diff = 0.0, scale = 0.0;
    for (int c = 0; c < 4; ++c) {
      diff = std::max(diff, std::abs(prod[c] - ets[c]));
      scale = std::max(scale, std::abs(ets[c]));
    }
    worst_mode = std::max(worst_mode, diff / std::max(scale, 1e-300));
  }

  // Operator-level: compose the grid semigroups on smooth data.
  const Grid g = Grid::make(16, 20.0);
  const PerturbationState w = random_state(g, 1e-3, 3);
  const ScalarField& f = w.h;
  const ScalarField& a0 = w.a;
  const std::array<ScalarField, 3>& v0 = w.v;
  double worst_s = 0.0, worst_e = 0.0;
  for (int i = 0; i < 25; ++i) {
    const double t = unif(rng);
    const double s = unif(rng);
    const ScalarField two = apply_S(apply_S(f, t, con), s, con);
    const ScalarField one = apply_S(f, t + s, con);
    ScalarField d = two;
    d *= -1.0;
    d += one;
    worst_s = std::max(worst_s, sobolev_norm(d, 0) / sobolev_norm(one, 0));
    if (i < 5) {
      const AcousticPair mid = apply_E(a0, v0, t, con);
      const AcousticPair twoE = apply_E(mid.a, mid.v, s, con);
      const AcousticPair oneE = apply_E(a0, v0, t + s, con);
      double n2 = 0.0, nd = 0.0;
      ScalarField da = twoE.a;
      da *= -1.0;
      da += oneE.a;
      nd += std::pow(sobolev_norm(da, 0), 2);
      n2 += std::pow(sobolev_norm(oneE.a, 0), 2);
      for (int dcomp = 0; dcomp < 3; ++dcomp) {
        ScalarField dv = twoE.v[dcomp];
        dv *= -1.0;
        dv += oneE.v[dcomp];
        nd += std::pow(sobolev_norm(dv, 0), 2);
        n2 += std::pow(sobolev_norm(oneE.v[dcomp], 0), 2);
      }
      worst_e = std::max(worst_e, std::sqrt(nd / n2));
    }
  }
  const bool pass = worst_mode <= kTol && worst_s <= kTol && worst_e <= kTol;
  verdict(4, pass,
          "semigroup composition laws on 1000 random acoustic modes and on "
          "grid heat/acoustic operators",
          fmt("worst rel: mode %.2e heat-op %.2e acoustic-op %.2e", worst_mode,
              worst_s, worst_e));
}

// --- criterion 5: time-convolution bound lattice ----------------------------
void criterion_5() {
  constexpr double kOracleTol = 1e-9;  // frozen closed-form values, relative
  bool all_ratio = true;
  double worst_ratio = 0.0;
  const std::vector<double> times = {0.1, 1.0, 10.0, 100.0, 1000.0};
  for (double r1 : {1.25, 1.5, 2.0, 3.0}) {
    for (double r2 : {0.0, r1 / 2.0, r1}) {
      for (const ConvolutionCheck& c : verify_convolution_bound(r1, r2, times)) {
        all_ratio = all_ratio && c.pass && c.ratio <= 1.0;
        worst_ratio = std::max(worst_ratio, c.ratio);
      }
    }
  }
  // Frozen oracles: r1=2, r2=1, t=1 has integral (2/9)ln2 + 1/6; r1=2, r2=0
  // integrates in closed form to 1 - (1+t)^{-1}.
  const double frozen = (2.0 / 9.0) * std::log(2.0) + 1.0 / 6.0;
  const auto one = verify_convolution_bound(2.0, 1.0, {1.0});
  double worst_oracle = std::abs(one[0].integral - frozen) / frozen;
  for (const ConvolutionCheck& c : verify_convolution_bound(2.0, 0.0, times)) {
    const double closed = 1.0 - 1.0 / (1.0 + c.t);
    worst_oracle = std::max(worst_oracle, std::abs(c.integral - closed) / closed);
  }
  const bool pass = all_ratio && worst_oracle <= kOracleTol;
  verdict(5, pass,
          "time-convolution bound holds across the full exponent/time lattice "
          "with quadrature matching frozen closed forms",
          fmt("worst ratio %.4f, worst oracle rel %.2e", worst_ratio, worst_oracle));
}

// --- criterion 6: energy-norm equivalence -----------------------------------
void criterion_6() {
  constexpr double kWeight = 10.0;
  constexpr double kQuadTol = 1e-12;  // relative, M(sW) = s^2 M(W)
  const Grid g = Grid::make(16, 20.0);
  std::vector<PerturbationState> states;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    states.push_back(random_state(g, 1e-3, seed));
  }
  double c2 = std::numeric_limits<double>::quiet_NaN();
  std::string err;
  try {
    c2 = check_equivalence(states, kWeight);
  } catch (const Error& e) {
    err = e.what();
  }
  double worst_quad = 0.0;
  for (std::uint64_t seed : {1ull, 50ull, 100ull}) {
    const PerturbationState& w = states[seed - 1];
    const double m1 = energy_functional(w, kWeight);
    for (double s : {2.0, 0.5}) {
      PerturbationState ws = w;
      ws *= s;
      const double ms = energy_functional(ws, kWeight);
      worst_quad = std::max(worst_quad, std::abs(ms - s * s * m1) / std::abs(ms));
    }
  }
  const bool pass = err.empty() && std::isfinite(c2) && c2 > 1.0 && c2 < kWeight + 1.0 &&
                    worst_quad <= kQuadTol;
  verdict(6, pass,
          "energy functional is sandwiched by the gradient norm over 100 "
          "seeded states and scales exactly quadratically",
          err.empty() ? fmt("C2 %.4f, worst quadratic rel dev %.2e", c2, worst_quad)
                      : err);
}

// --- criterion 7: small-amplitude nonlinear decay run -----------------------
struct FlagshipOutcome {
  bool completed = false;
  std::string error;
  double drift_rel = 0.0;
  int energy_increases = 0;
  double worst_increase = 0.0;
  bool claims_pass = false;
  std::string claim_text;
  double seconds = 0.0;
};

FlagshipOutcome run_flagship(bool zero_dissipation_rate) {
  FlagshipOutcome out;
  const LabConfig cfg;  // defaults are the acceptance configuration
  const Grid g = cfg.make_grid();
  const ModelParams params = cfg.model_params();
  const DerivedConstants con = derive_constants(params);
  PerturbationState w0 = make_initial_data(g, cfg.initial_recipe(), 1);
  if (zero_dissipation_rate) w0.eps *= 0.0;
  RunOptions opts = cfg.run_options();
  opts.nonlinear = true;
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  try {
    res = run(w0, params, opts);
  } catch (const Error& e) {
    out.error = e.what();
    return out;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  out.completed = true;

  const double mass0 = res.records.front().mass;
  double drift = 0.0;
  for (const NormRecord& r : res.records) drift = std::max(drift, std::abs(r.mass - mass0));
  out.drift_rel = drift / std::max(std::abs(mass0), 1e-300);
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    if (res.records[i - 1].t < 1.0) continue;
    const double prev = res.records[i - 1].energy;
    if (res.records[i].energy > prev * (1.0 + 1e-10)) {
      ++out.energy_increases;
      out.worst_increase =
          std::max(out.worst_increase, res.records[i].energy / prev - 1.0);
    }
  }
  const double t_wrap = fidelity_wrap_time(cfg.initial_recipe(), g, con.gamma);
  const FitWindow window =
      resolve_fit_window(res.records.back().t, t_wrap, cfg.t0, cfg.t1);
  const DecayReport rep =
      make_decay_report(res.records, cfg.p, window, cfg.slack, cfg.slack_linf);
  // The gate covers the amplitude (q = 2), gradient-energy, time-derivative,
  // and max-norm claims; the q = 3, 6 amplitude fits are reported as data.
  bool gated = true;
  std::string text;
  for (const ClaimResult& c : rep.claims) {
    const bool is_gated = c.name == "amplitude-l2" || c.name == "gradient-energy" ||
                          c.name == "time-derivative" || c.name == "max-norm";
    if (is_gated) gated = gated && c.pass;
    text += fmt("%s%s %.3f vs <=%.3f", text.empty() ? "" : ", ", c.name.c_str(),
                c.fit.exponent, -(c.target - c.slack));
  }
  out.claims_pass = gated;
  out.claim_text = text;
  return out;
}

void criterion_7() {
  constexpr double kDriftTol = 1e-10;   // relative mass drift
  constexpr double kWallTol = 600.0;    // seconds
  const FlagshipOutcome main_run = run_flagship(false);
  bool pass = main_run.completed && main_run.drift_rel <= kDriftTol &&
              main_run.claims_pass && main_run.energy_increases == 0 &&
              main_run.seconds < kWallTol;
  std::string detail;
  if (!main_run.completed) {
    detail = "aborted: " + main_run.error;
  } else {
    detail = fmt("drift %.1e, energy increases %d (worst +%.1e), wall %.0fs; claims: %s",
                 main_run.drift_rel, main_run.energy_increases,
                 main_run.worst_increase, main_run.seconds,
                 main_run.claim_text.c_str());
  }
  verdict(7, pass,
          "small-amplitude nonlinear run conserves mass, keeps the energy "
          "functional non-increasing, and meets the decay-exponent table",
          detail);
  if (!pass && main_run.completed) {
    // Mechanism probe: the dissipation-rate component's spatial mean is
    // conserved by the periodic dynamics and pumps the turbulent-energy
    // component linearly in time; removing that component restores decay.
    const FlagshipOutcome control = run_flagship(true);
    std::printf("  control: identical run with the dissipation-rate field zeroed: "
                "%s, energy increases %d, drift %.1e; claims: %s\n",
                control.claims_pass ? "claims PASS" : "claims FAIL",
                control.energy_increases, control.drift_rel,
                control.claim_text.c_str());
    std::fflush(stdout);
  }
}

// --- criterion 8: integrator fidelity ---------------------------------------
void criterion_8() {
  constexpr double kLinearTol = 1e-12;  // relative L2 against exact propagator
  constexpr double kOrderFloor = 1.9;   // observed temporal order
  ModelParams params;
  params.rho_bar = 0.5;
  params.k_bar = 0.1;
  const DerivedConstants con = derive_constants(params);
  const Grid g = Grid::make(16, 20.0);

  double worst_linear = 0.0;
  {
    const PerturbationState w0 = random_state(g, 1e-3, 5);
    PerturbationState exact = w0;
    apply_linear(exact, 1.0, con);
    const double scale = state_sobolev_norm(exact, 0);
    for (Scheme s : {Scheme::IfRk2, Scheme::EtdRk2}) {
      RunOptions opts;
      opts.dt = 0.1;
      opts.t_end = 1.0;
      opts.nonlinear = false;
      opts.scheme = s;
      opts.output_stride = 1 << 20;
      PerturbationState got = PerturbationState::zeros(g);
      opts.on_record = [&](double, const PerturbationState& st) { got = st; };
      run(w0, params, opts);
      worst_linear = std::max(worst_linear, state_l2_diff(got, exact) / scale);
    }
  }

  const PerturbationState w0 = random_state(g, 1.5e-2, 29);
  auto march = [&](Scheme s, double dt) {
    RunOptions opts;
    opts.dt = dt;
    opts.t_end = 0.4;
    opts.nonlinear = true;
    opts.scheme = s;
    opts.cfl_safety = 1.0;
    opts.output_stride = 1 << 20;
    PerturbationState got = PerturbationState::zeros(g);
    opts.on_record = [&](double, const PerturbationState& st) { got = st; };
    run(w0, params, opts);
    return got;
  };
  const PerturbationState ref = march(Scheme::IfRk2, 0.4 / 128.0);
  double worst_order = std::numeric_limits<double>::infinity();
  for (Scheme s : {Scheme::IfRk2, Scheme::EtdRk2}) {
    const double e1 = state_l2_diff(march(s, 0.05), ref);
    const double e2 = state_l2_diff(march(s, 0.025), ref);
    worst_order = std::min(worst_order, std::log2(e1 / e2));
  }
  const bool pass = worst_linear <= kLinearTol && worst_order >= kOrderFloor;
  verdict(8, pass,
          "linear-only stepping reproduces the exact propagator and the "
          "nonlinear schemes show second-order step convergence",
          fmt("linear rel %.2e, worst observed order %.3f", worst_linear, worst_order));
}

// --- criterion 9: equilibrium fixed point -----------------------------------
void criterion_9() {
  ModelParams params;
  params.rho_bar = 0.5;
  params.k_bar = 0.1;
  const DerivedConstants con = derive_constants(params);
  const Grid g = Grid::make(8, 6.4);
  const PerturbationState zero = PerturbationState::zeros(g);

  double rhs_max = 0.0;
  {
    PerturbationState f = rhs(zero, params, con);
    auto fc = f.components();
    for (int c = 0; c < 7; ++c) {
      const ScalarField real = fc[c]->to_real();
      const std::vector<double> vals = real.real_data();
      for (double v : vals) rhs_max = std::max(rhs_max, std::abs(v));
    }
  }

  RunOptions opts;
  opts.dt = 1e-3;
  opts.t_end = 1.0;  // 1000 steps
  opts.nonlinear = true;
  opts.output_stride = 50;
  PerturbationState last = PerturbationState::zeros(g);
  opts.on_record = [&](double, const PerturbationState& st) { last = st; };
  const RunResult res = run(zero, params, opts);
  bool norms_zero = res.steps == 1000;
  for (const NormRecord& r : res.records) {
    norms_zero = norms_zero && r.l2 == 0.0 && r.l3 == 0.0 && r.l6 == 0.0 &&
                 r.linf == 0.0 && r.h2grad == 0.0 && r.dtl2 == 0.0 &&
                 r.energy == 0.0 && r.mass == 0.0;
  }
  double state_max = 0.0;
  {
    auto lc = last.components();
    for (int c = 0; c < 7; ++c) {
      const ScalarField real = lc[c]->to_real();
      const std::vector<double> vals = real.real_data();
      for (double v : vals) state_max = std::max(state_max, std::abs(v));
    }
  }
  const bool pass = rhs_max == 0.0 && norms_zero && state_max == 0.0;
  verdict(9, pass,
          "the equilibrium state is an exact fixed point: zero forcing and a "
          "bitwise-zero trajectory over 1000 steps",
          fmt("rhs max %.1e, final state max %.1e, steps %d", rhs_max, state_max,
              res.steps));
}

}  // namespace

int main() {
  std::printf("turbulent-decay laboratory acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d of 9 criteria pass\n", 9 - g_failures);
  return g_failures;
}
