#include "tdk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tdk/field.hpp"
#include "tdk/quadrature.hpp"
#include "tdk/symbols.hpp"

namespace tdk {

namespace {

/// Per-axis tables of xi^{2a} (odd powers on the odd symbol) and the odd
/// first-order symbol, for one spectral pass over the grid.
struct AxisTables {
  std::vector<std::array<double, 4>> w0, w1, w2;  // xi^{2a}, a = 0..3
  std::vector<double> odd0, odd1, odd2;
};

AxisTables build_tables(const Grid& grid) {
  const int n = grid.n;
  const int half = n / 2 + 1;
  AxisTables t;
  t.w0.resize(n);
  t.w1.resize(n);
  t.w2.resize(half);
  t.odd0.resize(n);
  t.odd1.resize(n);
  t.odd2.resize(half);
  for (int j = 0; j < n; ++j) {
    for (int a = 0; a < 4; ++a) {
      t.w0[j][a] = symbol_weight(grid, j, a);
      t.w1[j][a] = t.w0[j][a];
    }
    t.odd0[j] = axis_wavenumber(grid, j, 1);
    t.odd1[j] = t.odd0[j];
  }
  for (int j = 0; j < half; ++j) {
    for (int a = 0; a < 4; ++a) t.w2[j][a] = symbol_weight(grid, j, a);
    t.odd2[j] = axis_wavenumber(grid, j, 1);
  }
  return t;
}

struct QuadraticSums {
  double grad13 = 0.0;  // sum_{1<=|alpha|<=3} ||d^alpha W||^2
  double cross = 0.0;   // sum_{1<=|alpha|<=2} <d^alpha v, grad d^alpha a>
};

QuadraticSums spectral_sums(const PerturbationState& state) {
  const PerturbationState spectral = state.to_spectral();
  const Grid& grid = spectral.grid();
  const int n = grid.n;
  const int half = n / 2 + 1;
  const AxisTables tab = build_tables(grid);
  const auto alphas13 = multi_indices(1, 3);
  const auto alphas12 = multi_indices(1, 2);
  const auto comps = spectral.components();
  std::array<const std::complex<double>*, 7> data;
  for (int i = 0; i < 7; ++i) data[i] = comps[i]->spectral_data().data();

  double grad13 = 0.0;
  double cross = 0.0;
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    for (int j1 = 0; j1 < n; ++j1) {
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double wmult = (j2 == 0 || j2 == n / 2) ? 1.0 : 2.0;
        double w13 = 0.0;
        for (const auto& a : alphas13) {
          w13 += tab.w0[j0][a[0]] * tab.w1[j1][a[1]] * tab.w2[j2][a[2]];
        }
        double e7 = 0.0;
        for (int c = 0; c < 7; ++c) e7 += std::norm(data[c][idx]);
        grad13 += wmult * w13 * e7;

        double w02 = 0.0;
        for (const auto& a : alphas12) {
          w02 += tab.w0[j0][a[0]] * tab.w1[j1][a[1]] * tab.w2[j2][a[2]];
        }
        // <d^a v, grad d^a a> per mode: -Im(conj(xi~ . v_hat) a_hat)
        const std::complex<double> dot = tab.odd0[j0] * data[1][idx] +
                                         tab.odd1[j1] * data[2][idx] +
                                         tab.odd2[j2] * data[3][idx];
        cross += wmult * w02 * (-std::imag(std::conj(dot) * data[0][idx]));
      }
    }
  }
  const double scale =
      grid.volume() / (static_cast<double>(grid.size()) * grid.size());
  return {scale * grad13, scale * cross};
}

}  // namespace

double energy_functional(const PerturbationState& state, double c1_weight) {
  if (!(c1_weight > 0.0)) {
    fail(ErrorKind::InvalidParameters, "energy functional weight must be > 0");
  }
  const QuadraticSums s = spectral_sums(state);
  return c1_weight * s.grad13 + s.cross;
}

double grad_h2_norm(const PerturbationState& state) {
  return std::sqrt(spectral_sums(state).grad13);
}

double check_equivalence(const std::vector<PerturbationState>& states,
                         double c1_weight) {
  if (states.empty()) {
    fail(ErrorKind::InvalidParameters, "check_equivalence needs at least one state");
  }
  double c2 = 1.0;
  for (const auto& w : states) {
    const QuadraticSums s = spectral_sums(w);
    const double m = c1_weight * s.grad13 + s.cross;
    const double q = s.grad13;
    if (!(m > 0.0)) {
      fail(ErrorKind::Numeric,
           "energy functional is not positive on a sample state: "
           "the weight is too small for norm equivalence");
    }
    if (!(q > 0.0)) {
      fail(ErrorKind::Numeric, "sample state has zero gradient energy");
    }
    c2 = std::max({c2, m / q, q / m});
  }
  return c2;
}

NormRecord make_norm_record(double t, const PerturbationState& spectral_state,
                            const PerturbationState& spectral_time_derivative,
                            double c1_weight) {
  NormRecord row;
  row.t = t;
  const PerturbationState real_state = spectral_state.to_real();
  row.l2 = state_sobolev_norm(spectral_state, 0);
  row.l3 = state_lq_norm(real_state, 3.0);
  row.l6 = state_lq_norm(real_state, 6.0);
  row.linf = state_lq_norm(real_state, std::numeric_limits<double>::infinity());
  const QuadraticSums s = spectral_sums(spectral_state);
  row.h2grad = std::sqrt(s.grad13);
  row.energy = c1_weight * s.grad13 + s.cross;
  row.dtl2 = state_sobolev_norm(spectral_time_derivative, 0);
  const Grid& grid = spectral_state.grid();
  const double cell = grid.volume() / static_cast<double>(grid.size());
  row.mass = cell * spectral_state.a.spectral_data()[0].real();
  return row;
}

void write_norm_csv_header(std::ostream& os) {
  os << "t,l2,l3,l6,linf,h2grad,dtl2,M,mass\n";
}

void write_norm_csv_row(std::ostream& os, const NormRecord& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t,
                row.l2, row.l3, row.l6, row.linf, row.h2grad, row.dtl2,
                row.energy, row.mass);
  os << buf;
}

std::vector<NormRecord> read_norm_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open norm table: " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Io, "empty norm table: " + path);
  if (line != "t,l2,l3,l6,linf,h2grad,dtl2,M,mass") {
    fail(ErrorKind::Parse, "unexpected norm table header in " + path);
  }
  std::vector<NormRecord> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    NormRecord r;
    if (!(ss >> r.t >> r.l2 >> r.l3 >> r.l6 >> r.linf >> r.h2grad >> r.dtl2 >>
          r.energy >> r.mass)) {
      fail(ErrorKind::Parse,
           "malformed norm table row at line " + std::to_string(line_no));
    }
    rows.push_back(r);
  }
  return rows;
}

FitResult fit_exponent(const std::vector<double>& t,
                       const std::vector<double>& value, double t0, double t1) {
  if (t.size() != value.size()) {
    fail(ErrorKind::Shape, "fit_exponent: time and value lengths differ");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(value[i] > 0.0)) {
      fail(ErrorKind::Numeric,
           "fit_exponent: non-positive value inside the fit window at t = " +
               std::to_string(t[i]));
    }
    xs.push_back(std::log1p(t[i]));
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 8) {
    fail(ErrorKind::InsufficientData,
         "fit_exponent: need at least 8 samples in the window, have " +
             std::to_string(xs.size()));
  }
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) {
    fail(ErrorKind::InsufficientData, "fit_exponent: degenerate time window");
  }
  FitResult fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
  fit.samples = static_cast<int>(n);
  return fit;
}

FitWindow resolve_fit_window(double t_max, double t_wrap,
                             std::optional<double> t0_override,
                             std::optional<double> t1_override) {
  FitWindow w;
  if (t0_override || t1_override) {
    w.t0 = t0_override.value_or(0.0);
    w.t1 = t1_override.value_or(t_max);
    if (!(w.t1 > w.t0)) {
      fail(ErrorKind::InvalidParameters, "fit window override requires t1 > t0");
    }
    return w;
  }
  w.t1 = std::min(50.0, t_max);
  if (std::isfinite(t_wrap)) w.t1 = std::min(w.t1, 0.8 * t_wrap);
  // keep at least one decade in (1 + t), lowering t0 toward zero if needed
  w.t0 = std::min(5.0, std::max(0.0, (1.0 + w.t1) / 10.0 - 1.0));
  if (!(w.t1 > w.t0)) {
    fail(ErrorKind::InvalidParameters,
         "trajectory too short for a decay fit window");
  }
  return w;
}

namespace {

struct ClaimDescriptor {
  const char* name;
  const char* column;
  double NormRecord::* member;
  int q;  // amplitude norm order, 0 = derivative-type claim
};

}  // namespace

DecayReport make_decay_report(const std::vector<NormRecord>& records,
                                  double p, const FitWindow& window,
                                  double slack, double slack_linf) {
  DecayReport report;
  report.p = p;
  report.window = window;

  std::vector<double> times;
  times.reserve(records.size());
  for (const auto& r : records) times.push_back(r.t);

  bool degenerate = true;
  for (const auto& r : records) {
    if (r.t < window.t0 || r.t > window.t1) continue;
    if (r.l2 != 0.0) {
      degenerate = false;
      break;
    }
  }
  report.degenerate = degenerate;

  const ClaimDescriptor descriptors[] = {
      {"amplitude-l2", "l2", &NormRecord::l2, 2},
      {"amplitude-l3", "l3", &NormRecord::l3, 3},
      {"amplitude-l6", "l6", &NormRecord::l6, 6},
      {"max-norm", "linf", &NormRecord::linf, 0},
      {"gradient-energy", "h2grad", &NormRecord::h2grad, 0},
      {"time-derivative", "dtl2", &NormRecord::dtl2, 0},
  };

  report.all_pass = true;
  for (const auto& desc : descriptors) {
    ClaimResult claim;
    claim.name = desc.name;
    claim.column = desc.column;
    claim.target = desc.q > 0 ? sigma(p, desc.q, 0) : sigma(p, 2, 1);
    claim.slack = std::string(desc.name) == "max-norm" ? slack_linf : slack;
    claim.degenerate = degenerate;
    if (degenerate) {
      claim.pass = true;  // zero trajectory satisfies any decay bound
    } else {
      std::vector<double> values;
      values.reserve(records.size());
      for (const auto& r : records) values.push_back(r.*(desc.member));
      claim.fit = fit_exponent(times, values, window.t0, window.t1);
      claim.pass = claim.fit.exponent <= -claim.target + claim.slack;
    }
    report.all_pass = report.all_pass && claim.pass;
    report.claims.push_back(std::move(claim));
  }
  return report;
}

std::vector<ConvolutionCheck> verify_convolution_bound(
    double r1, double r2, const std::vector<double>& times) {
  const double c1 = c1_bound(r1, r2);  // validates the (r1, r2) domain
  std::vector<ConvolutionCheck> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) {
      fail(ErrorKind::Domain, "verify_convolution_bound requires t >= 0");
    }
    ConvolutionCheck chk;
    chk.r1 = r1;
    chk.r2 = r2;
    chk.t = t;
    chk.integral = t == 0.0
                       ? 0.0
                       : adaptive_integrate(
                             [r1, r2, t](double s) {
                               return std::pow(1.0 + t - s, -r1) *
                                      std::pow(1.0 + s, -r2);
                             },
                             0.0, t, 1e-12);
    chk.bound = c1 * std::pow(1.0 + t, -r2);
    chk.ratio = chk.integral / chk.bound;
    chk.pass = chk.ratio <= 1.0;
    out.push_back(chk);
  }
  return out;
}

}  // namespace tdk
