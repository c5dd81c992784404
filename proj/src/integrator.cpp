#include "tdk/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "tdk/field.hpp"
#include "tdk/rhs.hpp"
#include "tdk/semigroup.hpp"
#include "tdk/symbols.hpp"

namespace tdk {

namespace {

double phi1_scalar(double z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  }
  return std::expm1(z) / z;
}

double phi2_scalar(double z) {
  if (std::abs(z) < 1e-4) {
    return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
  }
  return (std::expm1(z) - z) / (z * z);
}

// ---- dense 6x6 exponential for the augmented phi computation ----

using Mat6 = std::array<double, 36>;

Mat6 mat6_identity() {
  Mat6 m{};
  for (int i = 0; i < 6; ++i) m[7 * i] = 1.0;
  return m;
}

Mat6 mat6_mul(const Mat6& a, const Mat6& b) {
  Mat6 c{};
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 6; ++k) {
      const double aik = a[6 * i + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < 6; ++j) c[6 * i + j] += aik * b[6 * k + j];
    }
  }
  return c;
}

Mat6 mat6_exp(Mat6 a) {
  double norm1 = 0.0;
  for (int j = 0; j < 6; ++j) {
    double col = 0.0;
    for (int i = 0; i < 6; ++i) col += std::abs(a[6 * i + j]);
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  while (norm1 > 0.25) {
    norm1 *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (double& x : a) x *= scale;
  Mat6 result = mat6_identity();
  Mat6 term = mat6_identity();
  for (int k = 1; k <= 16; ++k) {
    term = mat6_mul(term, a);
    const double inv = 1.0 / k;
    for (double& x : term) x *= inv;
    for (int i = 0; i < 36; ++i) result[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) result = mat6_mul(result, result);
  return result;
}

/// Per-mode phi1/phi2 blocks of the acoustic generator, for one step size.
struct EtdTables {
  double dt = -1.0;
  std::vector<std::array<double, 4>> phi1;
  std::vector<std::array<double, 4>> phi2;
};

void build_etd_tables(EtdTables& tab, const Grid& grid, double dt,
                      const DerivedConstants& con) {
  const int n = grid.n;
  const int half = n / 2 + 1;
  tab.dt = dt;
  tab.phi1.assign(grid.spectral_size(), {1.0, 0.0, 0.0, 1.0});
  tab.phi2.assign(grid.spectral_size(), {0.5, 0.0, 0.0, 0.5});
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const double tx = axis_wavenumber(grid, j0, 1);
    for (int j1 = 0; j1 < n; ++j1) {
      const double ty = axis_wavenumber(grid, j1, 1);
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double tz = axis_wavenumber(grid, j2, 1);
        const double k2 = tx * tx + ty * ty + tz * tz;
        if (k2 == 0.0) continue;  // phi of the zero block
        const double k = std::sqrt(k2);
        Mat6 c{};
        c[6 * 0 + 1] = -con.gamma * k * dt;
        c[6 * 1 + 0] = con.gamma * k * dt;
        c[6 * 1 + 1] = -2.0 * con.lambda * k2 * dt;
        c[6 * 0 + 2] = 1.0;
        c[6 * 1 + 3] = 1.0;
        c[6 * 2 + 4] = 1.0;
        c[6 * 3 + 5] = 1.0;
        const Mat6 e = mat6_exp(c);
        tab.phi1[idx] = {e[6 * 0 + 2], e[6 * 0 + 3], e[6 * 1 + 2], e[6 * 1 + 3]};
        tab.phi2[idx] = {e[6 * 0 + 4], e[6 * 0 + 5], e[6 * 1 + 4], e[6 * 1 + 5]};
      }
    }
  }
}

/// Apply phi1 or phi2 of (dt L) to a spectral state.
PerturbationState apply_phi(const PerturbationState& f, const EtdTables& tab,
                            int which, const DerivedConstants& con) {
  PerturbationState out = f;  // spectral copy
  const Grid& grid = out.grid();
  const int n = grid.n;
  const int half = n / 2 + 1;
  const std::complex<double> im(0.0, 1.0);
  auto* a = out.a.spectral_data().data();
  std::array<std::complex<double>*, 3> v = {out.v[0].spectral_data().data(),
                                            out.v[1].spectral_data().data(),
                                            out.v[2].spectral_data().data()};
  std::array<std::complex<double>*, 3> heat = {out.h.spectral_data().data(),
                                               out.m.spectral_data().data(),
                                               out.eps.spectral_data().data()};
  const auto& blocks = which == 1 ? tab.phi1 : tab.phi2;
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const double tx = axis_wavenumber(grid, j0, 1);
    for (int j1 = 0; j1 < n; ++j1) {
      const double ty = axis_wavenumber(grid, j1, 1);
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double tz = axis_wavenumber(grid, j2, 1);
        const double k2 = tx * tx + ty * ty + tz * tz;
        const double z = -con.lambda * k2 * tab.dt;
        const double sc = which == 1 ? phi1_scalar(z) : phi2_scalar(z);
        for (auto* hfield : heat) hfield[idx] *= sc;
        if (k2 == 0.0) {
          const double sc0 = which == 1 ? 1.0 : 0.5;
          a[idx] *= sc0;
          for (auto* vc : v) vc[idx] *= sc0;
          continue;
        }
        const double k = std::sqrt(k2);
        const auto& blk = blocks[idx];
        const std::complex<double> d =
            tx * v[0][idx] + ty * v[1][idx] + tz * v[2][idx];
        const std::complex<double> w_amp = im * d / k;
        const std::complex<double> a_new = blk[0] * a[idx] + blk[1] * w_amp;
        const std::complex<double> w_new = blk[2] * a[idx] + blk[3] * w_amp;
        a[idx] = a_new;
        const std::complex<double> long_scale = -im * w_new / k;
        const std::complex<double> old_long = d / k2;
        v[0][idx] = (v[0][idx] - tx * old_long) * sc + tx * long_scale;
        v[1][idx] = (v[1][idx] - ty * old_long) * sc + ty * long_scale;
        v[2][idx] = (v[2][idx] - tz * old_long) * sc + tz * long_scale;
      }
    }
  }
  return out;
}

}  // namespace

PerturbationState linear_time_derivative(const PerturbationState& spectral_state,
                                         const DerivedConstants& con) {
  PerturbationState out = spectral_state.to_spectral();
  const Grid& grid = out.grid();
  const int n = grid.n;
  const int half = n / 2 + 1;
  const std::complex<double> im(0.0, 1.0);
  auto* a = out.a.spectral_data().data();
  std::array<std::complex<double>*, 3> v = {out.v[0].spectral_data().data(),
                                            out.v[1].spectral_data().data(),
                                            out.v[2].spectral_data().data()};
  std::array<std::complex<double>*, 3> heat = {out.h.spectral_data().data(),
                                               out.m.spectral_data().data(),
                                               out.eps.spectral_data().data()};
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const double tx = axis_wavenumber(grid, j0, 1);
    for (int j1 = 0; j1 < n; ++j1) {
      const double ty = axis_wavenumber(grid, j1, 1);
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double tz = axis_wavenumber(grid, j2, 1);
        const double k2 = tx * tx + ty * ty + tz * tz;
        for (auto* hfield : heat) hfield[idx] *= -con.lambda * k2;
        const std::complex<double> a0 = a[idx];
        const std::complex<double> d =
            tx * v[0][idx] + ty * v[1][idx] + tz * v[2][idx];
        a[idx] = -con.gamma * im * d;
        for (int comp = 0; comp < 3; ++comp) {
          const double txc = comp == 0 ? tx : (comp == 1 ? ty : tz);
          v[comp][idx] = -con.gamma * im * txc * a0 -
                         con.lambda * k2 * v[comp][idx] - con.lambda * txc * d;
        }
      }
    }
  }
  return out;
}

namespace {

void write_optional_snapshot(const std::string& out_dir, const std::string& name,
                             const PerturbationState& spectral_state, double t) {
  if (out_dir.empty()) return;
  write_snapshot(out_dir + "/" + name, spectral_state, t);
}

}  // namespace

RunResult run(const PerturbationState& initial, const ModelParams& params,
              const RunOptions& options) {
  if (!(options.dt > 0.0)) fail(ErrorKind::InvalidParameters, "run: dt must be > 0");
  if (!(options.t_end >= 0.0)) {
    fail(ErrorKind::InvalidParameters, "run: t_end must be >= 0");
  }
  if (options.output_stride < 1) {
    fail(ErrorKind::InvalidParameters, "run: output_stride must be >= 1");
  }
  if (options.snapshot_stride < 0) {
    fail(ErrorKind::InvalidParameters, "run: snapshot_stride must be >= 0");
  }
  if (!(options.cfl_safety > 0.0 && options.cfl_safety <= 1.0)) {
    fail(ErrorKind::InvalidParameters, "run: cfl_safety must be in (0, 1]");
  }
  if (!(options.instability_factor > 1.0)) {
    fail(ErrorKind::InvalidParameters, "run: instability_factor must be > 1");
  }
  const DerivedConstants con = derive_constants(params);
  const Grid grid = initial.grid();
  if (grid.n == 0) fail(ErrorKind::Shape, "run: empty initial state");

  PerturbationState w = initial.to_spectral();

  // Advective CFL from the initial velocity field; the exact linear flow
  // imposes no diffusive restriction.
  {
    const PerturbationState real0 = initial.to_real();
    double vmax = 0.0;
    const auto& vx = real0.v[0].real_data();
    const auto& vy = real0.v[1].real_data();
    const auto& vz = real0.v[2].real_data();
    for (std::size_t i = 0; i < vx.size(); ++i) {
      vmax = std::max(vmax, std::sqrt(vx[i] * vx[i] + vy[i] * vy[i] +
                                      vz[i] * vz[i]));
    }
    const double speed = std::max(con.gamma, con.gamma * con.lambda * vmax);
    const double bound = options.cfl_safety * grid.spacing() / speed;
    if (options.dt > bound) {
      fail(ErrorKind::InvalidParameters,
           "run: dt = " + std::to_string(options.dt) +
               " exceeds the advective CFL bound " + std::to_string(bound));
    }
  }

  RunResult result;
  const double h3 = state_sobolev_norm(w, 3);
  if (h3 > options.delta_warn) {
    result.warnings.push_back(
        "initial data above the smallness threshold: ||W0||_{H^3} = " +
        std::to_string(h3) + " > " + std::to_string(options.delta_warn));
  }
  const double l2_initial = state_sobolev_norm(w, 0);

  std::ofstream csv;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    csv.open(options.out_dir + "/norms.csv", std::ios::trunc);
    if (!csv) fail(ErrorKind::Io, "cannot open norms.csv in " + options.out_dir);
    write_norm_csv_header(csv);
  }

  const PerturbationState zero_forcing =
      PerturbationState::zeros(grid, ScalarField::Rep::Spectral);
  auto forcing_at = [&](const PerturbationState& state) {
    return options.nonlinear ? rhs(state, params, con) : zero_forcing;
  };

  auto record = [&](double t, const PerturbationState& state,
                    const PerturbationState& fnow) {
    PerturbationState dstate = linear_time_derivative(state, con);
    add_scaled(dstate, 1.0, fnow);
    const NormRecord row = make_norm_record(t, state, dstate, options.c1_weight);
    result.records.push_back(row);
    if (csv.is_open()) {
      write_norm_csv_row(csv, row);
      csv.flush();
    }
    if (options.on_record) options.on_record(t, state);
  };

  EtdTables tables;
  PerturbationState f_cur = forcing_at(w);
  record(0.0, w, f_cur);

  double t = 0.0;
  int step = 0;
  PerturbationState w_prev = w;
  try {
    const double t_tiny = 1e-12 * std::max(1.0, options.t_end);
    while (t < options.t_end - t_tiny) {
      const double dt_step = std::min(options.dt, options.t_end - t);
      w_prev = w;

      if (options.scheme == Scheme::IfRk2) {
        PerturbationState pw = w;
        apply_linear(pw, dt_step, con);
        PerturbationState pf1 = f_cur;
        apply_linear(pf1, dt_step, con);
        PerturbationState wstar = pw;
        add_scaled(wstar, dt_step, pf1);
        const PerturbationState f2 = forcing_at(wstar);
        w = pw;
        add_scaled(w, 0.5 * dt_step, pf1);
        add_scaled(w, 0.5 * dt_step, f2);
      } else {
        if (tables.dt != dt_step) build_etd_tables(tables, grid, dt_step, con);
        PerturbationState pw = w;
        apply_linear(pw, dt_step, con);
        PerturbationState g1 = apply_phi(f_cur, tables, 1, con);
        PerturbationState wstar = pw;
        add_scaled(wstar, dt_step, g1);
        const PerturbationState f2 = forcing_at(wstar);
        PerturbationState diff = f2;
        add_scaled(diff, -1.0, f_cur);
        const PerturbationState g2 = apply_phi(diff, tables, 2, con);
        w = wstar;
        add_scaled(w, dt_step, g2);
      }

      t += dt_step;
      ++step;

      const double l2_now = state_sobolev_norm(w, 0);
      if (!std::isfinite(l2_now)) {
        fail(ErrorKind::Numeric, "state norm became non-finite");
      }
      if (l2_initial > 0.0 &&
          l2_now > options.instability_factor * l2_initial) {
        fail(ErrorKind::Numeric,
             "norm grew beyond " + std::to_string(options.instability_factor) +
                 "x the initial value: instability detected");
      }

      f_cur = forcing_at(w);

      const bool last = !(t < options.t_end - t_tiny);
      if (step % options.output_stride == 0 || last) record(t, w, f_cur);
      if (options.snapshot_stride > 0 && step % options.snapshot_stride == 0) {
        write_optional_snapshot(options.out_dir,
                                "snap_" + std::to_string(step) + ".tdk", w, t);
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Numeric || e.kind() == ErrorKind::StateValidity) {
      write_optional_snapshot(options.out_dir, "snap_abort.tdk", w_prev, t);
      fail(ErrorKind::AbortedRun,
           "run aborted at t = " + std::to_string(t) + ": " + e.what());
    }
    throw;
  }

  write_optional_snapshot(options.out_dir, "final.tdk", w, t);
  result.steps = step;
  result.final_time = t;
  return result;
}

}  // namespace tdk
