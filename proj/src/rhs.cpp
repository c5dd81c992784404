#include "tdk/rhs.hpp"

#include <cmath>
#include <string>

#include "tdk/field.hpp"
#include "tdk/symbols.hpp"

namespace tdk {

namespace {

/// Laplacian with the full even symbol -|xi|^2 (Nyquist included).
ScalarField laplacian(const ScalarField& f) {
  ScalarField out = f.to_spectral();
  const Grid& grid = out.grid();
  const int n = grid.n;
  const int half = n / 2 + 1;
  auto& data = out.spectral_data();
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const double kx = axis_wavenumber(grid, j0, 2);
    for (int j1 = 0; j1 < n; ++j1) {
      const double ky = axis_wavenumber(grid, j1, 2);
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double kz = axis_wavenumber(grid, j2, 2);
        data[idx] *= -(kx * kx + ky * ky + kz * kz);
      }
    }
  }
  return out;
}

ScalarField divergence_spectral(const ScalarField& f0, const ScalarField& f1,
                                const ScalarField& f2) {
  ScalarField out = derivative(f0, MultiIndex{1, 0, 0});
  out += derivative(f1, MultiIndex{0, 1, 0});
  out += derivative(f2, MultiIndex{0, 0, 1});
  return out;
}

std::string index_string(const Grid& grid, std::size_t flat) {
  const int n = grid.n;
  const int i0 = static_cast<int>(flat) / (n * n);
  const int i1 = (static_cast<int>(flat) / n) % n;
  const int i2 = static_cast<int>(flat) % n;
  return "(" + std::to_string(i0) + ", " + std::to_string(i1) + ", " +
         std::to_string(i2) + ")";
}

void check_floors(const Grid& grid, const std::vector<double>& a_r,
                  const std::vector<double>& m_r, const ModelParams& params) {
  const double rho_floor = 0.1 * params.rho_bar;
  const double k_floor = 0.1 * params.k_bar;
  for (std::size_t i = 0; i < a_r.size(); ++i) {
    const double rho = a_r[i] + params.rho_bar;
    if (!(rho >= rho_floor)) {
      fail(ErrorKind::StateValidity,
           "density floor violated: rho = " + std::to_string(rho) + " < 0.1 rho_bar at " +
               index_string(grid, i));
    }
    const double kk = m_r[i] + params.k_bar;
    if (!(kk >= k_floor)) {
      fail(ErrorKind::StateValidity,
           "turbulent-energy floor violated: k = " + std::to_string(kk) +
               " < 0.1 k_bar at " + index_string(grid, i));
    }
  }
}

/// Real-space slices shared by the source terms and the forcing assembly.
struct Slices {
  std::vector<double> a, m;
  std::array<std::vector<double>, 9> dv;  // dv[3*i + j] = d_j v_i
  std::vector<double> divv;
  std::array<std::vector<double>, 3> ga;  // grad a
};

void fill_sources(const Slices& s, const ModelParams& params,
                  const DerivedConstants& con, std::vector<double>& sk,
                  std::vector<double>& g) {
  const double gl = con.gamma * con.lambda;
  const double gl2 = gl * gl;
  const double mu_e = params.mu_e();
  const std::size_t count = s.a.size();
  sk.resize(count);
  g.resize(count);
  for (std::size_t x = 0; x < count; ++x) {
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double gij = s.dv[3 * i + j][x];
        const double gji = s.dv[3 * j + i][x];
        tr += gij * (gij + gji);
      }
    }
    tr *= gl2;
    const double divu = gl * s.divv[x];
    const double rho = s.a[x] + params.rho_bar;
    const double kk = s.m[x] + params.k_bar;
    const double grho2 = s.ga[0][x] * s.ga[0][x] + s.ga[1][x] * s.ga[1][x] +
                         s.ga[2][x] * s.ga[2][x];
    sk[x] = params.mu * tr - (2.0 / 3.0) * params.mu * divu * divu +
            (params.mu_t / (rho * rho)) * params.pressure.dp(rho) * grho2;
    g[x] = mu_e * tr - (2.0 / 3.0) * divu * (rho * kk + mu_e * divu);
  }
}

}  // namespace

SourceFields turbulence_sources(const PerturbationState& state,
                                const ModelParams& params,
                                const DerivedConstants& con) {
  const Grid& grid = state.grid();
  Slices s;
  s.a = state.a.to_real().real_data();
  s.m = state.m.to_real().real_data();
  std::array<ScalarField, 3> vs;
  for (int i = 0; i < 3; ++i) vs[i] = state.v[i].to_spectral();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      MultiIndex alpha{0, 0, 0};
      alpha[j] = 1;
      s.dv[3 * i + j] = derivative(vs[i], alpha).to_real().real_data();
    }
  }
  s.divv = divergence_spectral(vs[0], vs[1], vs[2]).to_real().real_data();
  const ScalarField as = state.a.to_spectral();
  for (int j = 0; j < 3; ++j) {
    MultiIndex alpha{0, 0, 0};
    alpha[j] = 1;
    s.ga[j] = derivative(as, alpha).to_real().real_data();
  }
  SourceFields out{ScalarField::zeros(grid), ScalarField::zeros(grid)};
  fill_sources(s, params, con, out.s_k.real_data(), out.g.real_data());
  return out;
}

void check_state_validity(const PerturbationState& state,
                          const ModelParams& params) {
  check_floors(state.grid(), state.a.to_real().real_data(),
               state.m.to_real().real_data(), params);
}

PerturbationState rhs(const PerturbationState& state, const ModelParams& params,
                      const DerivedConstants& con) {
  const Grid& grid = state.grid();
  const std::size_t count = grid.size();
  const double gl = con.gamma * con.lambda;
  const double inv_gl = 1.0 / gl;
  const double lambda = con.lambda;

  // Spectral copies for derivatives, real slices for products.
  const ScalarField as = state.a.to_spectral();
  const ScalarField hs = state.h.to_spectral();
  const ScalarField ms = state.m.to_spectral();
  const ScalarField es = state.eps.to_spectral();
  std::array<ScalarField, 3> vs;
  for (int i = 0; i < 3; ++i) vs[i] = state.v[i].to_spectral();

  Slices s;
  s.a = as.to_real().real_data();
  s.m = ms.to_real().real_data();
  check_floors(grid, s.a, s.m, params);
  std::array<std::vector<double>, 3> vr;
  for (int i = 0; i < 3; ++i) vr[i] = vs[i].to_real().real_data();
  const std::vector<double> hr = hs.to_real().real_data();
  const std::vector<double> er = es.to_real().real_data();

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      MultiIndex alpha{0, 0, 0};
      alpha[j] = 1;
      s.dv[3 * i + j] = derivative(vs[i], alpha).to_real().real_data();
    }
  }
  const ScalarField divv_s = divergence_spectral(vs[0], vs[1], vs[2]);
  s.divv = divv_s.to_real().real_data();

  std::array<std::vector<double>, 3> gh, gm, ge;
  for (int j = 0; j < 3; ++j) {
    MultiIndex alpha{0, 0, 0};
    alpha[j] = 1;
    s.ga[j] = derivative(as, alpha).to_real().real_data();
    gh[j] = derivative(hs, alpha).to_real().real_data();
    gm[j] = derivative(ms, alpha).to_real().real_data();
    ge[j] = derivative(es, alpha).to_real().real_data();
  }

  // Viscous blocks: (Laplacian + grad div) v and Laplacians of h, m, eps.
  std::array<std::vector<double>, 3> visc;
  for (int i = 0; i < 3; ++i) {
    ScalarField tmp = laplacian(vs[i]);
    MultiIndex alpha{0, 0, 0};
    alpha[i] = 1;
    tmp += derivative(divv_s, alpha);
    visc[i] = tmp.to_real().real_data();
  }
  const std::vector<double> lap_h = laplacian(hs).to_real().real_data();
  const std::vector<double> lap_m = laplacian(ms).to_real().real_data();
  const std::vector<double> lap_e = laplacian(es).to_real().real_data();

  std::vector<double> sk, gg;
  fill_sources(s, params, con, sk, gg);

  // Reference values computed with the same expressions so that the
  // equilibrium state yields bitwise-zero forcing.
  const double c_p0 = params.pressure.dp(params.rho_bar) / params.rho_bar;
  const double c_k0 = (2.0 / 3.0) * (params.k_bar / params.rho_bar);

  PerturbationState f = PerturbationState::zeros(grid, ScalarField::Rep::Real);
  std::array<ScalarField, 3> av_prod{ScalarField::zeros(grid),
                                     ScalarField::zeros(grid),
                                     ScalarField::zeros(grid)};
  for (int i = 0; i < 3; ++i) {
    auto& p = av_prod[i].real_data();
    for (std::size_t x = 0; x < count; ++x) p[x] = s.a[x] * vr[i][x];
  }

  for (int d = 0; d < 3; ++d) {
    auto& out = f.v[d].real_data();
    for (std::size_t x = 0; x < count; ++x) {
      const double rho = s.a[x] + params.rho_bar;
      const double kk = s.m[x] + params.k_bar;
      const double b = params.pressure.dp(rho) / rho - c_p0 +
                       (2.0 / 3.0) * (kk / rho) - c_k0;
      out[x] = (1.0 / rho - lambda) * visc[d][x] - inv_gl * b * s.ga[d][x] -
               (2.0 / 3.0) * inv_gl * gm[d][x];
    }
  }
  {
    auto& out_h = f.h.real_data();
    auto& out_m = f.m.real_data();
    auto& out_e = f.eps.real_data();
    for (std::size_t x = 0; x < count; ++x) {
      const double rho = s.a[x] + params.rho_bar;
      const double kk = s.m[x] + params.k_bar;
      const double inv_rho_m_l = 1.0 / rho - lambda;
      const double adv_h =
          vr[0][x] * gh[0][x] + vr[1][x] * gh[1][x] + vr[2][x] * gh[2][x];
      const double adv_m =
          vr[0][x] * gm[0][x] + vr[1][x] * gm[1][x] + vr[2][x] * gm[2][x];
      const double adv_e =
          vr[0][x] * ge[0][x] + vr[1][x] * ge[1][x] + vr[2][x] * ge[2][x];
      out_h[x] = inv_rho_m_l * lap_h[x] -
                 gl * params.pressure.dp(rho) * s.divv[x] + sk[x] / rho -
                 gl * adv_h;
      out_m[x] = inv_rho_m_l * lap_m[x] + gg[x] / rho - er[x] - gl * adv_m;
      out_e[x] = inv_rho_m_l * lap_e[x] +
                 params.c1 * gg[x] * er[x] / (rho * kk) -
                 params.c2 * er[x] * er[x] / kk - gl * adv_e;
    }
  }

  // Assemble spectral output; the density slot is the exact divergence of
  // the product fields so its zero mode vanishes identically.
  PerturbationState out = PerturbationState::zeros(grid, ScalarField::Rep::Spectral);
  {
    ScalarField div_av = divergence_spectral(
        av_prod[0].to_spectral(), av_prod[1].to_spectral(), av_prod[2].to_spectral());
    div_av *= -gl;
    out.a = dealias(div_av);
  }
  for (int d = 0; d < 3; ++d) out.v[d] = dealias(f.v[d].to_spectral());
  out.h = dealias(f.h.to_spectral());
  out.m = dealias(f.m.to_spectral());
  out.eps = dealias(f.eps.to_spectral());
  return out;
}

}  // namespace tdk
