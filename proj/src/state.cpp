#include "tdk/state.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>

#include "tdk/symbols.hpp"

namespace tdk {
namespace {

constexpr char kMagic[4] = {'T', 'D', 'K', '1'};

// Uniform in (0, 1] from the top 53 bits; avoids log(0) in the polar draw.
double uniform_open(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 1.0) * 0x1p-53;
}

std::array<double, 2> normal_pair(std::mt19937_64& engine) {
  const double u1 = uniform_open(engine);
  const double u2 = uniform_open(engine);
  const double r = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace

PerturbationState PerturbationState::zeros(const Grid& grid, ScalarField::Rep rep) {
  PerturbationState w;
  for (ScalarField* f : w.components()) *f = ScalarField::zeros(grid, rep);
  return w;
}

std::array<ScalarField*, 7> PerturbationState::components() {
  return {&a, &v[0], &v[1], &v[2], &h, &m, &eps};
}

std::array<const ScalarField*, 7> PerturbationState::components() const {
  return {&a, &v[0], &v[1], &v[2], &h, &m, &eps};
}

PerturbationState PerturbationState::to_spectral() const {
  PerturbationState out;
  auto src = components();
  auto dst = out.components();
  for (int i = 0; i < 7; ++i) *dst[i] = src[i]->to_spectral();
  return out;
}

PerturbationState PerturbationState::to_real() const {
  PerturbationState out;
  auto src = components();
  auto dst = out.components();
  for (int i = 0; i < 7; ++i) *dst[i] = src[i]->to_real();
  return out;
}

PerturbationState& PerturbationState::operator*=(double s) {
  for (ScalarField* f : components()) *f *= s;
  return *this;
}

void add_scaled(PerturbationState& result, double scale,
                const PerturbationState& other) {
  auto dst = result.components();
  auto src = other.components();
  for (int i = 0; i < 7; ++i) add_scaled(*dst[i], scale, *src[i]);
}

PerturbationState to_perturbation(const PhysicalState& state,
                                  const ModelParams& params) {
  const DerivedConstants con = derive_constants(params);
  const double inv_gl = 1.0 / (con.gamma * con.lambda);
  PerturbationState w;
  w.a = state.rho.to_real();
  for (double& x : w.a.real_data()) x -= params.rho_bar;
  for (int d = 0; d < 3; ++d) {
    if (!(state.u[d].grid() == state.rho.grid()))
      fail(ErrorKind::Shape, "physical state components live on different grids");
    w.v[d] = state.u[d].to_real();
    w.v[d] *= inv_gl;
  }
  if (!(state.h.grid() == state.rho.grid()) || !(state.k.grid() == state.rho.grid()) ||
      !(state.eps.grid() == state.rho.grid()))
    fail(ErrorKind::Shape, "physical state components live on different grids");
  w.h = state.h.to_real();
  w.m = state.k.to_real();
  for (double& x : w.m.real_data()) x -= params.k_bar;
  w.eps = state.eps.to_real();
  return w;
}

PhysicalState from_perturbation(const PerturbationState& state,
                                const ModelParams& params) {
  const DerivedConstants con = derive_constants(params);
  const double gl = con.gamma * con.lambda;
  PhysicalState p;
  p.rho = state.a.to_real();
  for (double& x : p.rho.real_data()) x += params.rho_bar;
  for (int d = 0; d < 3; ++d) {
    if (!(state.v[d].grid() == state.a.grid()))
      fail(ErrorKind::Shape, "perturbation state components live on different grids");
    p.u[d] = state.v[d].to_real();
    p.u[d] *= gl;
  }
  p.h = state.h.to_real();
  p.k = state.m.to_real();
  for (double& x : p.k.real_data()) x += params.k_bar;
  p.eps = state.eps.to_real();
  return p;
}

double state_lq_norm(const PerturbationState& state, double q) {
  const PerturbationState real = state.to_real();
  ScalarField mag = ScalarField::zeros(state.grid(), ScalarField::Rep::Real);
  auto& out = mag.real_data();
  for (const ScalarField* f : real.components()) {
    const auto& data = f->real_data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += data[i] * data[i];
  }
  for (double& x : out) x = std::sqrt(x);
  return lq_norm(mag, q);
}

double state_sobolev_norm(const PerturbationState& state, int s) {
  auto comps = state.components();
  return sobolev_norm(std::vector<const ScalarField*>(comps.begin(), comps.end()), s);
}

PerturbationState make_initial_data(const Grid& grid, const InitialDataRecipe& recipe,
                                    std::uint64_t seed) {
  PerturbationState w;
  if (recipe.kind == InitialDataRecipe::Kind::GaussianBump) {
    if (!(recipe.width > 0.0))
      fail(ErrorKind::InvalidParameters, "bump width must be positive");
    if (recipe.width < 2.0 * grid.spacing())
      fail(ErrorKind::Resolution,
           "bump width below two grid spacings cannot be represented");
    const double l = grid.box_length;
    const std::array<double, 3> c =
        recipe.center.value_or(std::array<double, 3>{l / 2, l / 2, l / 2});
    const double a = recipe.amplitude;
    const double inv2w2 = 1.0 / (2.0 * recipe.width * recipe.width);
    ScalarField bump =
        ScalarField::from_function(grid, [&](double x0, double x1, double x2) {
          double r2 = 0.0;
          const double dx[3] = {x0 - c[0], x1 - c[1], x2 - c[2]};
          for (double d : dx) {
            d -= l * std::round(d / l);  // minimum-image distance
            r2 += d * d;
          }
          return a * std::exp(-r2 * inv2w2);
        });
    for (ScalarField* f : w.components()) *f = bump;
  } else {
    // Seeded spectral coefficients on the retained band, Hermitian by
    // construction, mean-free; traversal order fixes the draw sequence.
    const int n = grid.n;
    const int half = n / 2 + 1;
    const int cutoff = grid.dealias_cutoff();
    std::mt19937_64 engine(seed);
    const double n3 = static_cast<double>(grid.size());
    const int band = 2 * cutoff + 1;
    const double mode_count = static_cast<double>(band) * band * band;
    const double scale = recipe.amplitude * n3 / std::sqrt(mode_count);
    for (ScalarField* fp : w.components()) {
      ScalarField f = ScalarField::zeros(grid, ScalarField::Rep::Spectral);
      auto& data = f.spectral_data();
      std::size_t idx = 0;
      for (int j0 = 0; j0 < n; ++j0)
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < half; ++j2, ++idx) {
            const int s0 = grid.signed_index(j0);
            const int s1 = grid.signed_index(j1);
            const int s2 = grid.signed_index(j2);
            if (std::abs(s0) > cutoff || std::abs(s1) > cutoff ||
                std::abs(s2) > cutoff)
              continue;
            if (s0 == 0 && s1 == 0 && s2 == 0) continue;
            if (j2 == 0) {
              // Self-conjugate plane: the partner under (j0,j1) -> (-j0,-j1)
              // carries the conjugate; draw only on the primary of each pair.
              const int p0 = (n - j0) % n;
              const int p1 = (n - j1) % n;
              if (std::make_pair(p0, p1) < std::make_pair(j0, j1)) {
                const std::size_t partner =
                    (static_cast<std::size_t>(p0) * n + p1) * half;
                data[idx] = std::conj(data[partner]);
                continue;
              }
            }
            const double xi2 =
                std::pow(grid.wavenumber(j0), 2) + std::pow(grid.wavenumber(j1), 2) +
                std::pow(grid.wavenumber(j2), 2);
            const double shape =
                scale * std::pow(1.0 + xi2, -0.5 * recipe.spectral_decay);
            const auto g = normal_pair(engine);
            const bool self_paired = j2 == 0 && (n - j0) % n == j0 && (n - j1) % n == j1;
            if (self_paired)
              data[idx] = {shape * g[0], 0.0};
            else
              data[idx] = {shape * g[0] * M_SQRT1_2, shape * g[1] * M_SQRT1_2};
          }
      *fp = f.to_real();
    }
  }

  if (recipe.delta > 0.0) {
    const double norm = state_sobolev_norm(w, 3);
    if (!(norm > 0.0))
      fail(ErrorKind::Resolution,
           "requested delta is unreachable: generated shape has zero H^3 norm");
    w *= recipe.delta / norm;
  }
  return w;
}

double fidelity_wrap_time(const InitialDataRecipe& recipe, const Grid& grid,
                          double gamma) {
  if (recipe.kind != InitialDataRecipe::Kind::GaussianBump)
    return std::numeric_limits<double>::infinity();
  const double radius = 3.0 * recipe.width;
  const double reach = grid.box_length / 2.0 - radius;
  return reach > 0.0 ? reach / gamma : 0.0;
}

void write_snapshot(const std::string& path, const PerturbationState& state,
                    double time) {
  const PerturbationState real = state.to_real();
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) fail(ErrorKind::Io, "cannot open snapshot for writing: " + path);
  const Grid& grid = state.grid();
  const std::uint32_t n = static_cast<std::uint32_t>(grid.n);
  const std::uint32_t count = 7;
  bool ok = std::fwrite(kMagic, 1, 4, fp) == 4 &&
            std::fwrite(&n, sizeof n, 1, fp) == 1 &&
            std::fwrite(&grid.box_length, sizeof(double), 1, fp) == 1 &&
            std::fwrite(&time, sizeof(double), 1, fp) == 1 &&
            std::fwrite(&count, sizeof count, 1, fp) == 1;
  for (const ScalarField* f : real.components()) {
    if (!ok) break;
    const auto& data = f->real_data();
    ok = std::fwrite(data.data(), sizeof(double), data.size(), fp) == data.size();
  }
  if (std::fclose(fp) != 0) ok = false;
  if (!ok) fail(ErrorKind::Io, "short write on snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) fail(ErrorKind::Io, "cannot open snapshot: " + path);
  char magic[4];
  std::uint32_t n = 0;
  std::uint32_t count = 0;
  double box_length = 0.0;
  double time = 0.0;
  bool ok = std::fread(magic, 1, 4, fp) == 4 &&
            std::fread(&n, sizeof n, 1, fp) == 1 &&
            std::fread(&box_length, sizeof(double), 1, fp) == 1 &&
            std::fread(&time, sizeof(double), 1, fp) == 1 &&
            std::fread(&count, sizeof count, 1, fp) == 1;
  if (!ok || std::memcmp(magic, kMagic, 4) != 0) {
    std::fclose(fp);
    fail(ErrorKind::Io, "not a TDK1 snapshot: " + path);
  }
  if (count != 7) {
    std::fclose(fp);
    fail(ErrorKind::Shape, "snapshot does not hold a five-field state: " + path);
  }
  Grid grid;
  try {
    grid = Grid::make(static_cast<int>(n), box_length);
  } catch (const Error&) {
    std::fclose(fp);
    fail(ErrorKind::Io, "snapshot header is corrupt: " + path);
  }
  Snapshot snap{PerturbationState::zeros(grid), time};
  for (ScalarField* f : snap.state.components()) {
    auto& data = f->real_data();
    if (std::fread(data.data(), sizeof(double), data.size(), fp) != data.size()) {
      std::fclose(fp);
      fail(ErrorKind::Io, "snapshot truncated: " + path);
    }
  }
  std::fclose(fp);
  return snap;
}

}  // namespace tdk
