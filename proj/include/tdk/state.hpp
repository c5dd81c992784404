/// @file state.hpp
/// @brief Five-field perturbation states, the physical/perturbation change of
///        variables, deterministic initial-data recipes, and snapshot I/O.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "tdk/field.hpp"
#include "tdk/model.hpp"

namespace tdk {

/// Perturbation variables (a, v, h, m, eps) about (rho_bar, 0, 0, k_bar, 0).
struct PerturbationState {
  ScalarField a;
  std::array<ScalarField, 3> v;
  ScalarField h;
  ScalarField m;
  ScalarField eps;

  static PerturbationState zeros(const Grid& grid,
                                 ScalarField::Rep rep = ScalarField::Rep::Real);
  const Grid& grid() const { return a.grid(); }

  /// Pointers to all seven component fields, a first.
  std::array<ScalarField*, 7> components();
  std::array<const ScalarField*, 7> components() const;

  PerturbationState to_spectral() const;
  PerturbationState to_real() const;
  PerturbationState& operator*=(double s);
};

/// result += scale * other, componentwise.
void add_scaled(PerturbationState& result, double scale, const PerturbationState& other);

/// Physical variables (rho, u, h, k, eps).
struct PhysicalState {
  ScalarField rho;
  std::array<ScalarField, 3> u;
  ScalarField h;
  ScalarField k;
  ScalarField eps;
};

/// a = rho - rho_bar, v = u/(gamma*lambda), m = k - k_bar; h, eps unchanged.
PerturbationState to_perturbation(const PhysicalState& state, const ModelParams& params);
PhysicalState from_perturbation(const PerturbationState& state, const ModelParams& params);

/// Pointwise Euclidean magnitude across all seven components, then L^q.
double state_lq_norm(const PerturbationState& state, double q);

/// sqrt(sum over components of sum_{|alpha| <= s} ||d^alpha . ||_2^2).
double state_sobolev_norm(const PerturbationState& state, int s);

struct InitialDataRecipe {
  enum class Kind { GaussianBump, RandomSmooth };
  Kind kind = Kind::GaussianBump;
  double amplitude = 1e-3;
  // gaussian-bump: exp(-|x-c|^2 / (2 width^2)) in every component, minimum-image
  // distance; center defaults to the box center when unset.
  double width = 2.5;
  std::optional<std::array<double, 3>> center;
  // random-smooth: seeded coefficients ~ amplitude*(1+|xi|^2)^(-decay/2) on the
  // retained band, Hermitian by construction.
  double spectral_decay = 4.0;
  // When positive, rescale the state so ||W||_{H^3} equals delta exactly.
  double delta = 0.0;
};

/// Deterministic: a fixed (recipe, seed, grid) triple reproduces the fields
/// bit-exactly.  Errors with ErrorKind::Resolution when the recipe cannot be
/// represented on the grid (bump narrower than two spacings, or delta > 0 with
/// an identically-zero shape).
PerturbationState make_initial_data(const Grid& grid, const InitialDataRecipe& recipe,
                                    std::uint64_t seed);

/// Effective radius used for the box-fidelity window: 3*width for bumps,
/// unbounded (returns infinity for the wrap time) otherwise.
double fidelity_wrap_time(const InitialDataRecipe& recipe, const Grid& grid,
                          double gamma);

/// Binary snapshot format, magic "TDK1": header (magic, u32 n, f64 box_length,
/// f64 time, u32 field count), then row-major float64 samples per component,
/// little-endian throughout.
void write_snapshot(const std::string& path, const PerturbationState& state, double time);
struct Snapshot {
  PerturbationState state;
  double time;
};
Snapshot read_snapshot(const std::string& path);

}  // namespace tdk
