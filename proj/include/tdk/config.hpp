/// @file config.hpp
/// @brief Flat dotted-key configuration: parsing, overrides, canonical echo.
///
/// Format: one `key = value` per line, `#` starts a comment, blank lines are
/// ignored.  Unknown keys, malformed values, duplicate keys, and invariant
/// violations raise parse errors naming the key and line.  render_config
/// emits a canonical echo (sorted keys, 17-significant-digit numbers) that
/// re-parses to an identical configuration.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdk/grid.hpp"
#include "tdk/integrator.hpp"
#include "tdk/model.hpp"
#include "tdk/state.hpp"

namespace tdk {

struct LabConfig {
  // model
  double rho_bar = 0.5;
  double k_bar = 0.1;
  double mu = 1.0;
  double mu_t = 1.0;
  double c1 = 1.44;
  double c2 = 1.92;
  double pressure_gamma = 1.4;
  // grid
  int n = 64;
  double box_length = 100.0;
  // initial data
  std::string recipe = "gaussian-bump";  // or "random-smooth"
  double amplitude = 1e-3;
  double width = 3.2;
  std::optional<double> center_x, center_y, center_z;
  double spectral_decay = 4.0;
  double delta = 1e-3;
  // time marching
  double dt = 0.25;
  double t_end = 30.0;
  int output_stride = 1;
  int snapshot_stride = 0;
  double cfl_safety = 0.8;
  std::string scheme = "if-rk2";  // or "etd-rk2"
  double delta_warn = 0.05;
  double instability_factor = 10.0;
  // analysis
  double p = 1.19;
  double slack = 0.1;
  double slack_linf = 0.15;
  double c1_weight = 10.0;
  std::optional<double> t0, t1;

  bool operator==(const LabConfig&) const = default;

  ModelParams model_params() const;
  Grid make_grid() const;
  InitialDataRecipe initial_recipe() const;
  RunOptions run_options() const;  // out_dir/callback left empty
};

/// Parse text, then apply `key=value` overrides in order (overrides may
/// repeat; later ones win).
LabConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides = {});

/// Load from file (io error when unreadable) and apply overrides.  An empty
/// path yields the defaults with overrides applied.
LabConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

/// Canonical echo; parse_config_text(render_config(c)) == c.
std::string render_config(const LabConfig& config);

}  // namespace tdk
