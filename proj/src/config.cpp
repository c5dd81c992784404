#include "tdk/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tdk {

namespace {

struct Entry {
  std::string value;
  std::string where;  // "line 12" or "override 3"
};

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void parse_fail(const std::string& where, const std::string& msg) {
  fail(ErrorKind::Parse, where + ": " + msg);
}

void split_assignment(const std::string& raw, const std::string& where,
                      std::string& key, std::string& value) {
  const std::size_t eq = raw.find('=');
  if (eq == std::string::npos) {
    parse_fail(where, "expected key = value, got '" + raw + "'");
  }
  key = trim(raw.substr(0, eq));
  value = trim(raw.substr(eq + 1));
  if (key.empty()) parse_fail(where, "empty key");
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_')) {
      parse_fail(where, "invalid character in key '" + key + "'");
    }
  }
  if (value.empty()) parse_fail(where, "empty value for key '" + key + "'");
}

double parse_double(const Entry& e, const std::string& key) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + e.value.size()) {
    parse_fail(e.where, "key '" + key + "': expected a number, got '" + e.value + "'");
  }
  if (!std::isfinite(v)) {
    parse_fail(e.where, "key '" + key + "': value must be finite");
  }
  return v;
}

int parse_int(const Entry& e, const std::string& key) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + e.value.size()) {
    parse_fail(e.where, "key '" + key + "': expected an integer, got '" + e.value + "'");
  }
  return static_cast<int>(v);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ModelParams LabConfig::model_params() const {
  ModelParams p;
  p.rho_bar = rho_bar;
  p.k_bar = k_bar;
  p.mu = mu;
  p.mu_t = mu_t;
  p.c1 = c1;
  p.c2 = c2;
  p.pressure = PressureLaw::power_law(pressure_gamma);
  return p;
}

Grid LabConfig::make_grid() const { return Grid::make(n, box_length); }

InitialDataRecipe LabConfig::initial_recipe() const {
  InitialDataRecipe r;
  r.kind = recipe == "gaussian-bump" ? InitialDataRecipe::Kind::GaussianBump
                                     : InitialDataRecipe::Kind::RandomSmooth;
  r.amplitude = amplitude;
  r.width = width;
  if (center_x || center_y || center_z) {
    r.center = std::array<double, 3>{center_x.value_or(box_length / 2),
                                     center_y.value_or(box_length / 2),
                                     center_z.value_or(box_length / 2)};
  }
  r.spectral_decay = spectral_decay;
  r.delta = delta;
  return r;
}

RunOptions LabConfig::run_options() const {
  RunOptions o;
  o.dt = dt;
  o.t_end = t_end;
  o.output_stride = output_stride;
  o.snapshot_stride = snapshot_stride;
  o.cfl_safety = cfl_safety;
  o.scheme = scheme == "if-rk2" ? Scheme::IfRk2 : Scheme::EtdRk2;
  o.c1_weight = c1_weight;
  o.delta_warn = delta_warn;
  o.instability_factor = instability_factor;
  return o;
}

LabConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string where = "line " + std::to_string(line_no);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::string key, value;
    split_assignment(stripped, where, key, value);
    if (entries.count(key)) {
      parse_fail(where, "duplicate key '" + key + "' (first set at " +
                            entries[key].where + ")");
    }
    entries[key] = Entry{value, where};
  }
  int override_no = 0;
  for (const auto& raw : overrides) {
    ++override_no;
    const std::string where = "override " + std::to_string(override_no);
    std::string key, value;
    split_assignment(trim(raw), where, key, value);
    entries[key] = Entry{value, where};  // overrides may replace anything
  }

  LabConfig cfg;
  std::map<std::string, std::function<void(const Entry&, const std::string&)>>
      setters;
  auto dbl = [&](const char* key, double& slot) {
    setters[key] = [&slot, key](const Entry& e, const std::string&) {
      slot = parse_double(e, key);
    };
  };
  auto opt_dbl = [&](const char* key, std::optional<double>& slot) {
    setters[key] = [&slot, key](const Entry& e, const std::string&) {
      slot = parse_double(e, key);
    };
  };
  auto integer = [&](const char* key, int& slot) {
    setters[key] = [&slot, key](const Entry& e, const std::string&) {
      slot = parse_int(e, key);
    };
  };
  auto word = [&](const char* key, std::string& slot,
                  std::vector<std::string> allowed) {
    setters[key] = [&slot, key, allowed = std::move(allowed)](
                       const Entry& e, const std::string&) {
      if (std::find(allowed.begin(), allowed.end(), e.value) == allowed.end()) {
        std::string opts;
        for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
        parse_fail(e.where, "key '" + std::string(key) + "': expected one of {" +
                                opts + "}, got '" + e.value + "'");
      }
      slot = e.value;
    };
  };

  dbl("model.rho_bar", cfg.rho_bar);
  dbl("model.k_bar", cfg.k_bar);
  dbl("model.mu", cfg.mu);
  dbl("model.mu_t", cfg.mu_t);
  dbl("model.c1", cfg.c1);
  dbl("model.c2", cfg.c2);
  dbl("model.pressure_gamma", cfg.pressure_gamma);
  integer("grid.n", cfg.n);
  dbl("grid.box_length", cfg.box_length);
  word("init.recipe", cfg.recipe, {"gaussian-bump", "random-smooth"});
  dbl("init.amplitude", cfg.amplitude);
  dbl("init.width", cfg.width);
  opt_dbl("init.center_x", cfg.center_x);
  opt_dbl("init.center_y", cfg.center_y);
  opt_dbl("init.center_z", cfg.center_z);
  dbl("init.spectral_decay", cfg.spectral_decay);
  dbl("init.delta", cfg.delta);
  dbl("run.dt", cfg.dt);
  dbl("run.t_end", cfg.t_end);
  integer("run.output_stride", cfg.output_stride);
  integer("run.snapshot_stride", cfg.snapshot_stride);
  dbl("run.cfl_safety", cfg.cfl_safety);
  word("run.scheme", cfg.scheme, {"if-rk2", "etd-rk2"});
  dbl("run.delta_warn", cfg.delta_warn);
  dbl("run.instability_factor", cfg.instability_factor);
  dbl("analysis.p", cfg.p);
  dbl("analysis.slack", cfg.slack);
  dbl("analysis.slack_linf", cfg.slack_linf);
  dbl("analysis.c1_weight", cfg.c1_weight);
  opt_dbl("analysis.t0", cfg.t0);
  opt_dbl("analysis.t1", cfg.t1);

  for (const auto& [key, entry] : entries) {
    auto it = setters.find(key);
    if (it == setters.end()) parse_fail(entry.where, "unknown key '" + key + "'");
    it->second(entry, key);
  }

  // Field invariants, reported against the offending key.
  auto invariant = [&](const char* key, bool ok, const std::string& what) {
    if (ok) return;
    auto it = entries.find(key);
    const std::string where = it == entries.end() ? "default" : it->second.where;
    parse_fail(where, "key '" + std::string(key) + "': " + what);
  };
  invariant("grid.n", cfg.n >= 4 && cfg.n % 2 == 0, "must be even and >= 4");
  invariant("grid.box_length", cfg.box_length > 0.0, "must be > 0");
  invariant("model.rho_bar", cfg.rho_bar > 0.0, "must be > 0");
  invariant("model.k_bar", cfg.k_bar >= 0.0, "must be >= 0");
  invariant("model.mu", cfg.mu > 0.0, "must be > 0");
  invariant("model.mu_t", cfg.mu_t >= 0.0, "must be >= 0");
  invariant("model.c1", cfg.c1 > 0.0, "must be > 0");
  invariant("model.c2", cfg.c2 > 0.0, "must be > 0");
  invariant("model.pressure_gamma", cfg.pressure_gamma >= 1.0, "must be >= 1");
  invariant("init.amplitude", cfg.amplitude != 0.0, "must be nonzero");
  invariant("init.width", cfg.width > 0.0, "must be > 0");
  invariant("init.spectral_decay", cfg.spectral_decay >= 0.0, "must be >= 0");
  invariant("init.delta", cfg.delta >= 0.0, "must be >= 0");
  invariant("run.dt", cfg.dt > 0.0, "must be > 0");
  invariant("run.t_end", cfg.t_end >= 0.0, "must be >= 0");
  invariant("run.output_stride", cfg.output_stride >= 1, "must be >= 1");
  invariant("run.snapshot_stride", cfg.snapshot_stride >= 0, "must be >= 0");
  invariant("run.cfl_safety", cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0,
            "must be in (0, 1]");
  invariant("run.delta_warn", cfg.delta_warn > 0.0, "must be > 0");
  invariant("run.instability_factor", cfg.instability_factor > 1.0,
            "must be > 1");
  invariant("analysis.p", cfg.p >= 1.0 && cfg.p < 1.2, "must be in [1, 6/5)");
  invariant("analysis.slack", cfg.slack >= 0.0, "must be >= 0");
  invariant("analysis.slack_linf", cfg.slack_linf >= 0.0, "must be >= 0");
  invariant("analysis.c1_weight", cfg.c1_weight > 0.0, "must be > 0");
  if (cfg.t0 && cfg.t1) {
    invariant("analysis.t1", *cfg.t1 > *cfg.t0, "must be > analysis.t0");
  }
  // The pressure law must leave the sound speed well defined.
  invariant("model.k_bar",
            cfg.pressure_gamma * std::pow(cfg.rho_bar, cfg.pressure_gamma - 1.0) +
                    cfg.k_bar >
                0.0,
            "p'(rho_bar) + k_bar must be > 0");
  return cfg;
}

LabConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  if (path.empty()) return parse_config_text("", overrides);
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

std::string render_config(const LabConfig& c) {
  std::ostringstream out;
  auto emit = [&](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  // alphabetical by key for a stable echo
  emit("analysis.c1_weight", format_double(c.c1_weight));
  emit("analysis.p", format_double(c.p));
  emit("analysis.slack", format_double(c.slack));
  emit("analysis.slack_linf", format_double(c.slack_linf));
  if (c.t0) emit("analysis.t0", format_double(*c.t0));
  if (c.t1) emit("analysis.t1", format_double(*c.t1));
  emit("grid.box_length", format_double(c.box_length));
  emit("grid.n", std::to_string(c.n));
  emit("init.amplitude", format_double(c.amplitude));
  if (c.center_x) emit("init.center_x", format_double(*c.center_x));
  if (c.center_y) emit("init.center_y", format_double(*c.center_y));
  if (c.center_z) emit("init.center_z", format_double(*c.center_z));
  emit("init.delta", format_double(c.delta));
  emit("init.recipe", c.recipe);
  emit("init.spectral_decay", format_double(c.spectral_decay));
  emit("init.width", format_double(c.width));
  emit("model.c1", format_double(c.c1));
  emit("model.c2", format_double(c.c2));
  emit("model.k_bar", format_double(c.k_bar));
  emit("model.mu", format_double(c.mu));
  emit("model.mu_t", format_double(c.mu_t));
  emit("model.pressure_gamma", format_double(c.pressure_gamma));
  emit("model.rho_bar", format_double(c.rho_bar));
  emit("run.cfl_safety", format_double(c.cfl_safety));
  emit("run.delta_warn", format_double(c.delta_warn));
  emit("run.dt", format_double(c.dt));
  emit("run.instability_factor", format_double(c.instability_factor));
  emit("run.output_stride", std::to_string(c.output_stride));
  emit("run.scheme", c.scheme);
  emit("run.snapshot_stride", std::to_string(c.snapshot_stride));
  emit("run.t_end", format_double(c.t_end));
  return out.str();
}

}  // namespace tdk
