#include "tdk/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "tdk/analysis.hpp"
#include "tdk/config.hpp"
#include "tdk/integrator.hpp"
#include "tdk/model.hpp"
#include "tdk/state.hpp"

namespace tdk {

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file (key = value lines)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "RNG seed for initial data");
  cmd->add_option("--threads", o.threads, "worker threads (0 = library default)");
  cmd->add_option("--set", o.sets, "override key=value (repeatable)")
      ->take_all();
}

void apply_threads(const CommonOpts& o) {
  if (o.threads > 0) {
#ifdef _OPENMP
    omp_set_num_threads(o.threads);
#endif
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json fit_json(const FitResult& fit) {
  return json{{"exponent", fit.exponent},
              {"intercept", fit.intercept},
              {"residual_rms", fit.residual_rms},
              {"samples", fit.samples}};
}

json decay_report_json(const DecayReport& rep,
                  const std::vector<NormRecord>& records) {
  json claims = json::array();
  for (const auto& c : rep.claims) {
    claims.push_back(json{{"name", c.name},
                          {"column", c.column},
                          {"target", c.target},
                          {"slack", c.slack},
                          {"fit", fit_json(c.fit)},
                          {"degenerate", c.degenerate},
                          {"pass", c.pass}});
  }
  // Mass conservation and energy monotonicity, reported as data.
  double mass0 = 0.0, mass_drift = 0.0;
  if (!records.empty()) {
    mass0 = records.front().mass;
    for (const auto& r : records) {
      mass_drift = std::max(mass_drift, std::abs(r.mass - mass0));
    }
  }
  bool monotone = true;
  json first_increase = nullptr;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i - 1].t < 1.0) continue;
    if (records[i].energy > records[i - 1].energy * (1.0 + 1e-10)) {
      monotone = false;
      first_increase = records[i].t;
      break;
    }
  }
  return json{{"schema", 1},
              {"kind", "decay-report"},
              {"p", rep.p},
              {"window", json{{"t0", rep.window.t0}, {"t1", rep.window.t1}}},
              {"degenerate", rep.degenerate},
              {"claims", claims},
              {"mass", json{{"initial", mass0}, {"max_drift", mass_drift}}},
              {"energy", json{{"monotone_after_t1", monotone},
                              {"first_increase_t", first_increase}}},
              {"all_pass", rep.all_pass}};
}

void print_claims(const DecayReport& rep) {
  for (const auto& c : rep.claims) {
    std::cout << "claim " << c.name << ": ";
    if (c.degenerate) {
      std::cout << "degenerate (zero trajectory) -> PASS\n";
      continue;
    }
    std::cout << "fitted = " << c.fit.exponent << " target = " << -c.target
              << " slack = " << c.slack << " -> " << (c.pass ? "PASS" : "FAIL")
              << "\n";
  }
}

int cmd_rates(const CommonOpts& common, double p, const std::string& q_text,
              int l, bool has_r, double r1, double r2, bool has_n, int n) {
  apply_threads(common);
  char buf[64];
  if (has_r) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", c1_bound(r1, r2));
    std::cout << buf;
    return 0;
  }
  if (has_n) {
    const IterationCap cap = iteration_cap(n, p);
    std::cout << cap.value << (cap.usable ? "" : " (unusable)") << "\n";
    return 0;
  }
  double q;
  if (q_text == "inf" || q_text == "infinity") {
    q = std::numeric_limits<double>::infinity();
  } else {
    char* end = nullptr;
    q = std::strtod(q_text.c_str(), &end);
    if (end != q_text.c_str() + q_text.size()) {
      fail(ErrorKind::Usage, "rates: --q expects a number or 'inf'");
    }
  }
  std::snprintf(buf, sizeof(buf), "%.17g\n", sigma(p, q, l));
  std::cout << buf;
  return 0;
}

int cmd_run(const CommonOpts& common, bool nonlinear) {
  apply_threads(common);
  if (common.out_dir.empty()) {
    fail(ErrorKind::Usage, "run requires --out DIR");
  }
  const LabConfig cfg = load_config(common.config_path, common.sets);
  std::filesystem::create_directories(common.out_dir);
  write_text(common.out_dir + "/effective.cfg", render_config(cfg));

  const Grid grid = cfg.make_grid();
  const ModelParams params = cfg.model_params();
  RunOptions opts = cfg.run_options();
  opts.nonlinear = nonlinear;
  opts.out_dir = common.out_dir;

  const PerturbationState initial =
      make_initial_data(grid, cfg.initial_recipe(), common.seed);
  const RunResult res = run(initial, params, opts);
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
  std::cout << (nonlinear ? "nonlinear" : "linear") << " run: " << res.steps
            << " steps to t = " << res.final_time << ", "
            << res.records.size() << " battery rows -> " << common.out_dir
            << "\n";
  return 0;
}

int cmd_report(const CommonOpts& common) {
  apply_threads(common);
  if (common.out_dir.empty()) {
    fail(ErrorKind::Usage, "report requires --out DIR (location of norms.csv)");
  }
  const LabConfig cfg = load_config(common.config_path, common.sets);
  const std::vector<NormRecord> records =
      read_norm_csv(common.out_dir + "/norms.csv");
  if (records.empty()) {
    fail(ErrorKind::InsufficientData, "norm table has no rows");
  }
  const Grid grid = cfg.make_grid();
  const DerivedConstants con = derive_constants(cfg.model_params());
  const double t_wrap = fidelity_wrap_time(cfg.initial_recipe(), grid, con.gamma);
  const FitWindow window =
      resolve_fit_window(records.back().t, t_wrap, cfg.t0, cfg.t1);
  const DecayReport rep =
      make_decay_report(records, cfg.p, window, cfg.slack, cfg.slack_linf);
  write_json(common.out_dir + "/report.json", decay_report_json(rep, records));
  std::cout << "fit window: [" << window.t0 << ", " << window.t1 << "]\n";
  print_claims(rep);
  std::cout << (rep.all_pass ? "all claims pass" : "some claims FAIL") << "\n";
  return rep.all_pass ? 0 : 1;
}

int cmd_verify_rates(const CommonOpts& common) {
  apply_threads(common);
  const std::vector<double> times = {0.1, 1.0, 10.0, 100.0, 1000.0};
  json checks = json::array();
  bool all_pass = true;
  for (double r1 : {1.25, 1.5, 2.0, 3.0}) {
    for (double r2 : {0.0, r1 / 2.0, r1}) {
      const auto results = verify_convolution_bound(r1, r2, times);
      double worst = 0.0;
      bool pass = true;
      for (const auto& c : results) {
        worst = std::max(worst, c.ratio);
        pass = pass && c.pass;
        checks.push_back(json{{"r1", c.r1},
                              {"r2", c.r2},
                              {"t", c.t},
                              {"integral", c.integral},
                              {"bound", c.bound},
                              {"ratio", c.ratio},
                              {"pass", c.pass}});
      }
      all_pass = all_pass && pass;
      std::cout << "convolution bound r1 = " << r1 << " r2 = " << r2
                << ": worst ratio = " << worst << " -> "
                << (pass ? "PASS" : "FAIL") << "\n";
    }
  }
  if (!common.out_dir.empty()) {
    std::filesystem::create_directories(common.out_dir);
    write_json(common.out_dir + "/report.json",
               json{{"schema", 1},
                    {"kind", "convolution-report"},
                    {"checks", checks},
                    {"all_pass", all_pass}});
  }
  std::cout << (all_pass ? "all checks pass" : "some checks FAIL") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_verify_constants(const CommonOpts& common) {
  apply_threads(common);
  const LabConfig cfg = load_config(common.config_path, common.sets);
  json checks = json::array();
  bool all_pass = true;
  auto check = [&](const std::string& name, double value, double expected,
                   double tol) {
    const bool pass = std::abs(value - expected) <= tol;
    all_pass = all_pass && pass;
    checks.push_back(json{{"name", name},
                          {"value", value},
                          {"expected", expected},
                          {"pass", pass}});
    std::cout << name << ": value = " << value << " expected = " << expected
              << " -> " << (pass ? "PASS" : "FAIL") << "\n";
  };

  check("decay-rate p=1 q=2 l=0", sigma(1.0, 2.0, 0), 0.75, 0.0);
  check("decay-rate p=1 q=inf l=0",
        sigma(1.0, std::numeric_limits<double>::infinity(), 0), 1.5, 0.0);
  check("decay-rate p=6/5 q=2 l=1", sigma(1.2, 2.0, 1), 1.0, 1e-15);
  check("convolution constant r1=2 r2=1", c1_bound(2.0, 1.0), 4.0, 0.0);
  check("convolution constant r1=3 r2=0", c1_bound(3.0, 0.0), 1.0, 0.0);
  check("iteration cap n=2 p=1", iteration_cap(2, 1.0).value, 3.0, 0.0);
  check("iteration cap n=1 p=1", iteration_cap(1, 1.0).value, 0.0, 0.0);
  check("iteration cap n=4 p~6/5", iteration_cap(4, 1.2 - 1e-9).value, 6.0, 0.0);

  const ModelParams params = cfg.model_params();
  const DerivedConstants con = derive_constants(params);
  check("sound speed identity gamma^2 - p'(rho_bar) - k_bar",
        con.gamma * con.gamma -
            params.pressure.dp(params.rho_bar) - params.k_bar,
        0.0, 1e-14);
  check("lambda rho_bar", con.lambda * params.rho_bar, 1.0, 1e-15);

  // Norm equivalence of the energy functional on sampled smooth states.
  {
    const Grid grid = Grid::make(16, 20.0);
    InitialDataRecipe recipe;
    recipe.kind = InitialDataRecipe::Kind::RandomSmooth;
    recipe.amplitude = 1e-3;
    recipe.delta = 1e-3;
    std::vector<PerturbationState> states;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      states.push_back(make_initial_data(grid, recipe, s));
    }
    const double c2 = check_equivalence(states, cfg.c1_weight);
    const double bound = cfg.c1_weight + 1.0;
    const bool pass = c2 >= 1.0 && c2 <= bound;
    all_pass = all_pass && pass;
    checks.push_back(json{{"name", "equivalence constant"},
                          {"value", c2},
                          {"bound", bound},
                          {"pass", pass}});
    std::cout << "equivalence constant: C2 = " << c2 << " <= " << bound
              << " -> " << (pass ? "PASS" : "FAIL") << "\n";
  }

  if (!common.out_dir.empty()) {
    std::filesystem::create_directories(common.out_dir);
    write_json(common.out_dir + "/report.json",
               json{{"schema", 1},
                    {"kind", "constants-report"},
                    {"checks", checks},
                    {"all_pass", all_pass}});
  }
  std::cout << (all_pass ? "all checks pass" : "some checks FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"turbulent decay laboratory"};
  app.require_subcommand(1);

  CommonOpts common;
  double p = 1.0;
  std::string q_text = "2";
  int l = 0;
  double r1 = 0.0, r2 = 0.0;
  int n_cap = 0;

  CLI::App* rates = app.add_subcommand("rates", "print a decay rate or constant");
  add_common(rates, common);
  rates->add_option("--p", p, "integrability exponent of the initial data");
  rates->add_option("--q", q_text, "target norm order (number or 'inf')");
  rates->add_option("--l", l, "derivative order");
  CLI::Option* opt_r1 = rates->add_option("--r1", r1, "convolution exponent r1");
  CLI::Option* opt_r2 = rates->add_option("--r2", r2, "convolution exponent r2");
  CLI::Option* opt_n = rates->add_option("--n", n_cap, "iteration cap argument");

  CLI::App* run_lin = app.add_subcommand("run-linear", "march the linearized system");
  add_common(run_lin, common);
  CLI::App* run_nonlin =
      app.add_subcommand("run-nonlinear", "march the full perturbation system");
  add_common(run_nonlin, common);
  CLI::App* report = app.add_subcommand("report", "fit decay rates from norms.csv");
  add_common(report, common);
  CLI::App* ver_rates =
      app.add_subcommand("verify-rates", "check the convolution inequality");
  add_common(ver_rates, common);
  CLI::App* ver_consts =
      app.add_subcommand("verify-constants", "check closed-form constants");
  add_common(ver_consts, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << json{{"kind", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (rates->parsed()) {
      const bool has_r = opt_r1->count() > 0 || opt_r2->count() > 0;
      if (has_r && (opt_r1->count() == 0 || opt_r2->count() == 0)) {
        fail(ErrorKind::Usage, "rates: --r1 and --r2 must be given together");
      }
      return cmd_rates(common, p, q_text, l, has_r, r1, r2, opt_n->count() > 0,
                       n_cap);
    }
    if (run_lin->parsed()) return cmd_run(common, false);
    if (run_nonlin->parsed()) return cmd_run(common, true);
    if (report->parsed()) return cmd_report(common);
    if (ver_rates->parsed()) return cmd_verify_rates(common);
    if (ver_consts->parsed()) return cmd_verify_constants(common);
    fail(ErrorKind::Usage, "no subcommand selected");
  } catch (const Error& e) {
    std::cerr << json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}}
                     .dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"kind", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace tdk
