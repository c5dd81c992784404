/// @file bindings.cpp
/// @brief Python module `tdk._core`: rate bookkeeping, semigroup evaluation,
///        whole-space decay curves, exponent fitting, and config-driven runs.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tdk/analysis.hpp"
#include "tdk/config.hpp"
#include "tdk/errors.hpp"
#include "tdk/integrator.hpp"
#include "tdk/model.hpp"
#include "tdk/semigroup.hpp"
#include "tdk/state.hpp"

namespace py = pybind11;
using namespace tdk;

namespace {

ModelParams params_from(double rho_bar, double k_bar, double pressure_gamma) {
  ModelParams p;
  p.rho_bar = rho_bar;
  p.k_bar = k_bar;
  p.pressure = PressureLaw::power_law(pressure_gamma);
  return p;
}

py::dict fit_to_dict(const FitResult& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["intercept"] = f.intercept;
  d["residual_rms"] = f.residual_rms;
  d["samples"] = f.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Numerical laboratory for decay of small perturbations of a "
      "compressible turbulent-flow model: closed-form rates, semigroup "
      "evaluators, and config-driven spectral runs.";

  py::register_exception<Error>(m, "LabError");

  m.def("sigma", &sigma, py::arg("p"), py::arg("q"), py::arg("l"),
        "Whole-space decay exponent (3/2)(1/p - 1/q) + l/2; q may be inf.");
  m.def("c1_bound", &c1_bound, py::arg("r1"), py::arg("r2"),
        "Sharp constant 2^(r2+1)/(r1-1) of the time-convolution bound.");
  m.def(
      "iteration_cap",
      [](int n, double p) {
        const IterationCap c = iteration_cap(n, p);
        return py::make_tuple(c.value, c.usable);
      },
      py::arg("n"), py::arg("p"),
      "Decay-bootstrap step count as (value, usable).");

  m.def(
      "derive_constants",
      [](double rho_bar, double k_bar, double pressure_gamma) {
        const ModelParams p = params_from(rho_bar, k_bar, pressure_gamma);
        const DerivedConstants c = derive_constants(p);
        py::dict d;
        d["gamma"] = c.gamma;
        d["lambda"] = c.lambda;
        return d;
      },
      py::arg("rho_bar"), py::arg("k_bar"), py::arg("pressure_gamma") = 1.4,
      "Acoustic coupling gamma and diffusivity lambda of the symmetrized "
      "linear system.");

  m.def(
      "acoustic_mode_entries",
      [](double xi_abs, double t, double rho_bar, double k_bar,
         double pressure_gamma) {
        const ModelParams p = params_from(rho_bar, k_bar, pressure_gamma);
        const auto e = acoustic_mode_entries(xi_abs, t, derive_constants(p));
        return std::vector<double>(e.begin(), e.end());
      },
      py::arg("xi_abs"), py::arg("t"), py::arg("rho_bar") = 0.5,
      py::arg("k_bar") = 0.1, py::arg("pressure_gamma") = 1.4,
      "Row-major entries of the 2x2 density/longitudinal-velocity mode "
      "propagator exp(t M(|xi|)).");

  m.def(
      "gaussian_heat_norms",
      [](double amplitude, double s, const std::vector<double>& times, int l,
         double rho_bar, double k_bar, double pressure_gamma) {
        const ModelParams p = params_from(rho_bar, k_bar, pressure_gamma);
        const DerivedConstants con = derive_constants(p);
        const RadialProfile prof = gaussian_radial_profile(amplitude, s);
        std::vector<double> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(radial_l2_norm(prof, t, l, con));
        return out;
      },
      py::arg("amplitude"), py::arg("s"), py::arg("times"), py::arg("l") = 0,
      py::arg("rho_bar") = 1.0, py::arg("k_bar") = 1.0,
      py::arg("pressure_gamma") = 1.4,
      "L2 norms of grad^l exp(lambda t Laplacian) applied to the whole-space "
      "Gaussian amplitude*exp(-|x|^2/(4 s)).");

  m.def(
      "gaussian_acoustic_norms",
      [](double amp_a, double s_a, double amp_w, double s_w,
         const std::vector<double>& times, int l, double rho_bar, double k_bar,
         double pressure_gamma) {
        const ModelParams p = params_from(rho_bar, k_bar, pressure_gamma);
        const DerivedConstants con = derive_constants(p);
        const RadialProfile pa = gaussian_radial_profile(amp_a, s_a);
        const RadialProfile pw = gaussian_radial_profile(amp_w, s_w);
        std::vector<double> out;
        out.reserve(times.size());
        for (double t : times) {
          out.push_back(radial_acoustic_l2_norm(pa, pw, t, l, con));
        }
        return out;
      },
      py::arg("amp_a"), py::arg("s_a"), py::arg("amp_w"), py::arg("s_w"),
      py::arg("times"), py::arg("l") = 0, py::arg("rho_bar") = 1.0,
      py::arg("k_bar") = 1.0, py::arg("pressure_gamma") = 1.4,
      "Joint L2 norms of the whole-space acoustic-viscous flow from Gaussian "
      "density and longitudinal-velocity profiles.");

  m.def(
      "fit_exponent",
      [](const std::vector<double>& t, const std::vector<double>& value,
         double t0, double t1) {
        return fit_to_dict(fit_exponent(t, value, t0, t1));
      },
      py::arg("t"), py::arg("value"), py::arg("t0"), py::arg("t1"),
      "Least-squares exponent of value ~ (1+t)^exponent over [t0, t1].");

  m.def(
      "verify_convolution_bound",
      [](double r1, double r2, const std::vector<double>& times) {
        py::list out;
        for (const ConvolutionCheck& c :
             verify_convolution_bound(r1, r2, times)) {
          py::dict d;
          d["r1"] = c.r1;
          d["r2"] = c.r2;
          d["t"] = c.t;
          d["integral"] = c.integral;
          d["bound"] = c.bound;
          d["ratio"] = c.ratio;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("r1"), py::arg("r2"), py::arg("times"),
      "Quadrature check of the time-convolution inequality.");

  m.def(
      "run_lab",
      [](const std::string& config_text,
         const std::vector<std::string>& overrides, std::uint64_t seed,
         bool nonlinear) {
        const LabConfig cfg = parse_config_text(config_text, overrides);
        const Grid grid = cfg.make_grid();
        const ModelParams params = cfg.model_params();
        const PerturbationState w0 =
            make_initial_data(grid, cfg.initial_recipe(), seed);
        RunOptions opts = cfg.run_options();
        opts.nonlinear = nonlinear;
        RunResult res;
        {
          py::gil_scoped_release release;
          res = run(w0, params, opts);
        }
        py::dict d;
        const std::size_t nrec = res.records.size();
        std::vector<double> t, l2, l3, l6, linf, h2grad, dtl2, energy, mass;
        for (const NormRecord& r : res.records) {
          t.push_back(r.t);
          l2.push_back(r.l2);
          l3.push_back(r.l3);
          l6.push_back(r.l6);
          linf.push_back(r.linf);
          h2grad.push_back(r.h2grad);
          dtl2.push_back(r.dtl2);
          energy.push_back(r.energy);
          mass.push_back(r.mass);
        }
        (void)nrec;
        d["t"] = t;
        d["l2"] = l2;
        d["l3"] = l3;
        d["l6"] = l6;
        d["linf"] = linf;
        d["h2grad"] = h2grad;
        d["dtl2"] = dtl2;
        d["M"] = energy;
        d["mass"] = mass;
        d["warnings"] = res.warnings;
        d["steps"] = res.steps;
        d["final_time"] = res.final_time;
        return d;
      },
      py::arg("config_text") = std::string(),
      py::arg("overrides") = std::vector<std::string>(), py::arg("seed") = 1,
      py::arg("nonlinear") = true,
      "March the perturbation system from a config text plus key=value "
      "overrides; returns the norm battery as lists keyed like the CSV "
      "columns, plus warnings, steps, and final_time.");
}
