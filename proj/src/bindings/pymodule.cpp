// Python bindings. Inputs are plain strings and numbers (the same spec
// strings the command-line tool accepts); outputs are dicts and lists of
// doubles, so no extended-precision type crosses the language boundary.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "subdiff/cli.hpp"
#include "subdiff/direct.hpp"
#include "subdiff/hankel.hpp"
#include "subdiff/measure.hpp"
#include "subdiff/scaling.hpp"
#include "subdiff/spade.hpp"
#include "subdiff/submodel.hpp"

namespace py = pybind11;
using namespace subdiff;

namespace {

MeasureSpec object_from_spec(const std::string& family, double delta) {
  if (family.rfind("csv:", 0) == 0)
    return load_atoms_csv(family.substr(4), "p0_csv");
  return builtin_p0(family, Real(delta));
}

std::vector<double> to_doubles(const std::vector<Real>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(to_double(x));
  return out;
}

EvaluatorKind evaluator_from_name(const std::string& name) {
  if (name == "bound") return EvaluatorKind::QuantumBoundLower;
  if (name == "gram") return EvaluatorKind::QuantumGram;
  if (name == "spade-even") return EvaluatorKind::SpadeVarianceEven;
  if (name == "spade-odd") return EvaluatorKind::SpadeVarianceOdd;
  if (name == "fisher") return EvaluatorKind::DirectFisher;
  if (name == "crb") return EvaluatorKind::DirectCrb;
  throw ConfigError(
      "evaluator: expected bound|gram|spade-even|spade-odd|fisher|crb, got '" +
      name + "'");
}

py::dict domination_dict(const DominationReport& rep) {
  py::dict d;
  d["pass"] = rep.pass;
  d["underline_ok"] = rep.underline_ok;
  d["envelope_ok"] = rep.envelope_ok;
  d["integrals_finite"] = rep.integrals_finite;
  d["integral_score"] = rep.integral_score;
  d["integral_envelope"] = rep.integral_envelope;
  d["delta0"] = rep.delta0;
  d["mu"] = rep.mu;
  d["note"] = rep.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "quantum and classical precision limits for moment estimation of "
      "subdiffraction incoherent objects";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError",
                                       PyExc_ArithmeticError);
  py::register_exception<CheckError>(m, "CheckError", PyExc_RuntimeError);

  m.def("precision_bits", &precision_bits,
        "default mantissa width, in bits, of the extended-precision scalars");
  m.def(
      "set_precision_bits",
      [](unsigned bits) {
        if (bits < kMinPrecisionBits)
          throw ConfigError("precision must be at least " +
                            std::to_string(kMinPrecisionBits) + " bits");
        set_precision_bits(bits);
      },
      py::arg("bits"));

  m.def("builtin_families", &builtin_families,
        "names of the built-in object-measure families");

  m.def(
      "moments",
      [](const std::string& p0, double delta, int order) {
        return to_doubles(moments_up_to(object_from_spec(p0, delta), order));
      },
      py::arg("p0"), py::arg("delta"), py::arg("order"),
      "raw moments 0..order of the object measure (built-in family name or "
      "csv:<path>)");

  m.def(
      "quantum_bound",
      [](const std::string& p0, double delta, int mu, const std::string& q,
         double n_photons, double tilt_c, int cap) {
        const MeasureSpec p = object_from_spec(p0, delta);
        const TiltedSubmodel sub = make_submodel(p, mu, Real(tilt_c), cap);
        const QuantumBoundReport rep = quantum_bound(
            sub, MomentFunctional::power(mu), measure_from_spec(q), n_photons);
        py::dict d;
        d["mu"] = mu;
        d["delta"] = delta;
        d["dot_beta"] = to_double(rep.dot_beta);
        d["gram"] = to_double(rep.score.gram);
        d["overlap"] = to_double(rep.score.overlap);
        d["truncation_order"] = rep.score.truncation_order;
        d["tail_estimate"] = to_double(rep.score.tail_estimate);
        d["score_norm_sq_upper"] = to_double(rep.score.score_norm_sq_upper);
        d["n_photons"] = rep.n_photons;
        d["bound_lower"] = to_double(rep.bound_lower);
        d["bound_fs"] = to_double(rep.bound_fs);
        return d;
      },
      py::arg("p0"), py::arg("delta"), py::arg("mu"),
      py::arg("q") = "gaussian", py::arg("n_photons") = 1e5,
      py::arg("tilt_c") = 1.0, py::arg("cap") = kDefaultTruncationCap,
      "lower bound on the variance of any unbiased estimator of the mu-th "
      "generalized moment");

  m.def(
      "lambda_min_profile",
      [](const std::string& family, int order) {
        const EigenDecayFit fit = lambda_min_profile(builtin_r0(family), order);
        py::dict d;
        d["orders"] = fit.orders;
        d["lambda_min"] = to_doubles(fit.lambda_min);
        d["rate_r"] = fit.rate_r;
        d["prefactor"] = fit.prefactor;
        d["r_squared"] = fit.r_squared;
        return d;
      },
      py::arg("family"), py::arg("order"),
      "smallest-eigenvalue decay of the standardized moment matrices");

  m.def(
      "spade_constants",
      [](const std::string& q, int n_max) {
        const SpadeModel model = build_spade(measure_from_spec(q), n_max);
        py::dict d;
        d["r"] = to_doubles(model.r);
        d["s"] = to_doubles(model.s);
        d["closed_form_gaussian"] = model.closed_form_gaussian;
        d["series_terms"] = model.series_terms;
        return d;
      },
      py::arg("q") = "gaussian", py::arg("n_max") = 4,
      "mode-to-moment conversion constants r_n and s_n of the demultiplexer");

  m.def(
      "mode_probabilities",
      [](const std::string& p0, double delta, const std::string& q,
         int n_max) {
        const SpadeModel model = build_spade(measure_from_spec(q), n_max);
        const ModeProbabilities probs =
            mode_probabilities(model, object_from_spec(p0, delta));
        py::dict d;
        d["pad"] = to_doubles(probs.pad);
        d["ipad_plus"] = to_doubles(probs.ipad_plus);
        d["ipad_minus"] = to_doubles(probs.ipad_minus);
        return d;
      },
      py::arg("p0"), py::arg("delta"), py::arg("q") = "gaussian",
      py::arg("n_max") = 4,
      "per-photon mode-detection probabilities for the object measure");

  m.def(
      "generalized_moments",
      [](const std::string& p0, double delta, const std::string& q,
         int n_max) {
        const SpadeModel model = build_spade(measure_from_spec(q), n_max);
        return to_doubles(
            generalized_moments(model, object_from_spec(p0, delta)));
      },
      py::arg("p0"), py::arg("delta"), py::arg("q") = "gaussian",
      py::arg("n_max") = 4,
      "generalized moments beta_k, k = 0..2*n_max, of the object measure");

  m.def(
      "simulate_spade",
      [](const std::string& p0, double delta, uint64_t m_modes, double epsilon,
         uint64_t seed, const std::string& mode, int order,
         const std::string& q, uint64_t stream) {
        if (order < 0) throw ConfigError("mode order must be nonnegative");
        SpadeModeKind kind = SpadeModeKind::EvenPad;
        std::vector<int> modes;
        if (mode == "even") {
          kind = SpadeModeKind::EvenPad;
          for (int n = 0; n <= order; ++n) modes.push_back(n);
        } else if (mode == "odd") {
          kind = SpadeModeKind::OddIpad;
          modes.push_back(order);
        } else {
          throw ConfigError("mode: expected 'even' or 'odd', got '" + mode +
                            "'");
        }
        const MeasureSpec p = object_from_spec(p0, delta);
        const SpadeModel model = build_spade(measure_from_spec(q), order + 1);
        const CountRecord rec = simulate_counts(model, p, m_modes, epsilon,
                                                seed, kind, modes, stream);
        const EstimateReport est = estimate(rec, model, &p);
        py::dict d;
        d["mode"] = mode;
        d["m_modes"] = rec.m_modes;
        d["epsilon"] = rec.epsilon;
        d["n_photons"] = est.n_photons;
        d["seed"] = rec.seed;
        d["stream"] = rec.stream;
        d["other_count"] = rec.other_count;
        if (kind == SpadeModeKind::EvenPad) {
          d["pad_modes"] = rec.pad_modes;
          d["pad_counts"] = rec.pad_counts;
        } else {
          d["ipad_index"] = rec.ipad_index;
          d["count_plus"] = rec.count_plus;
          d["count_minus"] = rec.count_minus;
        }
        py::list entries;
        for (const EstimateEntry& e : est.entries) {
          py::dict entry;
          entry["order"] = e.order;
          entry["estimate"] = e.estimate;
          entry["analytic_variance"] = e.analytic_variance;
          entries.append(entry);
        }
        d["entries"] = entries;
        return d;
      },
      py::arg("p0"), py::arg("delta"), py::arg("m_modes"), py::arg("epsilon"),
      py::arg("seed"), py::arg("mode") = "even", py::arg("order") = 0,
      py::arg("q") = "gaussian", py::arg("stream") = 0,
      "one simulated photon-counting run with unbiased moment estimates; "
      "deterministic in (seed, stream)");

  m.def(
      "check_domination",
      [](const std::string& psf, double delta0, int mu) {
        return domination_dict(
            check_domination(psf_from_spec(psf), delta0, mu));
      },
      py::arg("psf"), py::arg("delta0"), py::arg("mu"),
      "verify the dominating-pair hypotheses of the direct-imaging model");

  m.def(
      "direct_fisher",
      [](const std::string& psf, const std::string& p0, double delta, int mu,
         double n_photons, bool allow_experimental) {
        const MeasureSpec p = object_from_spec(p0, delta);
        const TiltedSubmodel sub = make_submodel(p, mu);
        const FisherReport rep = submodel_fisher(psf_from_spec(psf), sub,
                                                 n_photons, allow_experimental);
        py::dict d;
        d["fisher"] = rep.fisher;
        d["dot_beta"] = rep.dot_beta;
        d["n_photons"] = rep.n_photons;
        d["crb"] = rep.crb;
        d["truncation_xi"] = rep.truncation_xi;
        d["tail_bound"] = rep.tail_bound;
        d["quad_error"] = rep.quad_error;
        d["experimental"] = rep.experimental;
        d["note"] = rep.note;
        return d;
      },
      py::arg("psf"), py::arg("p0"), py::arg("delta"), py::arg("mu"),
      py::arg("n_photons") = 1.0, py::arg("allow_experimental") = false,
      "Fisher information and Cramer-Rao bound of direct imaging for the "
      "moment submodel");

  m.def(
      "theoretical_exponent",
      [](const std::string& evaluator, int order) {
        return theoretical_exponent(evaluator_from_name(evaluator), order);
      },
      py::arg("evaluator"), py::arg("order"),
      "predicted small-delta exponent of the evaluator");

  m.def(
      "sweep_fit",
      [](const std::string& evaluator, const std::string& p0, int order,
         std::vector<double> grid, const std::string& q,
         const std::string& psf, double n_photons, double epsilon,
         double tolerance) {
        SweepConfig sc;
        sc.r0 = standardize(object_from_spec(p0, 1.0)).base;
        if (!grid.empty()) sc.grid = std::move(grid);
        sc.kind = evaluator_from_name(evaluator);
        sc.order = order;
        sc.n_photons = n_photons;
        sc.epsilon = epsilon;
        sc.q = measure_from_spec(q);
        sc.psf = psf_from_spec(psf);
        ScalingFit fit = fit_loglog(sweep(sc));
        compare_exponent(fit, theoretical_exponent(sc.kind, order), tolerance);
        py::list pts;
        for (const SweepPoint& pt : fit.points)
          pts.append(py::make_tuple(pt.delta, pt.value));
        py::dict d;
        d["evaluator"] = evaluator;
        d["order"] = order;
        d["points"] = pts;
        d["slope"] = fit.slope;
        d["intercept"] = fit.intercept;
        d["r_squared"] = fit.r_squared;
        d["theory"] = fit.theory;
        d["tolerance"] = fit.tolerance;
        d["pass"] = fit.pass;
        return d;
      },
      py::arg("evaluator"), py::arg("p0") = "uniform", py::arg("order") = 1,
      py::arg("grid") = std::vector<double>{}, py::arg("q") = "gaussian",
      py::arg("psf") = "gaussian", py::arg("n_photons") = 1e5,
      py::arg("epsilon") = 0.01, py::arg("tolerance") = 0.15,
      "sweep the object size delta, fit log(value) against log(delta), and "
      "compare the slope with the predicted exponent");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) { return run_cli(args); },
      py::arg("args"),
      "run the command-line tool in-process; returns its exit code");
}
