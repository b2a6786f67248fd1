#include "subdiff/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "subdiff/direct.hpp"
#include "subdiff/io.hpp"
#include "subdiff/measure.hpp"
#include "subdiff/scaling.hpp"
#include "subdiff/spade.hpp"
#include "subdiff/submodel.hpp"

namespace subdiff {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_positive(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v > 0)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a positive number, got '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
}

// ------------------------------------------------------------ shared options

struct CommonOpts {
  std::string p0 = "uniform";       // family name or csv:<path>
  double delta = 0.05;
  std::string q = "gaussian";       // gaussian | <family>:<half_width>
  double n_photons = 1e5;
  int precision_bits = 0;           // 0 = resolve from env or default
  std::string out_dir = "out";
  std::string sweep;                // lo:hi:points
  bool json_only = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool with_sweep = true) {
  cmd->add_option("--p0", opts->p0,
                  "object measure: uniform|two_atom|quadratic|trunc_gaussian "
                  "or csv:<path> with atom rows")
      ->capture_default_str();
  cmd->add_option("--delta", opts->delta, "object half-width")
      ->capture_default_str();
  cmd->add_option("--q", opts->q,
                  "frequency measure: gaussian or <family>:<half_width>")
      ->capture_default_str();
  cmd->add_option("--n", opts->n_photons, "expected photon number N")
      ->capture_default_str();
  cmd->add_option("--precision-bits", opts->precision_bits,
                  "working precision in bits (>= 64); default from " +
                      std::string(kPrecisionEnvVar) + " or 256");
  cmd->add_option("--out", opts->out_dir, "output directory")
      ->capture_default_str();
  if (with_sweep)
    cmd->add_option("--sweep", opts->sweep,
                    "delta sweep as lo:hi:points (geometric grid)");
  cmd->add_flag("--json", opts->json_only, "emit JSON reports only (no CSV)");
}

int resolve_precision(int flag_bits) {
  int bits = flag_bits;
  if (bits == 0) {
    if (const char* env = std::getenv(kPrecisionEnvVar)) {
      bits = parse_int(env, std::string(kPrecisionEnvVar));
    } else {
      bits = static_cast<int>(kDefaultPrecisionBits);
    }
  }
  if (bits < static_cast<int>(kMinPrecisionBits))
    throw ConfigError("precision must be at least " +
                      std::to_string(kMinPrecisionBits) + " bits, got " +
                      std::to_string(bits));
  set_precision_bits(static_cast<unsigned>(bits));
  return bits;
}

MeasureSpec make_p0(const CommonOpts& opts) {
  if (opts.p0.rfind("csv:", 0) == 0)
    return load_atoms_csv(opts.p0.substr(4), "p0_csv");
  if (!(opts.delta > 0)) throw ConfigError("--delta must be positive");
  return builtin_p0(opts.p0, Real(opts.delta));
}

}  // namespace

MeasureSpec measure_from_spec(const std::string& spec) {
  if (spec == "gaussian") return MeasureSpec::gaussian_frequency();
  const auto parts = split(spec, ':');
  if (parts.size() == 2) {
    const double hw = parse_positive(parts[1], "--q half-width");
    return rescale(builtin_r0(parts[0]), Real(hw));
  }
  throw ConfigError("--q: expected gaussian or <family>:<half_width>, got '" +
                    spec + "'");
}

PsfModel psf_from_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  if (name == "gaussian") {
    if (parts.size() == 1) return PsfModel::gaussian();
    if (parts.size() == 2)
      return PsfModel::gaussian(parse_positive(parts[1], "--psf sigma"));
  } else if (name == "supergauss" && parts.size() == 3) {
    return PsfModel::super_gaussian(parse_positive(parts[1], "--psf d2"),
                                    parse_int(parts[2], "--psf p"));
  } else if (name == "lorentz" && parts.size() == 3) {
    return PsfModel::generalized_lorentzian(
        parse_positive(parts[1], "--psf d2"), parse_int(parts[2], "--psf p"));
  } else if (name == "sinc2" && parts.size() == 1) {
    return PsfModel::hard_aperture();
  }
  throw ConfigError(
      "--psf: expected gaussian[:sigma] | supergauss:<d2>:<p> | "
      "lorentz:<d2>:<p> | sinc2, got '" + spec + "'");
}

namespace {

std::vector<double> parse_sweep(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw ConfigError("--sweep: expected lo:hi:points, got '" + spec + "'");
  const double lo = parse_positive(parts[0], "--sweep lo");
  const double hi = parse_positive(parts[1], "--sweep hi");
  const int k = parse_int(parts[2], "--sweep points");
  if (k < 3) throw ConfigError("--sweep: need at least 3 points for a fit");
  return geometric_grid(lo, hi, k);
}

std::pair<SpadeModeKind, int> parse_mode(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 2) {
    const int n = parse_int(parts[1], "--mode order");
    if (n < 0) throw ConfigError("--mode order must be nonnegative");
    if (parts[0] == "even") return {SpadeModeKind::EvenPad, n};
    if (parts[0] == "odd") return {SpadeModeKind::OddIpad, n};
  }
  throw ConfigError("--mode: expected even:<n> or odd:<n>, got '" + spec + "'");
}

double default_tolerance(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::QuantumBoundLower:
    case EvaluatorKind::QuantumGram:
      return 0.15;
    case EvaluatorKind::SpadeVarianceEven:
    case EvaluatorKind::SpadeVarianceOdd:
      return 0.1;
    case EvaluatorKind::DirectFisher:
    case EvaluatorKind::DirectCrb:
      return 0.2;
    case EvaluatorKind::Custom:
      return 0.2;
  }
  return 0.2;
}

json fit_to_json(const ScalingFit& fit, EvaluatorKind kind, int order) {
  json points = json::array();
  for (const auto& p : fit.points)
    points.push_back({{"delta", p.delta}, {"value", p.value}});
  return json{{"evaluator", evaluator_name(kind)},
              {"order", order},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"theory", fit.theory},
              {"tolerance", fit.tolerance},
              {"pass", fit.pass},
              {"points", points}};
}

// ---------------------------------------------------------------- manifest

class Manifest {
 public:
  Manifest(std::string command, std::string out_dir)
      : command_(std::move(command)),
        out_dir_(std::move(out_dir)),
        start_(Clock::now()) {
    ensure_directory(out_dir_);
  }

  std::string path(const std::string& filename) const {
    return out_dir_ + "/" + filename;
  }

  void add_output(const std::string& filename) {
    const std::string full = path(filename);
    const std::string content = read_text_file(full);
    outputs_.push_back({{"path", filename},
                        {"bytes", content.size()},
                        {"fnv1a64", hash_hex(fnv1a64(content))}});
  }

  void write_json(const std::string& filename, const json& j) {
    write_text_file(path(filename), j.dump(2) + "\n");
    add_output(filename);
  }

  void write_csv(const std::string& filename, const CsvBuilder& csv) {
    csv.write(path(filename));
    add_output(filename);
  }

  void finalize(const json& config, int precision_bits) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        Clock::now() - start_);
    json j{{"tool_version", kToolVersion},
           {"command", command_},
           {"config", config},
           {"outputs", outputs_},
           {"timing_ms", elapsed.count()},
           {"precision_bits", precision_bits}};
    write_text_file(path("manifest.json"), j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string out_dir_;
  Clock::time_point start_;
  json outputs_ = json::array();
};

int finish(Manifest& manifest, const json& config, int precision_bits,
           const std::vector<std::string>& failed_checks) {
  manifest.finalize(config, precision_bits);
  if (!failed_checks.empty()) {
    for (const auto& f : failed_checks)
      std::cerr << "check failed: " << f << "\n";
    return kExitCheck;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- bound

struct BoundOpts {
  CommonOpts common;
  int mu = 1;
  double tilt_c = 1.0;
  int cap = kDefaultTruncationCap;
};

int cmd_bound(const BoundOpts& opts) {
  const int bits = resolve_precision(opts.common.precision_bits);
  Manifest manifest("bound", opts.common.out_dir);
  std::vector<std::string> failed;

  if (opts.mu < 1)
    throw ConfigError("--mu must be at least 1: a generalized moment has "
                      "positive order");
  const MeasureSpec p0 = make_p0(opts.common);
  const MeasureSpec q = measure_from_spec(opts.common.q);
  const TiltedSubmodel sub =
      make_submodel(p0, opts.mu, Real(opts.tilt_c), opts.cap);
  const QuantumBoundReport rep = quantum_bound(
      sub, MomentFunctional::power(opts.mu), q, opts.common.n_photons);

  json config{{"command", "bound"},        {"p0", opts.common.p0},
              {"delta", opts.common.delta}, {"q", opts.common.q},
              {"mu", opts.mu},             {"n", opts.common.n_photons},
              {"tilt_c", opts.tilt_c},     {"truncation_cap", opts.cap},
              {"sweep", opts.common.sweep}, {"out", opts.common.out_dir}};
  json report{{"mu", opts.mu},
              {"delta", to_double(sub.standard.delta)},
              {"n_photons", rep.n_photons},
              {"dot_beta", to_double(rep.dot_beta)},
              {"gram", to_double(rep.score.gram)},
              {"overlap", to_double(rep.score.overlap)},
              {"truncation_order", rep.score.truncation_order},
              {"tail_estimate", to_double(rep.score.tail_estimate)},
              {"score_norm_sq_upper", to_double(rep.score.score_norm_sq_upper)},
              {"score_norm_sq_fs", to_double(rep.score.score_norm_sq_fs)},
              {"bound_lower", to_double(rep.bound_lower)},
              {"bound_fs", to_double(rep.bound_fs)},
              {"order_capped", sub.order_capped},
              {"precision_bits", bits}};
  manifest.write_json("bound.json", report);

  if (!opts.common.sweep.empty()) {
    SweepConfig sc;
    sc.r0 = standardize(p0).base;
    sc.grid = parse_sweep(opts.common.sweep);
    sc.kind = EvaluatorKind::QuantumBoundLower;
    sc.order = opts.mu;
    sc.n_photons = opts.common.n_photons;
    sc.q = q;
    const auto points = sweep(sc);
    if (!opts.common.json_only) {
      CsvBuilder csv({"delta", "value"});
      for (const auto& p : points)
        csv.add_row({format_double(p.delta), format_double(p.value)});
      manifest.write_csv("bound_sweep.csv", csv);
    }
    ScalingFit fit = fit_loglog(points);
    compare_exponent(fit, theoretical_exponent(sc.kind, opts.mu),
                     default_tolerance(sc.kind));
    manifest.write_json("bound_fit.json", fit_to_json(fit, sc.kind, opts.mu));
    if (!fit.pass)
      failed.push_back("bound sweep slope " + std::to_string(fit.slope) +
                       " outside " + std::to_string(fit.theory) + " +/- " +
                       std::to_string(fit.tolerance));
  }
  return finish(manifest, config, bits, failed);
}

// ------------------------------------------------------------------- spade

struct SpadeOpts {
  CommonOpts common;
  std::string mode = "even:1";
  double m_modes = 1e7;
  double epsilon = 0.01;
  int replicates = 100;
  uint64_t seed = 0;
  bool n_given = false;
};

int cmd_spade(const SpadeOpts& opts) {
  const int bits = resolve_precision(opts.common.precision_bits);
  Manifest manifest("spade", opts.common.out_dir);
  std::vector<std::string> failed;

  if (!(opts.m_modes >= 1) || opts.m_modes != std::floor(opts.m_modes) ||
      opts.m_modes > 9e15)
    throw ConfigError("--m must be a positive integer (at most 9e15)");
  if (!(opts.epsilon > 0) || !(opts.epsilon < 1))
    throw ConfigError("--eps must lie in (0, 1)");
  if (opts.replicates < 1) throw ConfigError("--replicates must be positive");
  const double n_photons = opts.m_modes * opts.epsilon;
  if (opts.n_given) {
    const double given = opts.common.n_photons;
    if (std::abs(given - n_photons) >
        1e-12 * std::max({1.0, std::abs(given), n_photons}))
      throw ConfigError("inconsistent photon budget: N must equal M * eps "
                        "(got N=" + format_double(given) + ", M*eps=" +
                        format_double(n_photons) + ")");
  }

  const auto [kind, order] = parse_mode(opts.mode);
  const MeasureSpec p0 = make_p0(opts.common);
  const MeasureSpec q = measure_from_spec(opts.common.q);
  const SpadeModel model = build_spade(q, order + 1);
  std::vector<int> pad_modes;
  if (kind == SpadeModeKind::EvenPad)
    for (int n = 0; n <= order; ++n) pad_modes.push_back(n);

  const auto m_modes = static_cast<uint64_t>(opts.m_modes);
  std::vector<EstimateReport> reports;
  reports.reserve(opts.replicates);
  CsvBuilder csv({"replicate", "order", "estimate", "analytic_variance"});
  for (int rep = 0; rep < opts.replicates; ++rep) {
    const CountRecord counts =
        simulate_counts(model, p0, m_modes, opts.epsilon, opts.seed, kind,
                        kind == SpadeModeKind::EvenPad
                            ? pad_modes
                            : std::vector<int>{order},
                        static_cast<uint64_t>(rep));
    reports.push_back(estimate(counts, model, &p0));
    for (const auto& entry : reports.back().entries)
      csv.add_row({std::to_string(rep), std::to_string(entry.order),
                   format_double(entry.estimate),
                   format_double(entry.analytic_variance)});
  }
  if (!opts.common.json_only) manifest.write_csv("spade_replicates.csv", csv);

  const auto summaries = summarize_replicates(reports, model, p0);
  json entries = json::array();
  for (const auto& s : summaries) {
    entries.push_back({{"order", s.order},
                       {"beta_true", s.beta_true},
                       {"mean_estimate", s.mean_estimate},
                       {"bias_z", s.bias_z},
                       {"analytic_variance", s.analytic_variance},
                       {"empirical_variance", s.empirical_variance},
                       {"variance_ratio", s.variance_ratio},
                       {"replicates", s.replicates}});
    if (std::abs(s.bias_z) >= 4.0)
      failed.push_back("order " + std::to_string(s.order) + " bias z-score " +
                       std::to_string(s.bias_z) + " outside +/- 4");
  }
  json config{{"command", "spade"},      {"p0", opts.common.p0},
              {"delta", opts.common.delta}, {"q", opts.common.q},
              {"mode", opts.mode},       {"m", opts.m_modes},
              {"eps", opts.epsilon},     {"n", n_photons},
              {"replicates", opts.replicates}, {"seed", opts.seed},
              {"out", opts.common.out_dir}};
  json summary{{"entries", entries},
               {"n_photons", n_photons},
               {"seed", opts.seed},
               {"replicates", opts.replicates},
               {"precision_bits", bits}};
  manifest.write_json("spade_summary.json", summary);
  return finish(manifest, config, bits, failed);
}

// ------------------------------------------------------------------- direct

struct DirectOpts {
  CommonOpts common;
  std::string psf = "gaussian";
  int mu = 1;
  bool experimental = false;
};

int cmd_direct(const DirectOpts& opts) {
  const int bits = resolve_precision(opts.common.precision_bits);
  Manifest manifest("direct", opts.common.out_dir);
  std::vector<std::string> failed;

  if (opts.mu < 1) throw ConfigError("--mu must be at least 1");
  const PsfModel psf = psf_from_spec(opts.psf);
  const MeasureSpec p0 = make_p0(opts.common);
  const TiltedSubmodel sub = make_submodel(p0, opts.mu);
  const FisherReport rep =
      submodel_fisher(psf, sub, opts.common.n_photons, opts.experimental);
  const DominationReport dom =
      check_domination(psf, to_double(sub.standard.delta), opts.mu);

  json config{{"command", "direct"},     {"p0", opts.common.p0},
              {"delta", opts.common.delta}, {"psf", opts.psf},
              {"mu", opts.mu},           {"n", opts.common.n_photons},
              {"experimental", opts.experimental},
              {"sweep", opts.common.sweep}, {"out", opts.common.out_dir}};
  json report{{"psf", psf.label()},
              {"d1", psf.d1()},
              {"d2", psf.d2()},
              {"p", psf.p()},
              {"mu", opts.mu},
              {"delta", to_double(sub.standard.delta)},
              {"fisher", rep.fisher},
              {"dot_beta", rep.dot_beta},
              {"n_photons", rep.n_photons},
              {"crb", rep.crb},
              {"truncation_xi", rep.truncation_xi},
              {"tail_bound", rep.tail_bound},
              {"quad_error", rep.quad_error},
              {"experimental", rep.experimental},
              {"note", rep.note},
              {"domination",
               {{"pass", dom.pass},
                {"underline_ok", dom.underline_ok},
                {"envelope_ok", dom.envelope_ok},
                {"integrals_finite", dom.integrals_finite},
                {"integral_score", dom.integral_score},
                {"integral_envelope", dom.integral_envelope},
                {"note", dom.note}}},
              {"precision_bits", bits}};
  manifest.write_json("direct.json", report);

  if (!opts.common.sweep.empty()) {
    SweepConfig sc;
    sc.r0 = standardize(p0).base;
    sc.grid = parse_sweep(opts.common.sweep);
    sc.order = opts.mu;
    sc.n_photons = opts.common.n_photons;
    sc.psf = psf;
    sc.kind = EvaluatorKind::DirectFisher;
    const auto fisher_points = sweep(sc);
    sc.kind = EvaluatorKind::DirectCrb;
    const auto crb_points = sweep(sc);
    if (!opts.common.json_only) {
      CsvBuilder csv({"delta", "fisher", "crb"});
      for (size_t i = 0; i < fisher_points.size(); ++i)
        csv.add_row({format_double(fisher_points[i].delta),
                     format_double(fisher_points[i].value),
                     format_double(crb_points[i].value)});
      manifest.write_csv("direct_sweep.csv", csv);
    }
    ScalingFit fisher_fit = fit_loglog(fisher_points);
    compare_exponent(fisher_fit,
                     theoretical_exponent(EvaluatorKind::DirectFisher, opts.mu),
                     default_tolerance(EvaluatorKind::DirectFisher));
    ScalingFit crb_fit = fit_loglog(crb_points);
    compare_exponent(crb_fit,
                     theoretical_exponent(EvaluatorKind::DirectCrb, opts.mu),
                     default_tolerance(EvaluatorKind::DirectCrb));
    manifest.write_json(
        "direct_fit.json",
        json{{"fisher",
              fit_to_json(fisher_fit, EvaluatorKind::DirectFisher, opts.mu)},
             {"crb", fit_to_json(crb_fit, EvaluatorKind::DirectCrb, opts.mu)}});
    if (!fisher_fit.pass)
      failed.push_back("direct fisher slope " +
                       std::to_string(fisher_fit.slope) + " outside " +
                       std::to_string(fisher_fit.theory) + " +/- " +
                       std::to_string(fisher_fit.tolerance));
    if (!crb_fit.pass)
      failed.push_back("direct crb slope " + std::to_string(crb_fit.slope) +
                       " not flat within " + std::to_string(crb_fit.tolerance));
  }
  return finish(manifest, config, bits, failed);
}

// -------------------------------------------------------------------- demo

struct DemoOpts {
  CommonOpts common;
  int points = 8;
  int mu_max = 4;
};

int cmd_demo(const DemoOpts& opts) {
  const int bits = resolve_precision(opts.common.precision_bits);
  Manifest manifest("demo", opts.common.out_dir);
  std::vector<std::string> failed;

  if (opts.points < 3) throw ConfigError("--points must be at least 3");
  if (opts.mu_max < 1 || opts.mu_max > 6)
    throw ConfigError("--mu-max must lie in 1..6");
  const MeasureSpec r0 = standardize(make_p0(opts.common)).base;
  const std::vector<double> grid = geometric_grid(0.01, 0.1, opts.points);

  json rows = json::array();
  CsvBuilder csv({"mu", "quantum_slope", "spade_slope", "direct_crb_slope",
                  "quantum_theory", "spade_theory", "direct_theory"});
  for (int mu = 1; mu <= opts.mu_max; ++mu) {
    SweepConfig sc;
    sc.r0 = r0;
    sc.grid = grid;
    sc.n_photons = opts.common.n_photons;
    sc.q = measure_from_spec(opts.common.q);

    sc.kind = EvaluatorKind::QuantumBoundLower;
    sc.order = mu;
    ScalingFit quantum_fit = fit_loglog(sweep(sc));
    compare_exponent(quantum_fit, theoretical_exponent(sc.kind, mu),
                     default_tolerance(sc.kind));

    sc.kind = (mu % 2 == 0) ? EvaluatorKind::SpadeVarianceEven
                            : EvaluatorKind::SpadeVarianceOdd;
    sc.order = mu / 2;  // even mode n = mu/2, odd pair n = (mu-1)/2
    ScalingFit spade_fit = fit_loglog(sweep(sc));
    compare_exponent(spade_fit, theoretical_exponent(sc.kind, sc.order),
                     default_tolerance(sc.kind));

    sc.kind = EvaluatorKind::DirectCrb;
    sc.order = mu;
    sc.psf = PsfModel::gaussian();
    ScalingFit direct_fit = fit_loglog(sweep(sc));
    compare_exponent(direct_fit, 0.0,
                     default_tolerance(EvaluatorKind::DirectCrb));

    csv.add_row({std::to_string(mu), format_double(quantum_fit.slope),
                 format_double(spade_fit.slope),
                 format_double(direct_fit.slope),
                 format_double(quantum_fit.theory),
                 format_double(spade_fit.theory),
                 format_double(direct_fit.theory)});
    rows.push_back(
        {{"mu", mu},
         {"quantum", fit_to_json(quantum_fit, EvaluatorKind::QuantumBoundLower,
                                 mu)},
         {"spade", fit_to_json(spade_fit, sc.kind, mu / 2)},
         {"direct_crb", fit_to_json(direct_fit, EvaluatorKind::DirectCrb, mu)}});
    for (const auto* fit : {&quantum_fit, &spade_fit, &direct_fit})
      if (!fit->pass)
        failed.push_back("demo mu=" + std::to_string(mu) + " slope " +
                         std::to_string(fit->slope) + " outside " +
                         std::to_string(fit->theory) + " +/- " +
                         std::to_string(fit->tolerance));
  }
  if (!opts.common.json_only) manifest.write_csv("demo_table.csv", csv);
  json config{{"command", "demo"},
              {"p0", opts.common.p0},
              {"q", opts.common.q},
              {"n", opts.common.n_photons},
              {"points", opts.points},
              {"mu_max", opts.mu_max},
              {"out", opts.common.out_dir}};
  manifest.write_json("demo.json", json{{"rows", rows}});
  return finish(manifest, config, bits, failed);
}

// ------------------------------------------------------------------- sweep

struct SweepOpts {
  CommonOpts common;
  std::string evaluator = "bound";
  int order = 1;
  std::string psf = "gaussian";
  double epsilon = 0.01;
};

EvaluatorKind parse_evaluator(const std::string& name) {
  if (name == "bound") return EvaluatorKind::QuantumBoundLower;
  if (name == "gram") return EvaluatorKind::QuantumGram;
  if (name == "spade-even") return EvaluatorKind::SpadeVarianceEven;
  if (name == "spade-odd") return EvaluatorKind::SpadeVarianceOdd;
  if (name == "fisher") return EvaluatorKind::DirectFisher;
  if (name == "crb") return EvaluatorKind::DirectCrb;
  throw ConfigError(
      "--evaluator: expected bound|gram|spade-even|spade-odd|fisher|crb, "
      "got '" + name + "'");
}

int cmd_sweep(const SweepOpts& opts) {
  const int bits = resolve_precision(opts.common.precision_bits);
  Manifest manifest("sweep", opts.common.out_dir);
  std::vector<std::string> failed;

  SweepConfig sc;
  sc.r0 = standardize(make_p0(opts.common)).base;
  sc.grid = opts.common.sweep.empty() ? geometric_grid()
                                      : parse_sweep(opts.common.sweep);
  sc.kind = parse_evaluator(opts.evaluator);
  sc.order = opts.order;
  sc.n_photons = opts.common.n_photons;
  sc.epsilon = opts.epsilon;
  sc.q = measure_from_spec(opts.common.q);
  sc.psf = psf_from_spec(opts.psf);
  const auto points = sweep(sc);
  if (!opts.common.json_only) {
    CsvBuilder csv({"delta", "value"});
    for (const auto& p : points)
      csv.add_row({format_double(p.delta), format_double(p.value)});
    manifest.write_csv("sweep.csv", csv);
  }
  ScalingFit fit = fit_loglog(points);
  compare_exponent(fit, theoretical_exponent(sc.kind, opts.order),
                   default_tolerance(sc.kind));
  manifest.write_json("sweep_fit.json", fit_to_json(fit, sc.kind, opts.order));
  if (!fit.pass)
    failed.push_back("sweep slope " + std::to_string(fit.slope) + " outside " +
                     std::to_string(fit.theory) + " +/- " +
                     std::to_string(fit.tolerance));
  json config{{"command", "sweep"},     {"p0", opts.common.p0},
              {"evaluator", opts.evaluator}, {"order", opts.order},
              {"q", opts.common.q},     {"psf", opts.psf},
              {"n", opts.common.n_photons}, {"eps", opts.epsilon},
              {"out", opts.common.out_dir}};
  return finish(manifest, config, bits, failed);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"precision limits for moments of subdiffraction objects"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "declarative key-value config file");
  app.require_subcommand(1);

  BoundOpts bound_opts;
  auto* bound = app.add_subcommand(
      "bound", "quantum lower bound on the moment-estimation error");
  add_common(bound, &bound_opts.common);
  bound->add_option("--mu", bound_opts.mu, "moment order (>= 1)")
      ->capture_default_str();
  bound->add_option("--tilt-c", bound_opts.tilt_c,
                    "validity half-width of the tilt parameter")
      ->capture_default_str();
  bound->add_option("--cap", bound_opts.cap,
                    "truncation cap of the purified-score series")
      ->capture_default_str();

  SpadeOpts spade_opts;
  auto* spade = app.add_subcommand(
      "spade", "simulate spatial-mode demultiplexing estimators");
  add_common(spade, &spade_opts.common, /*with_sweep=*/false);
  spade->add_option("--mode", spade_opts.mode,
                    "measured modes: even:<n> (PAD) or odd:<n> (iPAD)")
      ->capture_default_str();
  spade->add_option("--m", spade_opts.m_modes, "temporal modes M")
      ->capture_default_str();
  spade->add_option("--eps", spade_opts.epsilon, "photon flux per mode")
      ->capture_default_str();
  spade->add_option("--replicates", spade_opts.replicates,
                    "independent experiments")
      ->capture_default_str();
  spade->add_option("--seed", spade_opts.seed, "RNG seed (required)")
      ->required();

  DirectOpts direct_opts;
  auto* direct = app.add_subcommand(
      "direct", "direct-imaging Fisher information and Cramer-Rao bound");
  add_common(direct, &direct_opts.common);
  direct->add_option("--psf", direct_opts.psf,
                     "gaussian[:sigma] | supergauss:<d2>:<p> | "
                     "lorentz:<d2>:<p> | sinc2")
      ->capture_default_str();
  direct->add_option("--mu", direct_opts.mu, "moment order (>= 1)")
      ->capture_default_str();
  direct->add_flag("--experimental", direct_opts.experimental,
                   "allow the hard-aperture psf (unvalidated regime)");

  DemoOpts demo_opts;
  auto* demo = app.add_subcommand(
      "demo", "headline comparison: quantum vs SPADE vs direct across mu");
  add_common(demo, &demo_opts.common, /*with_sweep=*/false);
  demo->add_option("--points", demo_opts.points, "grid points per sweep")
      ->capture_default_str();
  demo->add_option("--mu-max", demo_opts.mu_max, "largest moment order")
      ->capture_default_str();

  SweepOpts sweep_opts;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "sweep any evaluator over delta and fit the exponent");
  add_common(sweep_cmd, &sweep_opts.common);
  sweep_cmd
      ->add_option("--evaluator", sweep_opts.evaluator,
                   "bound|gram|spade-even|spade-odd|fisher|crb")
      ->capture_default_str();
  sweep_cmd->add_option("--order", sweep_opts.order, "mu or mode order")
      ->capture_default_str();
  sweep_cmd->add_option("--psf", sweep_opts.psf, "psf for fisher/crb")
      ->capture_default_str();
  sweep_cmd->add_option("--eps", sweep_opts.epsilon,
                        "per-mode flux for spade variances")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    spade_opts.n_given = spade->count("--n") > 0;
    if (bound->parsed()) return cmd_bound(bound_opts);
    if (spade->parsed()) return cmd_spade(spade_opts);
    if (direct->parsed()) return cmd_direct(direct_opts);
    if (demo->parsed()) return cmd_demo(demo_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheck;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace subdiff
