#include "subdiff/scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "subdiff/submodel.hpp"

namespace subdiff {

namespace {

// Analytic (exact binomial/multinomial) variance of the SPADE moment
// estimators at photon budget N = M * epsilon.
double spade_variance(const SweepConfig& config, const MeasureSpec& p0) {
  const int n = config.order;
  const bool even = config.kind == EvaluatorKind::SpadeVarianceEven;
  const SpadeModel model = build_spade(config.q, n + 1);
  const ModeProbabilities probs = mode_probabilities(model, p0);
  const double eps = config.epsilon;
  const double n_photons = config.n_photons;
  if (even) {
    const double q = to_double(probs.pad[n]);
    const double r = to_double(model.r[n]);
    return q * (1.0 - eps * q) / (r * r * n_photons);
  }
  const double qp = to_double(probs.ipad_plus[n]);
  const double qm = to_double(probs.ipad_minus[n]);
  const double s = to_double(model.s[n]);
  return (qp + qm - eps * (qp - qm) * (qp - qm)) / (s * s * n_photons);
}

double evaluate_point(const SweepConfig& config, double delta) {
  const MeasureSpec p0 = rescale(config.r0, Real(delta));
  switch (config.kind) {
    case EvaluatorKind::QuantumBoundLower: {
      const TiltedSubmodel sub = make_submodel(p0, config.order);
      const QuantumBoundReport rep = quantum_bound(
          sub, MomentFunctional::power(config.order), config.q,
          config.n_photons);
      return to_double(rep.bound_lower);
    }
    case EvaluatorKind::QuantumGram: {
      const TiltedSubmodel sub = make_submodel(p0, config.order);
      const PurifiedScoreReport rep = purified_score_norm(sub, config.q);
      return to_double(rep.gram);
    }
    case EvaluatorKind::SpadeVarianceEven:
    case EvaluatorKind::SpadeVarianceOdd:
      return spade_variance(config, p0);
    case EvaluatorKind::DirectFisher: {
      const TiltedSubmodel sub = make_submodel(p0, config.order);
      return submodel_fisher(config.psf, sub, config.n_photons).fisher;
    }
    case EvaluatorKind::DirectCrb: {
      const TiltedSubmodel sub = make_submodel(p0, config.order);
      return submodel_fisher(config.psf, sub, config.n_photons).crb;
    }
    case EvaluatorKind::Custom:
      if (!config.custom)
        throw ConfigError("custom evaluator requested but none supplied");
      return config.custom(p0, delta);
  }
  throw ConfigError("unknown evaluator kind");
}

}  // namespace

std::string evaluator_name(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::QuantumBoundLower: return "quantum_bound_lower";
    case EvaluatorKind::QuantumGram: return "quantum_gram";
    case EvaluatorKind::SpadeVarianceEven: return "spade_variance_even";
    case EvaluatorKind::SpadeVarianceOdd: return "spade_variance_odd";
    case EvaluatorKind::DirectFisher: return "direct_fisher";
    case EvaluatorKind::DirectCrb: return "direct_crb";
    case EvaluatorKind::Custom: return "custom";
  }
  return "unknown";
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0) || !(hi > lo))
    throw ConfigError("geometric grid needs 0 < lo < hi");
  if (points < 2) throw ConfigError("geometric grid needs at least 2 points");
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<SweepPoint> sweep(const SweepConfig& config) {
  if (config.grid.empty()) throw ConfigError("sweep grid is empty");
  for (size_t i = 0; i < config.grid.size(); ++i) {
    if (!(config.grid[i] > 0))
      throw ConfigError("sweep grid values must be positive");
    if (i > 0 && !(config.grid[i] > config.grid[i - 1]))
      throw ConfigError("sweep grid must be strictly increasing");
  }
  if (to_double(config.r0.half_width()) != 1.0 &&
      std::abs(to_double(config.r0.half_width()) - 1.0) > 1e-9)
    throw ConfigError("sweep base measure must be standardized (half-width 1)");

  std::vector<SweepPoint> out;
  out.reserve(config.grid.size());
  for (double delta : config.grid) {
    try {
      out.push_back({delta, evaluate_point(config, delta)});
    } catch (const std::exception& e) {
      throw NumericError("sweep evaluator '" + evaluator_name(config.kind) +
                         "' failed at delta=" + std::to_string(delta) + ": " +
                         e.what());
    }
  }
  return out;
}

ScalingFit fit_loglog(const std::vector<SweepPoint>& points) {
  if (points.size() < 3)
    throw ConfigError("log-log fit needs at least 3 points");
  ScalingFit fit;
  fit.points = points;
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (!(p.value > 0) || !std::isfinite(p.value))
      throw NumericError("log-log fit requires positive finite values; got " +
                         std::to_string(p.value) + " at delta=" +
                         std::to_string(p.delta));
    xs.push_back(std::log(p.delta));
    ys.push_back(std::log(p.value));
  }
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0) {
    fit.r_squared = 1.0;  // constant data: the flat fit is exact
  } else {
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
      const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += resid * resid;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

bool compare_exponent(ScalingFit& fit, double theory, double tol) {
  fit.theory = theory;
  fit.tolerance = tol;
  fit.pass = std::abs(fit.slope - theory) <= tol;
  return fit.pass;
}

double theoretical_exponent(EvaluatorKind kind, int order) {
  switch (kind) {
    case EvaluatorKind::QuantumBoundLower:
      return 2.0 * (order / 2);
    case EvaluatorKind::QuantumGram:
      return 2.0 * ((order + 1) / 2);
    case EvaluatorKind::SpadeVarianceEven:
    case EvaluatorKind::SpadeVarianceOdd:
      return 2.0 * order;
    case EvaluatorKind::DirectFisher:
      return 2.0 * order;
    case EvaluatorKind::DirectCrb:
      return 0.0;
    case EvaluatorKind::Custom:
      throw ConfigError("no theoretical exponent for a custom evaluator");
  }
  throw ConfigError("unknown evaluator kind");
}

}  // namespace subdiff
