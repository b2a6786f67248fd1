#include "doctest.h"

#include <cmath>

#include "subdiff/scaling.hpp"
#include "subdiff/submodel.hpp"

using namespace subdiff;

namespace {

double d(const Real& x) { return to_double(x); }

}  // namespace

TEST_CASE("geometric grid shape") {
  const auto grid = geometric_grid(0.01, 0.1, 8);
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == 0.01);
  CHECK(grid.back() == 0.1);
  const double ratio = grid[1] / grid[0];
  for (size_t i = 1; i + 1 < grid.size(); ++i)
    CHECK(grid[i + 1] / grid[i] == doctest::Approx(ratio).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_grid(0.0, 0.1, 4), ConfigError);
  CHECK_THROWS_AS(geometric_grid(0.1, 0.1, 4), ConfigError);
  CHECK_THROWS_AS(geometric_grid(0.01, 0.1, 1), ConfigError);
}

TEST_CASE("evaluator names") {
  CHECK(evaluator_name(EvaluatorKind::QuantumBoundLower) ==
        "quantum_bound_lower");
  CHECK(evaluator_name(EvaluatorKind::QuantumGram) == "quantum_gram");
  CHECK(evaluator_name(EvaluatorKind::SpadeVarianceEven) ==
        "spade_variance_even");
  CHECK(evaluator_name(EvaluatorKind::SpadeVarianceOdd) ==
        "spade_variance_odd");
  CHECK(evaluator_name(EvaluatorKind::DirectFisher) == "direct_fisher");
  CHECK(evaluator_name(EvaluatorKind::DirectCrb) == "direct_crb");
  CHECK(evaluator_name(EvaluatorKind::Custom) == "custom");
}

TEST_CASE("theoretical exponents") {
  CHECK(theoretical_exponent(EvaluatorKind::QuantumBoundLower, 1) == 0.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumBoundLower, 2) == 2.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumBoundLower, 3) == 2.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumBoundLower, 4) == 4.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumGram, 1) == 2.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumGram, 2) == 2.0);
  CHECK(theoretical_exponent(EvaluatorKind::QuantumGram, 3) == 4.0);
  CHECK(theoretical_exponent(EvaluatorKind::SpadeVarianceEven, 2) == 4.0);
  CHECK(theoretical_exponent(EvaluatorKind::SpadeVarianceOdd, 1) == 2.0);
  CHECK(theoretical_exponent(EvaluatorKind::DirectFisher, 2) == 4.0);
  CHECK(theoretical_exponent(EvaluatorKind::DirectCrb, 3) == 0.0);
  CHECK_THROWS_AS(theoretical_exponent(EvaluatorKind::Custom, 1), ConfigError);
}

TEST_CASE("log-log fit recovers an exact power law") {
  std::vector<SweepPoint> pts;
  for (double delta : geometric_grid(0.01, 0.2, 6))
    pts.push_back({delta, 3.0 * std::pow(delta, 2.5)});
  ScalingFit fit = fit_loglog(pts);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points.size() == 6);

  CHECK(compare_exponent(fit, 2.5, 0.01));
  CHECK(fit.theory == 2.5);
  CHECK(fit.tolerance == 0.01);
  CHECK(fit.pass);
  CHECK(!compare_exponent(fit, 2.0, 0.4));
  CHECK(!fit.pass);
}

TEST_CASE("log-log fit handles constant data and rejects bad input") {
  std::vector<SweepPoint> flat = {{0.01, 7.0}, {0.05, 7.0}, {0.1, 7.0}};
  ScalingFit fit = fit_loglog(flat);
  CHECK(fit.slope == doctest::Approx(0.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));

  CHECK_THROWS_AS(fit_loglog({{0.01, 1.0}, {0.1, 2.0}}), ConfigError);
  CHECK_THROWS_AS(fit_loglog({{0.01, 1.0}, {0.05, 0.0}, {0.1, 2.0}}),
                  NumericError);
  CHECK_THROWS_AS(fit_loglog({{0.01, 1.0}, {0.05, -3.0}, {0.1, 2.0}}),
                  NumericError);
}

TEST_CASE("sweep validation") {
  SweepConfig config;
  config.grid = {};
  CHECK_THROWS_AS(sweep(config), ConfigError);
  config.grid = {0.1, 0.05};
  CHECK_THROWS_AS(sweep(config), ConfigError);
  config.grid = {-0.1, 0.05};
  CHECK_THROWS_AS(sweep(config), ConfigError);
  config.grid = {0.02, 0.05};
  config.r0 = builtin_p0("uniform", Real("0.5"));
  CHECK_THROWS_WITH_AS(sweep(config), doctest::Contains("standardized"),
                       ConfigError);
}

TEST_CASE("sweep wraps evaluator failures with context") {
  SweepConfig config;
  config.kind = EvaluatorKind::Custom;
  config.grid = {0.05};
  config.custom = [](const MeasureSpec&, double) -> double {
    throw std::runtime_error("boom");
  };
  CHECK_THROWS_WITH_AS(sweep(config), doctest::Contains("custom"),
                       NumericError);
  config.custom = nullptr;
  CHECK_THROWS_AS(sweep(config), NumericError);
}

TEST_CASE("custom evaluator sweeps an exact quadratic") {
  SweepConfig config;
  config.kind = EvaluatorKind::Custom;
  config.grid = geometric_grid(0.01, 0.1, 4);
  config.custom = [](const MeasureSpec& p0, double delta) {
    // The rescaled measure really has the requested half-width.
    CHECK(to_double(p0.half_width()) == doctest::Approx(delta).epsilon(1e-14));
    return delta * delta;
  };
  const auto points = sweep(config);
  REQUIRE(points.size() == 4);
  ScalingFit fit = fit_loglog(points);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep points agree with the module-level calls they wrap") {
  const double delta = 0.05;
  const MeasureSpec p0 = builtin_p0("uniform", Real(delta));

  SweepConfig gram_cfg;
  gram_cfg.kind = EvaluatorKind::QuantumGram;
  gram_cfg.order = 1;
  gram_cfg.grid = {delta};
  const double swept_gram = sweep(gram_cfg)[0].value;
  const TiltedSubmodel sub = make_submodel(p0, 1);
  CHECK(swept_gram ==
        doctest::Approx(d(purified_score_norm(sub, gram_cfg.q).gram))
            .epsilon(1e-12));

  SweepConfig spade_cfg;
  spade_cfg.kind = EvaluatorKind::SpadeVarianceEven;
  spade_cfg.order = 1;
  spade_cfg.grid = {delta};
  const double swept_var = sweep(spade_cfg)[0].value;
  const SpadeModel model = build_spade(spade_cfg.q, 2);
  const ModeProbabilities probs = mode_probabilities(model, p0);
  const double q1 = d(probs.pad[1]);
  const double r1 = d(model.r[1]);
  const double expected =
      q1 * (1.0 - spade_cfg.epsilon * q1) / (r1 * r1 * spade_cfg.n_photons);
  CHECK(swept_var == doctest::Approx(expected).epsilon(1e-12));

  SweepConfig crb_cfg;
  crb_cfg.kind = EvaluatorKind::DirectCrb;
  crb_cfg.order = 1;
  crb_cfg.grid = {delta};
  const double swept_crb = sweep(crb_cfg)[0].value;
  CHECK(swept_crb ==
        doctest::Approx(
            submodel_fisher(crb_cfg.psf, sub, crb_cfg.n_photons).crb)
            .epsilon(1e-12));
}

TEST_CASE("cheap slope checks match the predicted exponents") {
  const auto grid = geometric_grid(0.02, 0.1, 3);

  SweepConfig gram_cfg;
  gram_cfg.kind = EvaluatorKind::QuantumGram;
  gram_cfg.order = 1;
  gram_cfg.grid = grid;
  ScalingFit gram_fit = fit_loglog(sweep(gram_cfg));
  CHECK(compare_exponent(
      gram_fit, theoretical_exponent(EvaluatorKind::QuantumGram, 1), 0.15));

  SweepConfig bound_cfg;
  bound_cfg.kind = EvaluatorKind::QuantumBoundLower;
  bound_cfg.order = 2;
  bound_cfg.grid = grid;
  ScalingFit bound_fit = fit_loglog(sweep(bound_cfg));
  CHECK(compare_exponent(
      bound_fit,
      theoretical_exponent(EvaluatorKind::QuantumBoundLower, 2), 0.15));

  SweepConfig var_cfg;
  var_cfg.kind = EvaluatorKind::SpadeVarianceOdd;
  var_cfg.order = 1;
  var_cfg.grid = grid;
  ScalingFit var_fit = fit_loglog(sweep(var_cfg));
  CHECK(compare_exponent(
      var_fit, theoretical_exponent(EvaluatorKind::SpadeVarianceOdd, 1),
      0.15));
}
