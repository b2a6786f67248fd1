#pragma once

#include <functional>
#include <string>
#include <vector>

#include "subdiff/direct.hpp"
#include "subdiff/measure.hpp"
#include "subdiff/spade.hpp"

namespace subdiff {

// Quantities whose dependence on the object size delta can be swept. The
// small-delta exponents are:
//   QuantumBoundLower   2 * floor(mu / 2)
//   QuantumGram         2 * ceil(mu / 2)
//   SpadeVarianceEven   2 * n        (analytic variance of the even-mode estimator)
//   SpadeVarianceOdd    2 * n        (odd-mode pair)
//   DirectFisher        2 * mu
//   DirectCrb           0
enum class EvaluatorKind {
  QuantumBoundLower,
  QuantumGram,
  SpadeVarianceEven,
  SpadeVarianceOdd,
  DirectFisher,
  DirectCrb,
  Custom,
};

std::string evaluator_name(EvaluatorKind kind);

// Default geometric grid: k points spanning [lo, hi] multiplicatively.
std::vector<double> geometric_grid(double lo = 0.01, double hi = 0.1,
                                   int points = 8);

// One sweep: the standardized base shape r0 is held fixed while the object
// is rescaled to each delta in the grid.
struct SweepConfig {
  MeasureSpec r0 = builtin_r0("uniform");  // half-width 1
  std::vector<double> grid = geometric_grid();
  EvaluatorKind kind = EvaluatorKind::QuantumBoundLower;
  int order = 1;            // mu, or the SPADE mode order n
  double n_photons = 1e5;   // N
  double epsilon = 0.01;    // per-mode flux for the SPADE variance formulas
  MeasureSpec q = MeasureSpec::gaussian_frequency();
  PsfModel psf = PsfModel::gaussian();
  // Used when kind == Custom: value at (rescaled measure, delta).
  std::function<double(const MeasureSpec& p0, double delta)> custom;
};

struct SweepPoint {
  double delta = 0;
  double value = 0;
};

struct ScalingFit {
  std::vector<SweepPoint> points;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double theory = 0;
  double tolerance = 0;
  bool pass = false;
};

std::vector<SweepPoint> sweep(const SweepConfig& config);

// Ordinary least squares on (log delta, log value). All values must be
// strictly positive and finite.
ScalingFit fit_loglog(const std::vector<SweepPoint>& points);

// Records (theory, tol) in the fit and returns |slope - theory| <= tol.
bool compare_exponent(ScalingFit& fit, double theory, double tol);

// Predicted small-delta exponent for the given evaluator and order.
double theoretical_exponent(EvaluatorKind kind, int order);

}  // namespace subdiff
