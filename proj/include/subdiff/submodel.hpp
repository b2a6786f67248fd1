#pragma once

#include <functional>
#include <optional>
#include <string>

#include "subdiff/hankel.hpp"
#include "subdiff/measure.hpp"

namespace subdiff {

inline constexpr int kDefaultTruncationCap = 25;   // adaptive series cap
inline constexpr double kTruncationRelTol = 1e-8;  // adaptive stopping rule

// Linear functional beta(P) = integral of b against P. The default
// direction b(x) = x^mu makes beta the mu-th raw moment.
struct MomentFunctional {
  int mu = 1;
  std::function<Real(const Real&)> b;
  static MomentFunctional power(int mu);
};

// One-parameter tilt of a truth measure P0 along its mu-th orthonormal
// polynomial a_mu: densities g_theta(x) proportional to
// 1 + tanh(theta * a_mu(x)), which stay positive for every theta and have
// score a_mu at theta = 0. The basis is stored in standardized form: a_mu(x)
// is evaluated as b_mu(x / delta), which is numerically stable because the
// standardized coefficients are O(1).
struct TiltedSubmodel {
  TiltedSubmodel(MeasureSpec p0_measure, StandardizedMeasure standard_split)
      : p0(std::move(p0_measure)), standard(std::move(standard_split)) {}

  MeasureSpec p0;
  StandardizedMeasure standard;
  int mu = 1;
  Real c{1};            // validity half-width of the theta interval
  int basis_order = 0;  // order of the stored standardized factor/basis
  CholeskyFactor v;     // factor of the standardized moment matrix
  OrthoBasis b;         // standardized orthonormal polynomials b_n
  bool order_capped = false;  // finite-atom measure limited the order

  Real score(const Real& x) const;  // a_mu(x)
};

// Truncated evaluation of the purified-score inner products. `gram` is the
// squared norm of the state derivative, `overlap` its inner product with the
// unperturbed state (real part; it vanishes for symmetric frequency
// measures). The score-norm upper bound 4*gram yields a valid lower bound on
// the estimation limit; the variant with the overlap subtracted is the
// Fubini-Study form.
struct PurifiedScoreReport {
  Real gram{0};
  Real overlap{0};
  int truncation_order = 0;
  Real tail_estimate{0};  // relative change of gram at the last increment
  Real score_norm_sq_upper{0};  // 4 * gram
  Real score_norm_sq_fs{0};     // 4 * (gram - overlap^2)
};

struct QuantumBoundReport {
  Real dot_beta{0};
  PurifiedScoreReport score;
  double n_photons = 0;
  Real bound_lower{0};  // dot_beta^2 / (N * score_norm_sq_upper)
  Real bound_fs{0};     // dot_beta^2 / (N * score_norm_sq_fs)
};

TiltedSubmodel make_submodel(const MeasureSpec& p0, int mu, Real c = Real(1),
                             int truncation_cap = kDefaultTruncationCap);

// Tilted density relative to P0, normalized so it integrates to 1 over P0.
Real g_theta(const TiltedSubmodel& sub, const Real& x, const Real& theta);

// Sensitivity of the functional along the tilt: <b, a_mu> over P0. For
// b(x) = x^mu this equals delta^mu times the (mu, mu) entry of the
// standardized factor.
Real dot_beta(const TiltedSubmodel& sub, const MomentFunctional& b);

// Derivative of the standardized moment matrix along the tilt:
// entries (q, r) = V(q+r, mu) of the standardized factor.
Mat dot_hankel(const TiltedSubmodel& sub, int order_j);

// Moment matrix of the tilted measure g_theta * P0 (unstandardized), used by
// the finite-difference oracle for the Cholesky derivative.
Mat tilted_hankel(const TiltedSubmodel& sub, const Real& theta, int order_j);

// Derivative of the unstandardized Cholesky factor at theta = 0: entries
// (p, n) = delta^p * dV(p, n), with dV from cholesky_derivative.
Mat dot_cholesky(const TiltedSubmodel& sub, int order_j);

// Truncated purified-score inner products against the frequency measure Q.
// Pass truncation_order < 0 for the adaptive rule: the order grows until the
// relative change of gram drops below kTruncationRelTol or the cap is hit
// (error on non-convergence).
PurifiedScoreReport purified_score_norm(const TiltedSubmodel& sub,
                                        const MeasureSpec& q,
                                        int truncation_order = -1);

QuantumBoundReport quantum_bound(const TiltedSubmodel& sub,
                                 const MomentFunctional& b,
                                 const MeasureSpec& q, double n_photons);

// Non-convergence of the adaptive truncation; carries the partial report.
struct TruncationError : NumericError {
  PurifiedScoreReport partial;
  TruncationError(const std::string& msg, PurifiedScoreReport part)
      : NumericError(msg), partial(std::move(part)) {}
};

}  // namespace subdiff
