#include "subdiff/submodel.hpp"

#include <cmath>

namespace subdiff {

MomentFunctional MomentFunctional::power(int mu) {
  if (mu < 1) throw ConfigError("moment order mu must be >= 1");
  MomentFunctional f;
  f.mu = mu;
  f.b = [mu](const Real& x) { return pow(x, mu); };
  return f;
}

Real TiltedSubmodel::score(const Real& x) const {
  return b.eval(mu, x / standard.delta);
}

TiltedSubmodel make_submodel(const MeasureSpec& p0, int mu, Real c,
                             int truncation_cap) {
  if (mu < 1) throw ConfigError("score order mu must be >= 1");
  if (truncation_cap < 1) throw ConfigError("truncation cap must be >= 1");
  TiltedSubmodel sub(p0, standardize(p0));
  sub.mu = mu;
  sub.c = c;

  // The series evaluation at truncation order j needs standardized-factor
  // rows up to 2j; build the largest order the measure supports, up to the
  // cap's requirement.
  int want = 2 * truncation_cap;
  int cap = p0.max_hankel_order();
  sub.basis_order = std::min(want, cap);
  sub.order_capped = sub.basis_order < want;
  if (sub.basis_order < mu)
    throw ConfigError("measure supports moment matrices only up to order " +
                      std::to_string(cap) + ", too small for score order " +
                      std::to_string(mu));

  const HankelMatrix g = build_hankel(sub.standard.base, sub.basis_order, true);
  sub.v = cholesky(g);
  sub.b = invert_lower(sub.v);

  // Construction invariants: the score is zero-mean and unit-norm under P0.
  const Real mean = integrate(p0, [&sub](const Real& x) { return sub.score(x); });
  const Real norm_sq =
      integrate(p0, [&sub](const Real& x) { return sub.score(x) * sub.score(x); });
  if (abs(mean) > 1e-10 || abs(norm_sq - 1) > 1e-10)
    throw NumericError(
        "submodel construction failed the score normalization check "
        "(mean=" + mean.str(6) + ", norm_sq=" + norm_sq.str(6) + ")");
  return sub;
}

Real g_theta(const TiltedSubmodel& sub, const Real& x, const Real& theta) {
  if (!sub.p0.contains(x))
    throw NumericError("g_theta: x=" + x.str(8) +
                       " is outside the support of " + sub.p0.name());
  const Real z =
      1 + integrate(sub.p0, [&sub, &theta](const Real& y) {
        return tanh(theta * sub.score(y));
      });
  return (1 + tanh(theta * sub.score(x))) / z;
}

Real dot_beta(const TiltedSubmodel& sub, const MomentFunctional& b) {
  return integrate(sub.p0,
                   [&](const Real& x) { return b.b(x) * sub.score(x); });
}

Mat dot_hankel(const TiltedSubmodel& sub, int order_j) {
  if (order_j < 0) throw ConfigError("dot_hankel order must be nonnegative");
  if (2 * order_j > sub.basis_order)
    throw NumericError(
        "dot_hankel order overflow: order " + std::to_string(order_j) +
        " needs standardized-factor rows up to " + std::to_string(2 * order_j) +
        " but the submodel holds " + std::to_string(sub.basis_order));
  Mat dg(order_j + 1, order_j + 1);
  for (int q = 0; q <= order_j; ++q)
    for (int r = 0; r <= order_j; ++r) dg(q, r) = sub.v.entries(q + r, sub.mu);
  return dg;
}

Mat tilted_hankel(const TiltedSubmodel& sub, const Real& theta, int order_j) {
  // Moments of g_theta * P0 in one quadrature pass.
  const Real z =
      1 + integrate(sub.p0, [&sub, &theta](const Real& y) {
        return tanh(theta * sub.score(y));
      });
  std::vector<Real> mom(2 * order_j + 1, Real(0));
  // integrate() is a single pass over nodes/atoms; accumulate all powers by
  // evaluating the integrand once per power (clarity over speed here).
  for (int k = 0; k <= 2 * order_j; ++k) {
    mom[k] = integrate(sub.p0, [&](const Real& x) {
      return pow(x, k) * (1 + tanh(theta * sub.score(x)));
    }) / z;
  }
  Mat h(order_j + 1, order_j + 1);
  for (int p = 0; p <= order_j; ++p)
    for (int q = 0; q <= order_j; ++q) h(p, q) = mom[p + q];
  return h;
}

Mat dot_cholesky(const TiltedSubmodel& sub, int order_j) {
  const Mat dg = dot_hankel(sub, order_j);
  // Leading blocks of the stored standardized factor and basis.
  Mat v(order_j + 1, order_j + 1), b(order_j + 1, order_j + 1);
  for (int i = 0; i <= order_j; ++i)
    for (int j = 0; j <= order_j; ++j) {
      v(i, j) = sub.v.entries(i, j);
      b(i, j) = sub.b.coefficients(i, j);
    }
  Mat dv = cholesky_derivative(CholeskyFactor{v}, OrthoBasis{b}, dg);
  // Unstandardize: row p carries delta^p.
  Real dp(1);
  for (int p = 0; p <= order_j; ++p) {
    for (int n = 0; n <= order_j; ++n) dv(p, n) *= dp;
    dp *= sub.standard.delta;
  }
  return dv;
}

namespace {

// Real/imaginary accumulator for sums of i^k * (real term).
struct ComplexAcc {
  Real re{0}, im{0};
  void add_ipow(int k, const Real& term) {
    switch (((k % 4) + 4) % 4) {
      case 0: re += term; break;
      case 1: im += term; break;
      case 2: re -= term; break;
      case 3: im -= term; break;
    }
  }
};

struct GramOverlap {
  Real gram, overlap;
};

// Evaluate the two truncated inner products at order j. The state
// derivative has per-mode components sum_p (-i k)^p / p! * Ldot(p, n), so
// its squared norm integrates k^(p+q) against Q with phase i^(p-q); the
// moments m_t of Q close the integral. The overlap replaces one factor with
// the unperturbed coefficients L(p, n). Both are asserted (nearly) real;
// for symmetric Q the odd moments vanish and the imaginary parts are
// structurally zero.
GramOverlap evaluate_order(const TiltedSubmodel& sub, int j,
                           const std::vector<Real>& q_moments,
                           const std::vector<Real>& inv_fact) {
  const Mat ldot = dot_cholesky(sub, j);
  // Unstandardized factor entries L(p, n) = delta^p * V(p, n).
  Mat l(j + 1, j + 1);
  {
    Real dp(1);
    for (int p = 0; p <= j; ++p) {
      for (int n = 0; n <= j; ++n) l(p, n) = sub.v.entries(p, n) * dp;
      dp *= sub.standard.delta;
    }
  }
  ComplexAcc gram_acc, overlap_acc;
  for (int n = 0; n <= j; ++n) {
    for (int p = n; p <= j; ++p) {
      if (ldot(p, n) == 0 && l(p, n) == 0) continue;
      for (int q = n; q <= j; ++q) {
        const Real& m = q_moments[p + q];
        if (m == 0) continue;
        const Real base = m * inv_fact[p] * inv_fact[q];
        gram_acc.add_ipow(p - q, base * ldot(p, n) * ldot(q, n));
        overlap_acc.add_ipow(p - q, base * l(p, n) * ldot(q, n));
      }
    }
  }
  const Real scale = abs(gram_acc.re) + abs(overlap_acc.re) + Real(1e-300);
  if (abs(gram_acc.im) > scale * 1e-20)
    throw NumericError(
        "purified-score sum failed the realness check (imag part " +
        gram_acc.im.str(6) + ")");
  return {gram_acc.re, overlap_acc.re};
}

}  // namespace

PurifiedScoreReport purified_score_norm(const TiltedSubmodel& sub,
                                        const MeasureSpec& q,
                                        int truncation_order) {
  const int j_cap = sub.basis_order / 2;
  const int j_min = std::max(1, (sub.mu + 1) / 2);

  auto build_report = [&](int j, const GramOverlap& go, const Real& tail) {
    PurifiedScoreReport rep;
    rep.gram = go.gram;
    rep.overlap = go.overlap;
    rep.truncation_order = j;
    rep.tail_estimate = tail;
    rep.score_norm_sq_upper = 4 * go.gram;
    rep.score_norm_sq_fs = 4 * (go.gram - go.overlap * go.overlap);
    return rep;
  };

  if (truncation_order >= 0) {
    const int j = truncation_order;
    if (2 * j > sub.basis_order)
      throw NumericError("truncation order exceeds the submodel order");
    std::vector<Real> qm = moments_up_to(q, 2 * j);
    std::vector<Real> inv_fact(j + 1);
    for (int p = 0; p <= j; ++p) inv_fact[p] = 1 / factorial(p);
    return build_report(j, evaluate_order(sub, j, qm, inv_fact), Real(0));
  }

  // Adaptive rule: grow j until the relative change of gram is below the
  // tolerance.
  if (j_min > j_cap)
    throw NumericError("submodel order too small for the adaptive series");
  std::vector<Real> qm = moments_up_to(q, 2 * j_cap);
  std::vector<Real> inv_fact(j_cap + 1);
  for (int p = 0; p <= j_cap; ++p) inv_fact[p] = 1 / factorial(p);

  GramOverlap prev = evaluate_order(sub, j_min, qm, inv_fact);
  Real rel_change(1);
  for (int j = j_min + 1; j <= j_cap; ++j) {
    GramOverlap cur = evaluate_order(sub, j, qm, inv_fact);
    const Real denom = abs(cur.gram) > 0 ? abs(cur.gram) : Real(1e-300);
    rel_change = abs(cur.gram - prev.gram) / denom;
    if (rel_change < kTruncationRelTol)
      return build_report(j, cur, rel_change);
    prev = cur;
  }
  throw TruncationError(
      "purified-score series did not converge by order " +
          std::to_string(j_cap) + " (last relative change " +
          rel_change.str(4) + ")",
      build_report(j_cap, prev, rel_change));
}

QuantumBoundReport quantum_bound(const TiltedSubmodel& sub,
                                 const MomentFunctional& b,
                                 const MeasureSpec& q, double n_photons) {
  if (!(n_photons > 0)) throw ConfigError("photon number N must be positive");
  QuantumBoundReport rep;
  rep.dot_beta = dot_beta(sub, b);
  rep.score = purified_score_norm(sub, q, -1);
  rep.n_photons = n_photons;
  if (!(rep.score.score_norm_sq_upper > 0))
    throw NumericError("degenerate submodel: purified score norm is zero");
  rep.bound_lower =
      rep.dot_beta * rep.dot_beta / (n_photons * rep.score.score_norm_sq_upper);
  rep.bound_fs =
      rep.dot_beta * rep.dot_beta / (n_photons * rep.score.score_norm_sq_fs);
  return rep;
}

}  // namespace subdiff
