#pragma once

#include <string>
#include <vector>

#include "subdiff/linalg.hpp"
#include "subdiff/measure.hpp"

namespace subdiff {

inline constexpr int kDefaultHankelOrderCap = 30;

// Moment matrix of a measure: entries(p, q) = moment(P, p+q), order J means
// a (J+1) x (J+1) matrix. All leading principal submatrices are positive-
// definite for measures with infinite support.
struct HankelMatrix {
  Mat entries;
  int order = 0;        // J
  std::string source;   // measure name
  bool standardized = false;
};

// Lower-triangular factor of a Hankel matrix with positive diagonal. For a
// standardized measure the entries play the role of the unit-half-width
// factor (scale-free); the unstandardized factor is recovered by weighting
// row p with delta^p.
struct CholeskyFactor {
  Mat entries;
};

// Inverse of a Cholesky factor; row n holds the coefficients of the n-th
// orthonormal polynomial a_n(x) = sum_p coefficients(n, p) x^p.
struct OrthoBasis {
  Mat coefficients;
  Real eval(int n, const Real& x) const;
};

// Smallest-eigenvalue profile of the leading submatrices of a standardized
// Hankel matrix, with the geometric-decay fit
// lambda_min(order p) ~ prefactor * sqrt(p) * r^p.
struct EigenDecayFit {
  std::vector<int> orders;
  std::vector<Real> lambda_min;
  double rate_r = 0;
  double prefactor = 0;
  double r_squared = 0;
};

HankelMatrix build_hankel(const MeasureSpec& p_measure, int order_j,
                          bool standardized = false);
CholeskyFactor cholesky(const HankelMatrix& h);
OrthoBasis invert_lower(const CholeskyFactor& l);
EigenDecayFit lambda_min_profile(const MeasureSpec& p_measure, int p_max);

// Directional derivative of the Cholesky factor: given the factor V of a
// matrix G, its inverse B, and a symmetric perturbation dG, returns the
// lower-triangular dV satisfying dV*V^T + V*dV^T = dG. Computed as
// dV = V * (W o (B * dG * B^T)) with the half-diagonal weight mask
// W(m, n) = 1 for n < m, 1/2 for n = m, 0 for n > m.
Mat cholesky_derivative(const CholeskyFactor& v, const OrthoBasis& b,
                        const Mat& dg);

// Runs `f`; on a Cholesky pivot failure doubles the working precision and
// retries exactly once, restoring the previous precision afterwards.
template <typename F>
auto escalate_on_pivot_failure(F&& f) {
  try {
    return f();
  } catch (const PivotFailure&) {
    ScopedPrecision scoped(2 * precision_bits());
    return f();
  }
}

// Row-major CSV dump with full working-precision decimal digits.
void dump_matrix_csv(const std::string& path, const Mat& m);

}  // namespace subdiff
