#include "subdiff/hankel.hpp"

#include <cmath>
#include <fstream>

namespace subdiff {

Real OrthoBasis::eval(int n, const Real& x) const {
  if (n < 0 || n >= coefficients.rows())
    throw NumericError("orthonormal polynomial index out of range");
  // Horner evaluation of row n (degree n).
  Real acc = coefficients(n, n);
  for (int p = n - 1; p >= 0; --p) acc = acc * x + coefficients(n, p);
  return acc;
}

HankelMatrix build_hankel(const MeasureSpec& p_measure, int order_j,
                          bool standardized) {
  if (order_j < 0) throw ConfigError("hankel order must be nonnegative");
  if (p_measure.kind() == MeasureSpec::Kind::Atoms &&
      order_j > p_measure.max_hankel_order()) {
    throw ConfigError(
        "hankel order " + std::to_string(order_j) + " too large for " +
        std::to_string(p_measure.atom_list().size()) +
        "-atom measure (order must stay below the atom count)");
  }
  const auto mom = moments_up_to(p_measure, 2 * order_j);
  HankelMatrix h;
  h.order = order_j;
  h.source = p_measure.name();
  h.standardized = standardized;
  h.entries = Mat(order_j + 1, order_j + 1);
  for (int p = 0; p <= order_j; ++p)
    for (int q = 0; q <= order_j; ++q) h.entries(p, q) = mom[p + q];

  // Verify positive-definiteness of every leading principal submatrix; a
  // single factorization pass checks them all (pivot k fails exactly when
  // the k-th leading minor is not positive).
  cholesky_lower(h.entries);
  return h;
}

CholeskyFactor cholesky(const HankelMatrix& h) {
  return CholeskyFactor{cholesky_lower(h.entries)};
}

OrthoBasis invert_lower(const CholeskyFactor& l) {
  return OrthoBasis{invert_lower_triangular(l.entries)};
}

namespace {
// Ordinary least squares of y against x; returns (slope, intercept, r^2).
struct OlsFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  OlsFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}
}  // namespace

EigenDecayFit lambda_min_profile(const MeasureSpec& p_measure, int p_max) {
  if (p_max < 1) throw ConfigError("lambda_min profile needs p_max >= 1");
  if (p_measure.has_finite_half_width() &&
      abs(p_measure.half_width() - 1) > 1e-9) {
    throw ConfigError(
        "lambda_min profile expects a standardized measure (half-width 1)");
  }
  const HankelMatrix g = build_hankel(p_measure, p_max, true);
  EigenDecayFit fit;
  for (int p = 0; p <= p_max; ++p) {
    Mat sub(p + 1, p + 1);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) sub(i, j) = g.entries(i, j);
    const auto eig = jacobi_eigenvalues(sub);
    fit.orders.push_back(p);
    fit.lambda_min.push_back(eig.front());
  }
  // Fit log(lambda_min) - log(sqrt(p)) against p for p >= 1; the rate is
  // exp(slope).
  std::vector<double> xs, ys;
  for (int p = 1; p <= p_max; ++p) {
    xs.push_back(static_cast<double>(p));
    ys.push_back(to_double(log(fit.lambda_min[p])) - 0.5 * std::log(double(p)));
  }
  const OlsFit f = ols(xs, ys);
  fit.rate_r = std::exp(f.slope);
  fit.prefactor = std::exp(f.intercept);
  fit.r_squared = f.r_squared;
  return fit;
}

Mat cholesky_derivative(const CholeskyFactor& v, const OrthoBasis& b,
                        const Mat& dg) {
  const Mat& vm = v.entries;
  const Mat& bm = b.coefficients;
  const int n = vm.rows();
  if (vm.cols() != n || bm.rows() != n || bm.cols() != n || dg.rows() != n ||
      dg.cols() != n) {
    throw NumericError("cholesky_derivative: shape mismatch");
  }
  const Real scale = max_abs(dg);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (abs(dg(i, j) - dg(j, i)) > scale * 1e-12 + Real(1e-300))
        throw NumericError("cholesky_derivative: dG must be symmetric");

  Mat f = matmul(matmul(bm, dg), transpose(bm));
  for (int m = 0; m < n; ++m) {
    for (int c = 0; c < n; ++c) {
      if (c == m)
        f(m, c) /= 2;
      else if (c > m)
        f(m, c) = Real(0);
    }
  }
  return matmul(vm, f);
}

void dump_matrix_csv(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw NumericError("cannot open file for writing: " + path);
  const unsigned digits = Real::default_precision() + 3;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j).str(digits);
    }
    out << '\n';
  }
}

}  // namespace subdiff
