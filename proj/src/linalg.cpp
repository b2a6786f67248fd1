#include "subdiff/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace subdiff {

namespace {
unsigned g_precision_bits = kDefaultPrecisionBits;

unsigned bits_to_digits10(unsigned bits) {
  // Slight over-request so the backend allocates at least `bits` of mantissa.
  return static_cast<unsigned>(bits * 0.3010299956639812) + 2;
}
}  // namespace

unsigned precision_bits() { return g_precision_bits; }

void set_precision_bits(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw ConfigError("precision bits must be at least " +
                      std::to_string(kMinPrecisionBits) + ", got " +
                      std::to_string(bits));
  }
  g_precision_bits = bits;
  Real::default_precision(bits_to_digits10(bits));
}

namespace {
// Install the default precision once at startup.
const bool g_precision_init = [] {
  Real::default_precision(bits_to_digits10(kDefaultPrecisionBits));
  return true;
}();
}  // namespace

Real real_pi() {
  Real one(1);
  return 4 * atan(one);
}

Real factorial(int n) {
  Real r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Real double_factorial(int n) {
  Real r(1);
  for (int k = n; k >= 2; k -= 2) r *= k;
  return r;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Real(1);
  return m;
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw NumericError("matmul: shape mismatch");
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Real& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Real max_abs(const Mat& a) {
  Real m(0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (abs(a(i, j)) > m) m = abs(a(i, j));
  return m;
}

Real max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw NumericError("max_abs_diff: shape mismatch");
  Real m(0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (abs(a(i, j) - b(i, j)) > m) m = abs(a(i, j) - b(i, j));
  return m;
}

Mat cholesky_lower(const Mat& h) {
  if (h.rows() != h.cols()) throw NumericError("cholesky: matrix not square");
  const int n = h.rows();
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    Real d = h(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0) throw PivotFailure(j);
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      Real s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Mat invert_lower_triangular(const Mat& l) {
  if (l.rows() != l.cols()) throw NumericError("invert_lower: matrix not square");
  const int n = l.rows();
  Mat a(n, n);
  for (int j = 0; j < n; ++j) {
    if (l(j, j) == 0) throw NumericError("invert_lower: zero diagonal");
    a(j, j) = Real(1) / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      Real s(0);
      for (int k = j; k < i; ++k) s += l(i, k) * a(k, j);
      a(i, j) = -s / l(i, i);
    }
  }
  return a;
}

std::vector<Real> jacobi_eigenvalues(const Mat& input, int max_sweeps) {
  if (input.rows() != input.cols())
    throw NumericError("jacobi: matrix not square");
  const int n = input.rows();
  Mat a = input;
  if (n == 1) return {a(0, 0)};

  Real fro(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  fro = sqrt(fro);
  // Stop once the off-diagonal mass is negligible at the working precision.
  Real tol = fro * ldexp(Real(1), -static_cast<int>(precision_bits()) + 8);
  if (tol == 0) tol = ldexp(Real(1), -static_cast<int>(precision_bits()) * 2);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Real off(0);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (sqrt(off) < tol) {
      std::vector<Real> eig(n);
      for (int i = 0; i < n; ++i) eig[i] = a(i, i);
      std::sort(eig.begin(), eig.end());
      return eig;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (abs(a(p, q)) == 0) continue;
        Real theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        Real t = 1 / (abs(theta) + sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        Real c = 1 / sqrt(t * t + 1);
        Real s = t * c;
        Real tau = s / (1 + c);
        Real apq = a(p, q);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = Real(0);
        a(q, p) = Real(0);
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          Real akp = a(k, p), akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(p, k) = a(k, p);
          a(k, q) = akq + s * (akp - tau * akq);
          a(q, k) = a(k, q);
        }
      }
    }
  }
  throw NumericError("jacobi eigensolve did not converge within sweep limit");
}

}  // namespace subdiff
