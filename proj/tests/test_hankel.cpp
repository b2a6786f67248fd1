#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "subdiff/hankel.hpp"
#include "subdiff/io.hpp"

using namespace subdiff;

namespace {
double d(const Real& x) { return to_double(x); }
}  // namespace

TEST_CASE("moment matrix of the standardized flat density") {
  const MeasureSpec r0 = builtin_r0("uniform");
  const HankelMatrix h = build_hankel(r0, 3, true);
  CHECK(h.order == 3);
  CHECK(h.standardized);
  // Entries are 1/(p+q+1) for even p+q and 0 for odd p+q.
  CHECK(d(abs(h.entries(0, 0) - 1)) < 1e-70);
  CHECK(d(abs(h.entries(1, 1) - Real(1) / 3)) < 1e-70);
  CHECK(d(abs(h.entries(0, 2) - Real(1) / 3)) < 1e-70);
  CHECK(d(abs(h.entries(2, 2) - Real(1) / 5)) < 1e-70);
  CHECK(d(abs(h.entries(0, 1))) < 1e-70);
}

TEST_CASE("factor diagonal of the flat density") {
  const MeasureSpec r0 = builtin_r0("uniform");
  const CholeskyFactor v = cholesky(build_hankel(r0, 4, true));
  // V(1,1) = 1/sqrt(3) and V(2,2) = 2/(3 sqrt(5)).
  CHECK(d(abs(v.entries(1, 1) - 1 / sqrt(Real(3)))) < 1e-70);
  CHECK(d(abs(v.entries(2, 2) - 2 / (3 * sqrt(Real(5))))) < 1e-70);
  CHECK(d(abs(v.entries(0, 0) - 1)) < 1e-70);
}

TEST_CASE("structural zeros of symmetric measures") {
  // For an even measure the factor couples only entries with p + n even.
  for (const auto& family : {"uniform", "trunc_gaussian"}) {
    const CholeskyFactor v =
        cholesky(build_hankel(builtin_r0(family), 12, true));
    for (int p = 0; p <= 12; ++p)
      for (int n = 0; n <= p; ++n)
        if ((p + n) % 2 == 1) CHECK(d(abs(v.entries(p, n))) < 1e-25);
  }
}

TEST_CASE("orthonormal polynomials match the classical family") {
  // For the flat probability density on [-1, 1] the orthonormal polynomials
  // are sqrt(2n+1) times the Legendre polynomials.
  const MeasureSpec r0 = builtin_r0("uniform");
  const OrthoBasis b = invert_lower(cholesky(build_hankel(r0, 3, true)));
  CHECK(d(abs(b.coefficients(1, 1) - sqrt(Real(3)))) < 1e-70);
  // a_2(x) = sqrt(5) (3x^2 - 1) / 2.
  CHECK(d(abs(b.coefficients(2, 2) - 3 * sqrt(Real(5)) / 2)) < 1e-70);
  CHECK(d(abs(b.coefficients(2, 0) + sqrt(Real(5)) / 2)) < 1e-70);
  // Horner evaluation agrees with the coefficients.
  const Real x("0.37");
  CHECK(d(abs(b.eval(2, x) - sqrt(Real(5)) * (3 * x * x - 1) / 2)) < 1e-69);
  CHECK_THROWS_AS(b.eval(7, x), NumericError);
}

TEST_CASE("orthonormality under the measure") {
  const MeasureSpec r0 = builtin_r0("quadratic");
  const int order = 10;
  const OrthoBasis b = invert_lower(cholesky(build_hankel(r0, order, true)));
  for (int m = 0; m <= order; ++m)
    for (int n = 0; n <= m; ++n) {
      const Real ip = integrate(r0, [&](const Real& x) {
        return b.eval(m, x) * b.eval(n, x);
      });
      const Real expected = (m == n) ? Real(1) : Real(0);
      CHECK(d(abs(ip - expected)) < 1e-40);
    }
}

TEST_CASE("atom-count limit on the matrix order") {
  const MeasureSpec pair = builtin_r0("two_atom");
  CHECK_NOTHROW(build_hankel(pair, 1));
  CHECK_THROWS_AS(build_hankel(pair, 2), ConfigError);
}

TEST_CASE("smallest-eigenvalue profile of the flat density") {
  const MeasureSpec r0 = builtin_r0("uniform");
  const EigenDecayFit fit = lambda_min_profile(r0, 24);
  REQUIRE(fit.orders.size() == 25);
  const double expected[] = {1.0,         1.0 / 3.0,    0.079316688,
                             0.016577079, 0.0032755566, 0.00062746806};
  for (int p = 0; p <= 5; ++p)
    CHECK(d(fit.lambda_min[p]) ==
          doctest::Approx(expected[p]).epsilon(1e-6));
  // Geometric decay with a subgeometric sqrt(p) correction.
  CHECK(d(fit.lambda_min[24]) == doctest::Approx(3.905e-18).epsilon(1e-2));
  CHECK(fit.rate_r == doctest::Approx(0.171479).epsilon(1e-3));
  CHECK(fit.rate_r > 0.0);
  CHECK(fit.rate_r < 1.0);
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("profile rejects unstandardized input") {
  CHECK_THROWS_AS(lambda_min_profile(builtin_p0("uniform", Real("0.1")), 5),
                  ConfigError);
}

TEST_CASE("factor derivative satisfies its defining equation") {
  // dV must solve dV V^T + V dV^T = dG for any symmetric dG.
  const MeasureSpec r0 = builtin_r0("trunc_gaussian");
  const HankelMatrix g = build_hankel(r0, 6, true);
  const CholeskyFactor v = cholesky(g);
  const OrthoBasis b = invert_lower(v);
  Mat dg(7, 7);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= i; ++j) {
      dg(i, j) = Real(1) / (1 + i + j) - Real(i == j) / 10;
      dg(j, i) = dg(i, j);
    }
  const Mat dv = cholesky_derivative(v, b, dg);
  // Strictly lower-triangular output.
  for (int i = 0; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) CHECK(d(abs(dv(i, j))) == 0);
  const Mat lhs_a = matmul(dv, transpose(v.entries));
  const Mat lhs_b = matmul(v.entries, transpose(dv));
  Mat lhs(7, 7);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) lhs(i, j) = lhs_a(i, j) + lhs_b(i, j);
  CHECK(d(max_abs_diff(lhs, dg)) < 1e-60);
}

TEST_CASE("pivot failure escalation doubles the precision and retries") {
  ScopedPrecision scoped(64);
  const MeasureSpec q = MeasureSpec::gaussian_frequency();
  // Find an order that the 64-bit factorization cannot handle. The moments
  // are recomputed inside the retry, so doubling the precision genuinely
  // repairs the failure.
  int failing = -1;
  for (int j = 8; j <= 160; j += 4) {
    try {
      cholesky(build_hankel(q, j));
    } catch (const PivotFailure&) {
      failing = j;
      break;
    }
  }
  REQUIRE(failing > 0);
  const CholeskyFactor l = escalate_on_pivot_failure(
      [&] { return cholesky(build_hankel(q, failing)); });
  CHECK(l.entries.rows() == failing + 1);
  CHECK(precision_bits() == 64);  // the escalation is scoped
}

TEST_CASE("matrix CSV dump") {
  ensure_directory("test_tmp");
  Mat m(2, 2);
  m(0, 0) = Real(1) / 3;
  m(1, 1) = Real("0.5");
  dump_matrix_csv("test_tmp/matrix.csv", m);
  const std::string text = read_text_file("test_tmp/matrix.csv");
  CHECK(text.find("333333333333") != std::string::npos);  // full precision
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(std::count(text.begin(), text.end(), ',') == 2);
}
