#include "doctest.h"

#include <cmath>

#include "subdiff/linalg.hpp"

using namespace subdiff;

namespace {

Mat from_rows(int n, const double* a) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Real(a[i * n + j]);
  return m;
}

double d(const Real& x) { return to_double(x); }

}  // namespace

TEST_CASE("matmul and transpose basics") {
  const double a_data[] = {1, 2, 3, 4};
  const double b_data[] = {5, 6, 7, 8};
  const Mat a = from_rows(2, a_data);
  const Mat b = from_rows(2, b_data);
  const Mat c = matmul(a, b);
  CHECK(d(c(0, 0)) == doctest::Approx(19));
  CHECK(d(c(0, 1)) == doctest::Approx(22));
  CHECK(d(c(1, 0)) == doctest::Approx(43));
  CHECK(d(c(1, 1)) == doctest::Approx(50));
  const Mat at = transpose(a);
  CHECK(d(at(0, 1)) == doctest::Approx(3));
  CHECK(d(max_abs(a)) == doctest::Approx(4));
  CHECK(d(max_abs_diff(a, a)) == doctest::Approx(0));
}

TEST_CASE("cholesky of a known SPD matrix") {
  // A = L L^T with L = [[2,0],[1,3]].
  const double a_data[] = {4, 2, 2, 10};
  const Mat a = from_rows(2, a_data);
  const Mat l = cholesky_lower(a);
  CHECK(d(l(0, 0)) == doctest::Approx(2));
  CHECK(d(l(1, 0)) == doctest::Approx(1));
  CHECK(d(l(1, 1)) == doctest::Approx(3));
  CHECK(d(l(0, 1)) == doctest::Approx(0));
  const Mat back = matmul(l, transpose(l));
  CHECK(d(max_abs_diff(back, a)) < 1e-70);
}

TEST_CASE("cholesky rejects indefinite matrices with the pivot index") {
  const double a_data[] = {1, 2, 2, 1};  // eigenvalues 3 and -1
  const Mat a = from_rows(2, a_data);
  CHECK_THROWS_AS(cholesky_lower(a), PivotFailure);
  try {
    cholesky_lower(a);
  } catch (const PivotFailure& e) {
    CHECK(e.index == 1);
  }
}

TEST_CASE("lower-triangular inverse") {
  const double l_data[] = {2, 0, 0, 1, 3, 0, 4, 5, 6};
  const Mat l = from_rows(3, l_data);
  const Mat inv = invert_lower_triangular(l);
  const Mat prod = matmul(l, inv);
  CHECK(d(max_abs_diff(prod, Mat::identity(3))) < 1e-70);
  CHECK(d(inv(0, 1)) == doctest::Approx(0));
  CHECK(d(inv(0, 2)) == doctest::Approx(0));
}

TEST_CASE("jacobi eigenvalues of a known symmetric matrix") {
  // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
  const double a_data[] = {2, 1, 1, 2};
  const auto eig = jacobi_eigenvalues(from_rows(2, a_data));
  REQUIRE(eig.size() == 2);
  CHECK(d(eig[0]) == doctest::Approx(1).epsilon(1e-12));
  CHECK(d(eig[1]) == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("jacobi eigenvalues survive extreme scale separation") {
  // diag(1e-40, 1) rotated by 45 degrees: eigenvalues must come back
  // although the small one underflows double-precision *differences*.
  const Real c = sqrt(Real(1) / 2);
  Mat rot(2, 2);
  rot(0, 0) = c;
  rot(0, 1) = -c;
  rot(1, 0) = c;
  rot(1, 1) = c;
  Mat diag(2, 2);
  diag(0, 0) = Real("1e-40");
  diag(1, 1) = Real(1);
  const Mat a = matmul(rot, matmul(diag, transpose(rot)));
  const auto eig = jacobi_eigenvalues(a);
  CHECK(to_double(log10(eig[0])) == doctest::Approx(-40).epsilon(1e-6));
  CHECK(d(eig[1]) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("precision control changes the working mantissa") {
  CHECK(precision_bits() >= 64);
  {
    ScopedPrecision scoped(512);
    CHECK(precision_bits() == 512);
    const Real third = Real(1) / 3;
    // 512-bit third differs from a 64-bit third in the tail.
    CHECK(to_double(abs(third * 3 - 1)) == doctest::Approx(0));
  }
  CHECK(precision_bits() != 512);
}
