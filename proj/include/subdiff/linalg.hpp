#pragma once

#include <vector>

#include "subdiff/real.hpp"

namespace subdiff {

// Dense extended-precision matrix, row-major. Small and immutable-by-use:
// every factorization returns a fresh matrix.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
    for (auto& v : a_) v = Real(0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Real& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Real& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  static Mat identity(int n);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Real> a_;
};

// Cholesky pivot loss: the matrix is not numerically positive-definite at
// the given leading index, typically because the working precision has been
// exhausted by the geometric eigenvalue decay.
struct PivotFailure : NumericError {
  int index;
  explicit PivotFailure(int idx)
      : NumericError("cholesky pivot not positive at index " +
                     std::to_string(idx) +
                     " (precision or order limit reached)"),
        index(idx) {}
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Real max_abs(const Mat& a);
Real max_abs_diff(const Mat& a, const Mat& b);

// Column-by-column Cholesky factorization of a symmetric positive-definite
// matrix; returns lower-triangular L with L*L^T = h. Throws PivotFailure.
Mat cholesky_lower(const Mat& h);

// Inverse of a lower-triangular matrix with positive diagonal, by forward
// substitution; the result is again lower-triangular.
Mat invert_lower_triangular(const Mat& l);

// Eigenvalues of a symmetric matrix by the cyclic Jacobi rotation method in
// extended precision, returned in ascending order. Robust for positive-
// definite matrices whose smallest eigenvalue underflows double precision.
std::vector<Real> jacobi_eigenvalues(const Mat& a, int max_sweeps = 60);

}  // namespace subdiff
