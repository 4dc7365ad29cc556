#pragma once

#include <cstddef>
#include <vector>

#include "idebench/common.hpp"

namespace idebench {

/// Thrown when a Cholesky factorization hits a non-positive pivot.
/// `minor` is the 1-based order of the offending leading minor, the
/// same convention LAPACK uses.
struct NotPositiveDefiniteError : Error {
  NotPositiveDefiniteError(size_t minor_index, const std::string& what)
      : Error(what), minor(minor_index) {}
  size_t minor;
};

/// Dense n-by-n matrix of doubles, row-major. Correlation matrices here
/// are tiny (one row per dataset column), so no fancy storage.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(size_t n) : n_(n), cells_(n * n, 0.0) {}

  static SquareMatrix identity(size_t n) {
    SquareMatrix m(n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  size_t size() const { return n_; }
  double& at(size_t r, size_t c) { return cells_[r * n_ + c]; }
  double at(size_t r, size_t c) const { return cells_[r * n_ + c]; }

 private:
  size_t n_ = 0;
  std::vector<double> cells_;
};

/// Lower-triangular L with L * transpose(L) == m. Throws
/// NotPositiveDefiniteError when a pivot is not strictly positive.
SquareMatrix cholesky(const SquareMatrix& m);

/// y = m * x for a lower-triangular m (upper part ignored).
std::vector<double> lower_triangular_apply(const SquareMatrix& m,
                                           const std::vector<double>& x);

/// Elementwise max |a - b|; both matrices must be the same size.
double max_abs_difference(const SquareMatrix& a, const SquareMatrix& b);

}  // namespace idebench
