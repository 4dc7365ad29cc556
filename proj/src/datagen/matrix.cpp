#include "idebench/datagen/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace idebench {

SquareMatrix cholesky(const SquareMatrix& m) {
  const size_t n = m.size();
  SquareMatrix chol(n);
  for (size_t j = 0; j < n; ++j) {
    double diag = m.at(j, j);
    for (size_t k = 0; k < j; ++k) diag -= chol.at(j, k) * chol.at(j, k);
    if (!(diag > 0.0)) {
      throw NotPositiveDefiniteError(
          j + 1, "matrix is not positive definite: leading minor of order " +
                     std::to_string(j + 1) + " has pivot " +
                     format_double(diag));
    }
    chol.at(j, j) = std::sqrt(diag);
    for (size_t i = j + 1; i < n; ++i) {
      double sum = m.at(i, j);
      for (size_t k = 0; k < j; ++k) sum -= chol.at(i, k) * chol.at(j, k);
      chol.at(i, j) = sum / chol.at(j, j);
    }
  }
  return chol;
}

std::vector<double> lower_triangular_apply(const SquareMatrix& m,
                                           const std::vector<double>& x) {
  const size_t n = m.size();
  std::vector<double> y(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t j = 0; j <= i; ++j) sum += m.at(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

double max_abs_difference(const SquareMatrix& a, const SquareMatrix& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      worst = std::max(worst, std::fabs(a.at(i, j) - b.at(i, j)));
  return worst;
}

}  // namespace idebench
