#include "vabench/linear_model.hpp"

#include <cmath>

#include "vabench/error.hpp"

namespace vabench {

LeastSquaresFit least_squares(const Matrix& design, std::span<const double> response,
                              const std::vector<std::string>& column_names, double tolerance) {
  const std::size_t n = design.rows();
  const std::size_t p = design.cols();
  if (response.size() != n) throw NumericError("least squares: response length differs from design rows");
  if (column_names.size() != p) throw NumericError("least squares: one name per column required");
  if (p > n) throw NumericError("least squares: more columns than observations");

  Matrix a = design;
  std::vector<double> qty(response.begin(), response.end());
  std::vector<double> diag(p);
  std::vector<std::string> collinear;
  std::vector<double> v(n);

  // r is the next pivot row; collinear columns are recorded and skipped.
  std::size_t r = 0;
  for (std::size_t k = 0; k < p; ++k) {
    double col_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) col_norm += design(i, k) * design(i, k);
    col_norm = std::sqrt(col_norm);
    double sub = 0.0;
    for (std::size_t i = r; i < n; ++i) sub += a(i, k) * a(i, k);
    sub = std::sqrt(sub);
    if (!(col_norm > 0.0) || sub <= tolerance * col_norm) {
      collinear.push_back(column_names[k]);
      continue;
    }

    const double alpha = a(r, k) > 0.0 ? -sub : sub;
    for (std::size_t i = r; i < n; ++i) v[i] = a(i, k);
    v[r] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = r; i < n; ++i) vnorm2 += v[i] * v[i];
    for (std::size_t j = k; j < p; ++j) {
      double dot = 0.0;
      for (std::size_t i = r; i < n; ++i) dot += v[i] * a(i, j);
      const double scale = 2.0 * dot / vnorm2;
      for (std::size_t i = r; i < n; ++i) a(i, j) -= scale * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = r; i < n; ++i) dot += v[i] * qty[i];
    const double scale = 2.0 * dot / vnorm2;
    for (std::size_t i = r; i < n; ++i) qty[i] -= scale * v[i];
    diag[k] = a(r, k);
    ++r;
  }

  if (!collinear.empty()) {
    std::string names;
    for (const auto& c : collinear) names += (names.empty() ? "" : ", ") + c;
    throw NumericError("rank-deficient design; collinear columns: " + names);
  }

  LeastSquaresFit fit;
  fit.rank = p;
  fit.df_residual = n - p;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qty[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= a(k, j) * fit.coefficients[j];
    fit.coefficients[k] = s / diag[k];
  }
  fit.fitted.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double yhat = 0.0;
    for (std::size_t j = 0; j < p; ++j) yhat += design(i, j) * fit.coefficients[j];
    fit.fitted[i] = yhat;
    const double r = response[i] - yhat;
    fit.rss += r * r;
  }
  return fit;
}

}  // namespace vabench
