#pragma once

#include <span>
#include <string>
#include <vector>

#include "vabench/matrix.hpp"

namespace vabench {

struct LeastSquaresFit {
  std::vector<double> coefficients;
  std::vector<double> fitted;
  double rss = 0.0;
  std::size_t rank = 0;
  std::size_t df_residual = 0;
};

/// Least squares by Householder QR. Columns are processed in order; a column
/// whose residual norm after projecting out the earlier columns falls below
/// `tolerance` times its own norm is collinear, and the fit throws
/// NumericError naming every such column.
LeastSquaresFit least_squares(const Matrix& design, std::span<const double> response,
                              const std::vector<std::string>& column_names,
                              double tolerance = 1e-10);

}  // namespace vabench
