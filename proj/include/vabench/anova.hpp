#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vabench/linear_model.hpp"
#include "vabench/metrics.hpp"

namespace vabench {

enum class Metric { Ccc, CsmfAccuracy, Top1, Top3 };

/// Tokens match the results CSV columns: ccc, csmf_acc, top1, top3.
const char* to_string(Metric m);
Metric parse_metric(const std::string& token);
const std::vector<Metric>& all_metrics();
double metric_value(const MetricsRow& row, Metric metric);

enum class Factor { TrainSite, TestSite, Algorithm, SameSite };

/// Tokens: train_site, test_site, algorithm, same_site.
const char* to_string(Factor f);

/// Ordered factor list for an additive model with treatment coding (first
/// observed level of each factor is the baseline).
struct FactorSpec {
  std::vector<Factor> factors{Factor::TrainSite, Factor::TestSite, Factor::Algorithm,
                              Factor::SameSite};
  /// When false, rows with train site == test site are dropped before fitting.
  bool include_same_site_rows = true;

  void validate() const;
};

struct FittedModel {
  std::vector<std::string> column_names;
  std::vector<double> coefficients;
  double rss = 0.0;
  std::size_t n = 0;
  std::size_t df_residual = 0;
};

/// Intercept plus dummy columns, in factor-list order. Throws NumericError when a
/// factor has a single level (it is collinear with the intercept).
struct DesignMatrix {
  Matrix x;
  std::vector<double> y;
  std::vector<std::string> column_names;
  /// Column range [begin, end) per factor, aligned with the factor list.
  std::vector<std::pair<std::size_t, std::size_t>> factor_columns;
};

std::vector<MetricsRow> apply_row_filter(const std::vector<MetricsRow>& rows, const FactorSpec& spec);
DesignMatrix build_design(const std::vector<MetricsRow>& rows, Metric metric, const FactorSpec& spec);

FittedModel fit_ols(const std::vector<MetricsRow>& rows, Metric metric, const FactorSpec& spec);

struct AnovaTerm {
  Factor factor;
  std::size_t df = 0;
  double ss = 0.0;
  double proportion = 0.0;
  double f = 0.0;
  double p = 1.0;
};

struct AnovaReport {
  Metric metric = Metric::Ccc;
  std::vector<AnovaTerm> terms;
  double residual_ss = 0.0;
  std::size_t residual_df = 0;
  double total_ss = 0.0;
  std::size_t n = 0;

  const AnovaTerm* term(Factor f) const;
};

/// Type-I decomposition: factors are added one group at a time in factor-list order,
/// each group's SS being the drop in residual SS.
AnovaReport anova_sequential(const std::vector<MetricsRow>& rows, Metric metric,
                             const FactorSpec& spec);

// ---------------------------------------------------------------------------
// Experiment presets
//
//   1: unresampled rows, all train/test pairs, same-site indicator included
//   2: replicate-mean rows, all pairs, same-site indicator included
//   3: unresampled rows without same-site pairs, no indicator
//   4: replicate-mean rows without same-site pairs, no indicator
//
// Per-test-site variants fit train_site + algorithm within one test site.

/// Rows an experiment uses (replicate and same-site filters applied).
std::vector<MetricsRow> experiment_rows(const std::vector<MetricsRow>& rows, int experiment);
FactorSpec experiment_spec(int experiment, bool per_test_site = false);

// ---------------------------------------------------------------------------
// Friedman rank test

struct FriedmanResult {
  double statistic = 0.0;
  std::size_t df = 0;
  double p = 1.0;
  std::size_t blocks = 0;
  std::size_t treatments = 0;
};

/// Mid-ranks within each row of a blocks x treatments table.
FriedmanResult friedman_test(const Matrix& table);

/// Builds the complete block table from metric rows. Every (treatment, block)
/// pair must occur exactly once.
FriedmanResult friedman_test(const std::vector<MetricsRow>& rows, Metric metric,
                             Factor treatment, Factor block);

}  // namespace vabench
