#include "vabench/anova.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "vabench/error.hpp"
#include "vabench/special_functions.hpp"

namespace vabench {

namespace {

constexpr std::array<std::pair<Metric, const char*>, 4> kMetricTokens{{
    {Metric::Ccc, "ccc"},
    {Metric::CsmfAccuracy, "csmf_acc"},
    {Metric::Top1, "top1"},
    {Metric::Top3, "top3"},
}};

std::string level_of(const MetricsRow& row, Factor f) {
  switch (f) {
    case Factor::TrainSite: return row.train_site;
    case Factor::TestSite: return row.test_site;
    case Factor::Algorithm: return to_string(row.algorithm);
    case Factor::SameSite: return row.train_site == row.test_site ? "1" : "0";
  }
  return {};
}

}  // namespace

const char* to_string(Metric m) {
  for (const auto& [metric, token] : kMetricTokens) {
    if (metric == m) return token;
  }
  return "unknown";
}

Metric parse_metric(const std::string& token) {
  for (const auto& [metric, name] : kMetricTokens) {
    if (token == name) return metric;
  }
  throw ConfigError("unknown metric '" + token + "' (expected ccc, csmf_acc, top1 or top3)");
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> all{Metric::Ccc, Metric::CsmfAccuracy, Metric::Top1,
                                       Metric::Top3};
  return all;
}

double metric_value(const MetricsRow& row, Metric metric) {
  switch (metric) {
    case Metric::Ccc: return row.ccc;
    case Metric::CsmfAccuracy: return row.csmf_accuracy;
    case Metric::Top1: return row.top1;
    case Metric::Top3: return row.top3;
  }
  return 0.0;
}

const char* to_string(Factor f) {
  switch (f) {
    case Factor::TrainSite: return "train_site";
    case Factor::TestSite: return "test_site";
    case Factor::Algorithm: return "algorithm";
    case Factor::SameSite: return "same_site";
  }
  return "unknown";
}

void FactorSpec::validate() const {
  if (factors.empty()) throw ConfigError("factor list is empty");
  std::set<Factor> seen;
  for (Factor f : factors) {
    if (!seen.insert(f).second) throw ConfigError(std::string("duplicate factor ") + to_string(f));
  }
  if (seen.count(Factor::SameSite) &&
      !(seen.count(Factor::TrainSite) && seen.count(Factor::TestSite))) {
    throw ConfigError("same_site indicator requires both train_site and test_site factors");
  }
}

std::vector<MetricsRow> apply_row_filter(const std::vector<MetricsRow>& rows, const FactorSpec& spec) {
  if (spec.include_same_site_rows) return rows;
  std::vector<MetricsRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [](const MetricsRow& r) { return r.train_site != r.test_site; });
  return out;
}

DesignMatrix build_design(const std::vector<MetricsRow>& input, Metric metric,
                          const FactorSpec& spec) {
  spec.validate();
  const std::vector<MetricsRow> rows = apply_row_filter(input, spec);
  if (rows.empty()) throw NumericError("no rows to fit");

  DesignMatrix d;
  d.column_names.push_back("(intercept)");
  std::vector<std::vector<std::string>> levels(spec.factors.size());
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const Factor factor = spec.factors[f];
    const std::size_t begin = d.column_names.size();
    if (factor == Factor::SameSite) {
      d.column_names.push_back("same_site");
    } else {
      for (const auto& r : rows) {
        std::string level = level_of(r, factor);
        if (std::find(levels[f].begin(), levels[f].end(), level) == levels[f].end()) {
          levels[f].push_back(std::move(level));
        }
      }
      if (levels[f].size() < 2) {
        throw NumericError(std::string("rank-deficient design; factor ") + to_string(factor) +
                           " has a single level and is collinear with the intercept");
      }
      for (std::size_t l = 1; l < levels[f].size(); ++l) {
        d.column_names.push_back(std::string(to_string(factor)) + "[" + levels[f][l] + "]");
      }
    }
    d.factor_columns.emplace_back(begin, d.column_names.size());
  }

  d.x = Matrix(rows.size(), d.column_names.size(), 0.0);
  d.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.x(i, 0) = 1.0;
    d.y.push_back(metric_value(rows[i], metric));
    for (std::size_t f = 0; f < spec.factors.size(); ++f) {
      const Factor factor = spec.factors[f];
      const auto [begin, end] = d.factor_columns[f];
      if (factor == Factor::SameSite) {
        d.x(i, begin) = rows[i].train_site == rows[i].test_site ? 1.0 : 0.0;
        continue;
      }
      const std::string level = level_of(rows[i], factor);
      const auto pos = static_cast<std::size_t>(
          std::find(levels[f].begin(), levels[f].end(), level) - levels[f].begin());
      if (pos > 0) d.x(i, begin + pos - 1) = 1.0;
    }
  }
  return d;
}

FittedModel fit_ols(const std::vector<MetricsRow>& rows, Metric metric, const FactorSpec& spec) {
  const DesignMatrix d = build_design(rows, metric, spec);
  const LeastSquaresFit fit = least_squares(d.x, d.y, d.column_names);
  FittedModel out;
  out.column_names = d.column_names;
  out.coefficients = fit.coefficients;
  out.rss = fit.rss;
  out.n = d.y.size();
  out.df_residual = fit.df_residual;
  return out;
}

const AnovaTerm* AnovaReport::term(Factor f) const {
  for (const auto& t : terms) {
    if (t.factor == f) return &t;
  }
  return nullptr;
}

namespace {

Matrix leading_columns(const Matrix& x, std::size_t cols) {
  Matrix out(x.rows(), cols);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = x(i, j);
  }
  return out;
}

}  // namespace

AnovaReport anova_sequential(const std::vector<MetricsRow>& rows, Metric metric,
                             const FactorSpec& spec) {
  const DesignMatrix d = build_design(rows, metric, spec);
  const std::size_t n = d.y.size();

  // The full fit validates rank before any nested fit is used.
  const LeastSquaresFit full = least_squares(d.x, d.y, d.column_names);
  if (full.df_residual == 0) throw NumericError("ANOVA: no residual degrees of freedom");

  AnovaReport report;
  report.metric = metric;
  report.n = n;
  const double mean = std::accumulate(d.y.begin(), d.y.end(), 0.0) / static_cast<double>(n);
  for (double v : d.y) report.total_ss += (v - mean) * (v - mean);

  double rss_before = report.total_ss;
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const std::size_t cols = d.factor_columns[f].second;
    const std::vector<std::string> names(d.column_names.begin(),
                                         d.column_names.begin() + static_cast<std::ptrdiff_t>(cols));
    const double rss_after = f + 1 == spec.factors.size()
                                 ? full.rss
                                 : least_squares(leading_columns(d.x, cols), d.y, names).rss;
    AnovaTerm term;
    term.factor = spec.factors[f];
    term.df = d.factor_columns[f].second - d.factor_columns[f].first;
    term.ss = rss_before - rss_after;
    report.terms.push_back(term);
    rss_before = rss_after;
  }
  report.residual_ss = full.rss;
  report.residual_df = full.df_residual;

  const double mse = report.residual_ss / static_cast<double>(report.residual_df);
  for (auto& t : report.terms) {
    t.proportion = report.total_ss > 0.0 ? std::clamp(t.ss / report.total_ss, 0.0, 1.0) : 0.0;
    const double ms = std::max(t.ss, 0.0) / static_cast<double>(t.df);
    if (ms <= 0.0) {
      t.f = 0.0;
      t.p = 1.0;
    } else if (mse <= 0.0) {
      t.f = std::numeric_limits<double>::infinity();
      t.p = 0.0;
    } else {
      t.f = ms / mse;
      t.p = f_upper_tail(t.f, static_cast<double>(t.df), static_cast<double>(report.residual_df));
    }
  }
  return report;
}

std::vector<MetricsRow> experiment_rows(const std::vector<MetricsRow>& rows, int experiment) {
  if (experiment < 1 || experiment > 4) throw ConfigError("experiment must be 1, 2, 3 or 4");
  const int replicate = (experiment == 1 || experiment == 3) ? 0 : -1;
  const bool keep_same_site = experiment <= 2;
  std::vector<MetricsRow> out;
  for (const auto& r : rows) {
    if (r.replicate != replicate) continue;
    if (!keep_same_site && r.train_site == r.test_site) continue;
    out.push_back(r);
  }
  return out;
}

FactorSpec experiment_spec(int experiment, bool per_test_site) {
  if (experiment < 1 || experiment > 4) throw ConfigError("experiment must be 1, 2, 3 or 4");
  FactorSpec spec;
  spec.include_same_site_rows = experiment <= 2;
  if (per_test_site) {
    spec.factors = {Factor::TrainSite, Factor::Algorithm};
  } else if (experiment <= 2) {
    spec.factors = {Factor::TrainSite, Factor::TestSite, Factor::Algorithm, Factor::SameSite};
  } else {
    spec.factors = {Factor::TrainSite, Factor::TestSite, Factor::Algorithm};
  }
  return spec;
}

}  // namespace vabench
