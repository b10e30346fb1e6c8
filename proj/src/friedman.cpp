#include <algorithm>
#include <map>
#include <numeric>

#include "vabench/anova.hpp"
#include "vabench/error.hpp"
#include "vabench/special_functions.hpp"

namespace vabench {

FriedmanResult friedman_test(const Matrix& table) {
  const std::size_t n = table.rows();
  const std::size_t k = table.cols();
  if (k < 2) throw ConfigError("Friedman test needs at least two treatments");
  if (n < 1) throw ConfigError("Friedman test needs at least one block");

  std::vector<double> rank_sum(k, 0.0);
  std::vector<std::size_t> order(k);
  for (std::size_t b = 0; b < n; ++b) {
    const auto row = table.row(b);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return row[a] < row[c]; });
    for (std::size_t i = 0; i < k;) {
      std::size_t j = i;
      while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
      const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) rank_sum[order[t]] += mid;
      i = j + 1;
    }
  }

  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double dev = 0.0;
  for (double s : rank_sum) {
    const double d = s / nd - (kd + 1.0) / 2.0;
    dev += d * d;
  }
  FriedmanResult out;
  out.statistic = 12.0 * nd / (kd * (kd + 1.0)) * dev;
  out.df = k - 1;
  out.p = chisq_upper_tail(out.statistic, static_cast<double>(out.df));
  out.blocks = n;
  out.treatments = k;
  return out;
}

FriedmanResult friedman_test(const std::vector<MetricsRow>& rows, Metric metric,
                             Factor treatment, Factor block) {
  if (treatment == block) throw ConfigError("Friedman treatment and block factors must differ");
  auto level = [](const MetricsRow& r, Factor f) -> std::string {
    switch (f) {
      case Factor::TrainSite: return r.train_site;
      case Factor::TestSite: return r.test_site;
      case Factor::Algorithm: return to_string(r.algorithm);
      case Factor::SameSite: return r.train_site == r.test_site ? "1" : "0";
    }
    return {};
  };
  std::vector<std::string> treatments, blocks;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (const auto& r : rows) {
    const std::string t = level(r, treatment);
    const std::string b = level(r, block);
    if (std::find(treatments.begin(), treatments.end(), t) == treatments.end()) treatments.push_back(t);
    if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) blocks.push_back(b);
    if (!cells.emplace(std::make_pair(b, t), metric_value(r, metric)).second) {
      throw DataError("Friedman test: duplicate observation for treatment '" + t + "', block '" + b + "'");
    }
  }
  if (cells.size() != treatments.size() * blocks.size()) {
    throw DataError("Friedman test: incomplete block design");
  }
  Matrix table(blocks.size(), treatments.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t t = 0; t < treatments.size(); ++t) table(b, t) = cells.at({blocks[b], treatments[t]});
  }
  return friedman_test(table);
}

}  // namespace vabench
