#include "vabench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "vabench/error.hpp"

namespace vabench {

namespace {

void check_alignment(const CauseAssignment& assignment, const Dataset& truth) {
  if (assignment.ranking.size() != truth.size()) {
    throw DataError("assignment covers " + std::to_string(assignment.ranking.size()) +
                    " deaths but the test set has " + std::to_string(truth.size()));
  }
  if (truth.empty()) throw DataError("metrics require at least one labeled death");
  for (const auto& r : truth.records()) {
    if (!r.cause) throw DataError("metrics require labeled deaths; '" + r.id + "' is unlabeled");
  }
}

double chance_corrected(double recall, std::size_t num_causes) {
  const double chance = 1.0 / static_cast<double>(num_causes);
  return (recall - chance) / (1.0 - chance);
}

}  // namespace

double ccc_cause(const CauseAssignment& assignment, const Dataset& truth, CauseIndex cause) {
  check_alignment(assignment, truth);
  std::size_t total = 0, correct = 0;
  for (std::size_t d = 0; d < truth.size(); ++d) {
    if (*truth.records()[d].cause != cause) continue;
    ++total;
    if (assignment.ranking[d].front() == cause) ++correct;
  }
  if (total == 0) {
    throw DataError("CCC undefined for cause '" + truth.cause_names().at(cause) +
                    "': no deaths of that cause in the test set");
  }
  return chance_corrected(static_cast<double>(correct) / static_cast<double>(total),
                          truth.num_causes());
}

double ccc_overall(const CauseAssignment& assignment, const Dataset& truth) {
  check_alignment(assignment, truth);
  const std::size_t C = truth.num_causes();
  std::vector<std::size_t> total(C, 0), correct(C, 0);
  for (std::size_t d = 0; d < truth.size(); ++d) {
    const CauseIndex c = *truth.records()[d].cause;
    ++total[c];
    if (assignment.ranking[d].front() == c) ++correct[c];
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < C; ++c) {
    if (total[c] == 0) continue;
    sum += chance_corrected(static_cast<double>(correct[c]) / static_cast<double>(total[c]), C);
    ++present;
  }
  return sum / static_cast<double>(present);
}

double csmf_accuracy(std::span<const double> true_csmf, std::span<const double> pred_csmf) {
  if (true_csmf.size() != pred_csmf.size()) {
    throw ConfigError("csmf_accuracy: vectors have unequal length");
  }
  if (true_csmf.empty()) throw ConfigError("csmf_accuracy: empty CSMF vectors");
  double abs_err = 0.0;
  for (std::size_t c = 0; c < true_csmf.size(); ++c) abs_err += std::abs(true_csmf[c] - pred_csmf[c]);
  const double min_true = *std::min_element(true_csmf.begin(), true_csmf.end());
  const double denom = 2.0 * (1.0 - min_true);
  if (!(denom > 0.0)) {
    throw NumericError("csmf_accuracy: true CSMF is a point mass on the only cause");
  }
  return std::clamp(1.0 - abs_err / denom, 0.0, 1.0);
}

double topk_accuracy(const CauseAssignment& assignment, const Dataset& truth, std::size_t k) {
  check_alignment(assignment, truth);
  if (k == 0 || k > truth.num_causes()) {
    throw ConfigError("topk_accuracy: k must be in 1..C");
  }
  std::size_t hits = 0;
  for (std::size_t d = 0; d < truth.size(); ++d) {
    const auto& r = assignment.ranking[d];
    const auto end = r.begin() + static_cast<std::ptrdiff_t>(std::min(k, r.size()));
    if (std::find(r.begin(), end, *truth.records()[d].cause) != end) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

MetricsRow compute_metrics(const CauseAssignment& assignment, const Dataset& truth) {
  MetricsRow row;
  row.algorithm = assignment.algorithm;
  row.ccc = ccc_overall(assignment, truth);
  row.csmf_accuracy = csmf_accuracy(empirical_csmf(truth), assignment.csmf_estimate);
  row.top1 = topk_accuracy(assignment, truth, 1);
  row.top3 = topk_accuracy(assignment, truth, std::min<std::size_t>(3, truth.num_causes()));
  return row;
}

}  // namespace vabench
