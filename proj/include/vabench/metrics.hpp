#pragma once

#include <span>
#include <string>
#include <vector>

#include "vabench/classifiers.hpp"
#include "vabench/dataset.hpp"

namespace vabench {

/// One experiment-grid cell's four metric values.
struct MetricsRow {
  std::string train_site;
  std::string test_site;
  Algorithm algorithm = Algorithm::Tariff;
  /// 0 = unresampled, 1..R = resampled replicate, -1 = mean over replicates.
  int replicate = 0;
  double ccc = 0.0;
  double csmf_accuracy = 0.0;
  double top1 = 0.0;
  double top3 = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

/// Chance-corrected concordance for one cause: rescaled recall of the top
/// assignment. Throws if the test set has no deaths of that cause.
double ccc_cause(const CauseAssignment& assignment, const Dataset& truth, CauseIndex cause);

/// Unweighted mean of ccc_cause over causes present in the test set.
double ccc_overall(const CauseAssignment& assignment, const Dataset& truth);

/// 1 - sum|true - pred| / (2 (1 - min true)), clamped to [0, 1].
double csmf_accuracy(std::span<const double> true_csmf, std::span<const double> pred_csmf);

/// Fraction of deaths whose true cause is among the first k ranked causes.
double topk_accuracy(const CauseAssignment& assignment, const Dataset& truth, std::size_t k);

/// All four metrics; the CSMF comparison uses the algorithm's own estimate.
MetricsRow compute_metrics(const CauseAssignment& assignment, const Dataset& truth);

}  // namespace vabench
