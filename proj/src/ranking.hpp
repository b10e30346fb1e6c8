#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "vabench/dataset.hpp"

namespace vabench::detail {

/// Causes sorted by descending score, ties by ascending cause index.
inline std::vector<CauseIndex> rank_by_score(const std::vector<double>& scores) {
  std::vector<CauseIndex> order(scores.size());
  std::iota(order.begin(), order.end(), CauseIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](CauseIndex a, CauseIndex b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace vabench::detail
