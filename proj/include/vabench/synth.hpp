#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vabench/dataset.hpp"
#include "vabench/matrix.hpp"

namespace vabench {

struct SynthConfig {
  std::size_t n_sites = 6;
  std::size_t n_causes = 10;
  std::size_t n_symptoms = 40;
  std::size_t deaths_per_site = 1000;
  /// Shared cause x symptom matrix; drawn uniformly on (0.05, 0.95) when absent.
  std::optional<Matrix> base_condprob;
  /// Standard deviation of the per-site, per-entry logit-scale perturbation.
  double site_heterogeneity = 0.0;
  /// Probability that any symptom answer is masked as missing.
  double missingness = 0.0;
  /// One CSMF per site; Dirichlet(1) draws when absent.
  std::optional<std::vector<std::vector<double>>> site_csmfs;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthTruth {
  std::vector<std::string> site_names;
  Matrix base_condprob;
  std::vector<std::vector<double>> site_csmfs;
  std::vector<Matrix> site_condprobs;
};

struct SynthOutput {
  Dataset data;
  SynthTruth truth;
};

/// Sites are named site1..siteK, causes cause01.., symptoms sym001...
/// Every site uses the full cause catalog, even when a cause draws no deaths.
SynthOutput generate(const SynthConfig& config);

}  // namespace vabench
