#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "vabench/classifiers.hpp"
#include "vabench/dataset.hpp"
#include "vabench/metrics.hpp"
#include "vabench/random.hpp"
#include "vabench/sci.hpp"

namespace vabench {

/// Settings shared by every classifier fit in a run.
struct ClassifierSettings {
  LevelTable levels = default_level_table();
  LevelDistance distance = LevelDistance::Linear;
  GibbsConfig gibbs;
  /// InterVA prior over causes; uniform when absent.
  std::optional<std::vector<double>> interva_prior;
};

struct GridConfig {
  std::vector<Algorithm> algorithms = all_algorithms();
  /// 0 runs the unresampled design; R > 0 runs R resampled replicates per cell
  /// plus a mean row.
  std::size_t replications = 0;
  double dirichlet_concentration = 1.0;
  std::uint64_t seed = 1;
  bool include_same_site = true;
  std::size_t jobs = 1;
  ClassifierSettings classifier;

  void validate() const;
};

/// Normalized independent Gamma(concentration, 1) draws.
std::vector<double> sample_dirichlet(double concentration, std::size_t dimension, Rng& rng);

/// Redraws |test| deaths with replacement so the cause mix follows `target`
/// renormalized over the causes present in `test`. Ids get a `#<slot>` suffix.
Dataset resample_test(const Dataset& test, std::span<const double> target, Rng& rng);

/// Models fitted once per training set and reused across test sets.
struct TrainedModels {
  std::optional<TariffModel> tariff;
  std::optional<CondProbMatrix> quantile_sci;
  std::optional<CondProbMatrix> fixed_sci;
};

TrainedModels train_models(const Dataset& train, const std::vector<Algorithm>& algorithms,
                           const ClassifierSettings& settings);

/// Applies a fitted algorithm. `gibbs` carries the chain seed for InSilico variants.
CauseAssignment apply_model(const TrainedModels& models, Algorithm algorithm,
                            const Dataset& test, const ClassifierSettings& settings,
                            const GibbsConfig& gibbs);

/// Fits `algorithm` on `train`, applies it to `test` and scores the result.
MetricsRow run_cell(const Dataset& train, const Dataset& test, Algorithm algorithm,
                    const ClassifierSettings& settings);
MetricsRow run_cell(const Dataset& train, const Dataset& test, const std::string& algorithm,
                    const ClassifierSettings& settings);

/// Number of rows run_grid produces for a dataset with `num_sites` sites.
std::size_t grid_row_count(std::size_t num_sites, const GridConfig& config);

/// The full train-site x test-site x algorithm grid. Rows are ordered by
/// train site, test site, algorithm, then replicate (mean row last). Results
/// do not depend on `jobs`.
std::vector<MetricsRow> run_grid(const Dataset& data, const GridConfig& config);

/// Runs fn(0..n-1) on up to `jobs` threads; rethrows the first exception.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace vabench
