#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "vabench/dataset.hpp"
#include "vabench/matrix.hpp"

namespace vabench {

enum class SciProvenance { RawEstimate, QuantileConverted, FixedConverted };

const char* to_string(SciProvenance p);

/// Cause x symptom matrix of P(symptom = Yes | cause).
struct CondProbMatrix {
  Matrix values;
  SciProvenance provenance = SciProvenance::RawEstimate;

  std::size_t num_causes() const { return values.rows(); }
  std::size_t num_symptoms() const { return values.cols(); }
};

/// InterVA-style level ladder. Values strictly decreasing; reference
/// proportions (when present) give the share of matrix entries per level
/// used by quantile matching.
class LevelTable {
 public:
  LevelTable(std::vector<std::string> labels, std::vector<double> values,
             std::optional<std::vector<double>> reference_proportions = std::nullopt);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<std::vector<double>>& reference_proportions() const {
    return proportions_;
  }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  std::optional<std::vector<double>> proportions_;
};

/// Reads `label,value[,proportion]` lines; `#` starts a comment. Either every
/// line carries a proportion or none does.
LevelTable parse_level_table(std::istream& in);
LevelTable load_level_table(const std::string& path);
/// The ladder shipped in config/levels_default.csv.
LevelTable default_level_table();

enum class LevelDistance { Linear, Log };

LevelDistance parse_level_distance(const std::string& token);

/// Smoothed endorsement probabilities (n_yes + 1) / (n_obs + 2), where n_obs
/// counts non-missing answers among deaths of the cause.
CondProbMatrix estimate_condprob(const Dataset& train);

/// Maps each entry to the nearest ladder value; ties go to the smaller value.
/// The log distance ignores the zero level.
CondProbMatrix convert_fixed(const CondProbMatrix& raw, const LevelTable& levels,
                             LevelDistance distance = LevelDistance::Linear);

/// Assigns levels by rank so that level frequencies match the ladder's
/// reference proportions (cumulative counts rounded to nearest).
CondProbMatrix convert_quantile(const CondProbMatrix& raw, const LevelTable& levels);

}  // namespace vabench
