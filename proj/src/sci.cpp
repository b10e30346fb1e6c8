#include "vabench/sci.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "vabench/error.hpp"

namespace vabench {

const char* to_string(SciProvenance p) {
  switch (p) {
    case SciProvenance::RawEstimate: return "raw-estimate";
    case SciProvenance::QuantileConverted: return "quantile-converted";
    case SciProvenance::FixedConverted: return "fixed-converted";
  }
  return "unknown";
}

LevelTable::LevelTable(std::vector<std::string> labels, std::vector<double> values,
                       std::optional<std::vector<double>> reference_proportions)
    : labels_(std::move(labels)),
      values_(std::move(values)),
      proportions_(std::move(reference_proportions)) {
  if (values_.empty()) throw ConfigError("level table is empty");
  if (labels_.size() != values_.size()) throw ConfigError("level labels and values differ in length");
  if (values_.front() > 1.0 || values_.back() < 0.0) {
    throw ConfigError("level values must lie in [0, 1]");
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] < values_[i - 1])) throw ConfigError("level values must be strictly decreasing");
  }
  if (proportions_) {
    if (proportions_->size() != values_.size()) {
      throw ConfigError("reference proportions must have one entry per level");
    }
    double total = 0.0;
    for (double p : *proportions_) {
      if (!(p >= 0.0)) throw ConfigError("reference proportions must be nonnegative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("reference proportions must sum to 1");
  }
}

LevelTable parse_level_table(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<double> proportions;
  std::size_t with_proportion = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(std::remove_if(line.begin(), line.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2 || cells.size() > 3) {
      throw ConfigError("level table line " + std::to_string(line_no) +
                        ": expected label,value[,proportion]");
    }
    try {
      labels.push_back(cells[0]);
      values.push_back(std::stod(cells[1]));
      if (cells.size() == 3) {
        proportions.push_back(std::stod(cells[2]));
        ++with_proportion;
      }
    } catch (const std::logic_error&) {
      throw ConfigError("level table line " + std::to_string(line_no) + ": bad number");
    }
  }
  if (with_proportion != 0 && with_proportion != labels.size()) {
    throw ConfigError("level table: either all lines or none must carry a proportion");
  }
  std::optional<std::vector<double>> props;
  if (with_proportion != 0) props = std::move(proportions);
  return LevelTable(std::move(labels), std::move(values), std::move(props));
}

LevelTable load_level_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open level table '" + path + "'");
  return parse_level_table(in);
}

LevelTable default_level_table() { return load_level_table(VABENCH_DEFAULT_LEVELS); }

LevelDistance parse_level_distance(const std::string& token) {
  if (token == "linear") return LevelDistance::Linear;
  if (token == "log") return LevelDistance::Log;
  throw ConfigError("unknown level distance '" + token + "' (expected linear or log)");
}

CondProbMatrix estimate_condprob(const Dataset& train) {
  const std::size_t C = train.num_causes();
  const std::size_t S = train.num_symptoms();
  Matrix yes(C, S), obs(C, S);
  for (const auto& r : train.records()) {
    if (!r.cause) throw DataError("training record '" + r.id + "' is unlabeled");
    const CauseIndex c = *r.cause;
    for (std::size_t s = 0; s < S; ++s) {
      if (r.symptoms[s] == SymptomValue::Missing) continue;
      obs(c, s) += 1.0;
      if (r.symptoms[s] == SymptomValue::Yes) yes(c, s) += 1.0;
    }
  }
  CondProbMatrix out{Matrix(C, S), SciProvenance::RawEstimate};
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t s = 0; s < S; ++s) out.values(c, s) = (yes(c, s) + 1.0) / (obs(c, s) + 2.0);
  }
  return out;
}

CondProbMatrix convert_fixed(const CondProbMatrix& raw, const LevelTable& levels,
                             LevelDistance distance) {
  if (raw.provenance == SciProvenance::QuantileConverted) {
    throw ConfigError("convert_fixed expects a raw or fixed-converted matrix");
  }
  const auto& ladder = levels.values();
  std::vector<double> log_ladder;
  if (distance == LevelDistance::Log) {
    for (double v : ladder) log_ladder.push_back(v > 0.0 ? std::log(v) : 0.0);
  }
  CondProbMatrix out{raw.values, SciProvenance::FixedConverted};
  for (double& x : out.values.values()) {
    if (distance == LevelDistance::Log && !(x > 0.0)) {
      throw ConfigError("log-distance level conversion requires positive entries");
    }
    const double lx = distance == LevelDistance::Log ? std::log(x) : 0.0;
    double best_value = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      double d;
      if (distance == LevelDistance::Linear) {
        d = std::abs(x - ladder[k]);
      } else {
        if (ladder[k] <= 0.0) continue;
        d = std::abs(lx - log_ladder[k]);
      }
      // Ladder is decreasing, so a later equal-distance level is the smaller value.
      if (d <= best_dist) {
        best_dist = d;
        best_value = ladder[k];
      }
    }
    x = best_value;
  }
  return out;
}

CondProbMatrix convert_quantile(const CondProbMatrix& raw, const LevelTable& levels) {
  if (!levels.reference_proportions()) {
    throw ConfigError("quantile conversion requires reference proportions in the level table");
  }
  if (raw.provenance != SciProvenance::RawEstimate) {
    throw ConfigError("convert_quantile expects a raw-estimate matrix");
  }
  const auto& props = *levels.reference_proportions();
  const auto values = raw.values.values();
  const std::size_t n = values.size();

  // Row-major flat index order equals (cause, symptom) order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  CondProbMatrix out{Matrix(raw.values.rows(), raw.values.cols()),
                     SciProvenance::QuantileConverted};
  auto dst = out.values.values();
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < props.size(); ++k) {
    cumulative += props[k];
    std::size_t end = k + 1 == props.size()
                          ? n
                          : static_cast<std::size_t>(std::llround(cumulative * static_cast<double>(n)));
    end = std::clamp(end, begin, n);
    for (std::size_t i = begin; i < end; ++i) dst[order[i]] = levels.values()[k];
    begin = end;
  }
  return out;
}

}  // namespace vabench
