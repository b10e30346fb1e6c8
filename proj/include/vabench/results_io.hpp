#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vabench/anova.hpp"
#include "vabench/metrics.hpp"
#include "vabench/synth.hpp"

namespace vabench {

inline constexpr const char* kMetricsHeader =
    "train_site,test_site,algorithm,replicate,ccc,csmf_acc,top1,top3";

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<MetricsRow> load_metrics_csv(const std::string& path);

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthConfig& config);
nlohmann::json to_json(const SynthTruth& truth);

nlohmann::json to_json(const AnovaReport& report);
nlohmann::json to_json(const FriedmanResult& result);

/// Flat rows for plotting: experiment,metric,scope,term,df,ss,proportion,f,p.
struct FlatAnovaRow {
  int experiment = 0;
  std::string metric;
  std::string scope;
  std::string term;
  std::size_t df = 0;
  double ss = 0.0;
  double proportion = 0.0;
  double f = 0.0;
  double p = 1.0;
};
void append_flat_rows(std::vector<FlatAnovaRow>& out, int experiment, const std::string& scope,
                      const AnovaReport& report);
void write_flat_anova_csv(std::ostream& out, const std::vector<FlatAnovaRow>& rows);

}  // namespace vabench
