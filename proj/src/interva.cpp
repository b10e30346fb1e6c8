#include <algorithm>
#include <cmath>
#include <limits>

#include "ranking.hpp"
#include "vabench/classifiers.hpp"
#include "vabench/error.hpp"

namespace vabench {

CauseAssignment interva_assign(const CondProbMatrix& sci, std::span<const double> prior,
                               const Dataset& test) {
  Algorithm algorithm;
  switch (sci.provenance) {
    case SciProvenance::QuantileConverted: algorithm = Algorithm::InterVaQ; break;
    case SciProvenance::FixedConverted: algorithm = Algorithm::InterVaF; break;
    default: throw ConfigError("interva_assign requires a level-converted SCI");
  }
  const std::size_t C = sci.num_causes();
  const std::size_t S = sci.num_symptoms();
  if (test.num_causes() != C || test.num_symptoms() != S) {
    throw DataError("interva_assign: SCI shape does not match the test catalogs");
  }
  if (prior.size() != C) throw ConfigError("interva_assign: prior length differs from cause count");
  double prior_total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("interva_assign: prior must be nonnegative and finite");
    prior_total += p;
  }
  if (!(prior_total > 0.0)) throw ConfigError("interva_assign: prior has zero mass");

  Matrix log_sci(C, S);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t s = 0; s < S; ++s) {
      const double v = sci.values(c, s);
      log_sci(c, s) = v > 0.0 ? std::log(v) : 0.0;
    }
  }
  std::vector<double> log_prior(C);
  for (std::size_t c = 0; c < C; ++c) log_prior[c] = std::log(prior[c] / prior_total);

  CauseAssignment out;
  out.algorithm = algorithm;
  out.scores.reserve(test.size());
  out.ranking.reserve(test.size());
  std::vector<double> log_score(C);
  std::vector<std::size_t> zero_hits(C);
  for (const auto& r : test.records()) {
    std::copy(log_prior.begin(), log_prior.end(), log_score.begin());
    std::fill(zero_hits.begin(), zero_hits.end(), 0);
    for (std::size_t s = 0; s < S; ++s) {
      if (r.symptoms[s] != SymptomValue::Yes) continue;
      for (std::size_t c = 0; c < C; ++c) {
        if (sci.values(c, s) > 0.0) {
          log_score[c] += log_sci(c, s);
        } else {
          ++zero_hits[c];
        }
      }
    }
    // A zero entry on an endorsed symptom excludes the cause. If every cause
    // with prior mass is excluded, keep those with the fewest zero hits.
    std::size_t min_hits = std::numeric_limits<std::size_t>::max();
    for (std::size_t c = 0; c < C; ++c) {
      if (prior[c] > 0.0) min_hits = std::min(min_hits, zero_hits[c]);
    }
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < C; ++c) {
      if (prior[c] > 0.0 && zero_hits[c] == min_hits) max_log = std::max(max_log, log_score[c]);
    }
    std::vector<double> posterior(C, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      if (prior[c] > 0.0 && zero_hits[c] == min_hits) {
        posterior[c] = std::exp(log_score[c] - max_log);
        total += posterior[c];
      }
    }
    for (double& p : posterior) p /= total;
    out.ranking.push_back(detail::rank_by_score(posterior));
    out.scores.push_back(std::move(posterior));
  }
  out.csmf_estimate = top_cause_fractions(out.ranking, C);
  return out;
}

CauseAssignment interva_assign(const CondProbMatrix& sci, const Dataset& test) {
  const std::vector<double> uniform(sci.num_causes(), 1.0);
  return interva_assign(sci, uniform, test);
}

}  // namespace vabench
