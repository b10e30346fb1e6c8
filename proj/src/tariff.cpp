#include <algorithm>
#include <cmath>
#include <numeric>

#include "vabench/classifiers.hpp"
#include "vabench/error.hpp"

namespace vabench {

double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw NumericError("quantile of an empty sequence");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Matrix tariffs_from_endorsement(const Matrix& endorsement, const std::vector<bool>& retained) {
  const std::size_t C = endorsement.rows();
  const std::size_t S = endorsement.cols();
  Matrix tariffs(C, S, 0.0);
  std::vector<double> column;
  for (std::size_t s = 0; s < S; ++s) {
    column.clear();
    for (std::size_t c = 0; c < C; ++c) {
      if (retained[c]) column.push_back(endorsement(c, s));
    }
    if (column.empty()) continue;
    std::sort(column.begin(), column.end());
    const double median = interpolated_quantile(column, 0.5);
    const double iqr = interpolated_quantile(column, 0.75) - interpolated_quantile(column, 0.25);
    if (!(iqr > 0.0)) continue;
    for (std::size_t c = 0; c < C; ++c) {
      if (!retained[c]) continue;
      tariffs(c, s) = std::round(2.0 * (endorsement(c, s) - median) / iqr) / 2.0;
    }
  }
  return tariffs;
}

namespace {

// Score of one death against every cause: sum of tariffs over endorsed symptoms.
std::vector<double> death_scores(const Matrix& tariffs, const DeathRecord& r) {
  std::vector<double> out(tariffs.rows(), 0.0);
  for (std::size_t s = 0; s < r.symptoms.size(); ++s) {
    if (r.symptoms[s] != SymptomValue::Yes) continue;
    for (std::size_t c = 0; c < tariffs.rows(); ++c) out[c] += tariffs(c, s);
  }
  return out;
}

// Mid-rank fraction of `sorted` lying below `x`.
double midrank_percentile(const std::vector<double>& sorted, double x) {
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
  const auto hi = std::upper_bound(lo, sorted.end(), x);
  const double below = static_cast<double>(lo - sorted.begin());
  const double equal = static_cast<double>(hi - lo);
  return (below + 0.5 * equal) / static_cast<double>(sorted.size());
}

}  // namespace

TariffModel tariff_fit(const Dataset& train) {
  const std::size_t C = train.num_causes();
  const std::size_t S = train.num_symptoms();
  Matrix yes(C, S), obs(C, S);
  std::vector<std::size_t> deaths(C, 0);
  for (const auto& r : train.records()) {
    if (!r.cause) throw DataError("training record '" + r.id + "' is unlabeled");
    ++deaths[*r.cause];
    for (std::size_t s = 0; s < S; ++s) {
      if (r.symptoms[s] == SymptomValue::Missing) continue;
      obs(*r.cause, s) += 1.0;
      if (r.symptoms[s] == SymptomValue::Yes) yes(*r.cause, s) += 1.0;
    }
  }
  if (train.empty()) throw DataError("tariff_fit: empty training set");

  TariffModel model;
  model.symptom_names = train.symptom_names();
  model.retained.resize(C);
  Matrix endorsement(C, S, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    model.retained[c] = deaths[c] > 0;
    for (std::size_t s = 0; s < S; ++s) {
      if (obs(c, s) > 0.0) endorsement(c, s) = yes(c, s) / obs(c, s);
    }
  }
  model.tariffs = tariffs_from_endorsement(endorsement, model.retained);

  model.train_score_distributions.assign(C, {});
  for (auto& dist : model.train_score_distributions) dist.reserve(train.size());
  for (const auto& r : train.records()) {
    const auto scores = death_scores(model.tariffs, r);
    for (std::size_t c = 0; c < C; ++c) model.train_score_distributions[c].push_back(scores[c]);
  }
  for (auto& dist : model.train_score_distributions) std::sort(dist.begin(), dist.end());
  return model;
}

CauseAssignment tariff_assign(const TariffModel& model, const Dataset& test) {
  if (test.symptom_names() != model.symptom_names) {
    throw DataError("tariff_assign: test symptom catalog does not match the model");
  }
  const std::size_t C = model.tariffs.rows();
  if (test.num_causes() != C) throw DataError("tariff_assign: cause catalog size mismatch");

  CauseAssignment out;
  out.algorithm = Algorithm::Tariff;
  out.scores.reserve(test.size());
  out.ranking.reserve(test.size());
  std::vector<CauseIndex> order(C);
  for (const auto& r : test.records()) {
    const auto raw = death_scores(model.tariffs, r);
    std::vector<double> pct(C);
    for (std::size_t c = 0; c < C; ++c) {
      pct[c] = model.retained[c] ? midrank_percentile(model.train_score_distributions[c], raw[c])
                                 : -1.0;
    }
    std::iota(order.begin(), order.end(), CauseIndex{0});
    std::sort(order.begin(), order.end(), [&](CauseIndex a, CauseIndex b) {
      if (pct[a] != pct[b]) return pct[a] > pct[b];
      if (raw[a] != raw[b]) return raw[a] > raw[b];
      return a < b;
    });
    out.scores.push_back(std::move(pct));
    out.ranking.push_back(order);
  }
  out.csmf_estimate = top_cause_fractions(out.ranking, C);
  return out;
}

}  // namespace vabench
