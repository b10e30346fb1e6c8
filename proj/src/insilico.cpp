#include <algorithm>
#include <cmath>
#include <limits>

#include "ranking.hpp"
#include "vabench/classifiers.hpp"
#include "vabench/error.hpp"
#include "vabench/random.hpp"

namespace vabench {

void GibbsConfig::validate() const {
  if (iterations == 0) throw ConfigError("Gibbs iterations must be positive");
  if (burn_in >= iterations) throw ConfigError("Gibbs burn-in must be smaller than iterations");
  if (!(dirichlet_prior > 0.0) || !std::isfinite(dirichlet_prior)) {
    throw ConfigError("Dirichlet prior concentration must be positive");
  }
}

GibbsResult run_gibbs(const Matrix& condprob, const Dataset& test, const GibbsConfig& config) {
  config.validate();
  if (test.empty()) throw DataError("Gibbs sampler: empty test set");
  const std::size_t C = condprob.rows();
  const std::size_t S = condprob.cols();
  const std::size_t N = test.size();
  if (test.num_symptoms() != S || test.num_causes() != C) {
    throw DataError("Gibbs sampler: SCI shape does not match the test catalogs");
  }

  Matrix log_yes(C, S), log_no(C, S);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t s = 0; s < S; ++s) {
      const double p = std::clamp(condprob(c, s), kGibbsClamp, 1.0 - kGibbsClamp);
      log_yes(c, s) = std::log(p);
      log_no(c, s) = std::log1p(-p);
    }
  }

  // Per-death likelihood up to a per-death constant: lik(i, c) = exp(ll - max_c ll).
  Matrix lik(N, C);
  Matrix loglik(N, C);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& sym = test.records()[i].symptoms;
    auto ll = loglik.row(i);
    for (std::size_t s = 0; s < S; ++s) {
      if (sym[s] == SymptomValue::Missing) continue;
      const Matrix& table = sym[s] == SymptomValue::Yes ? log_yes : log_no;
      for (std::size_t c = 0; c < C; ++c) ll[c] += table(c, s);
    }
    const double mx = *std::max_element(ll.begin(), ll.end());
    for (std::size_t c = 0; c < C; ++c) lik(i, c) = std::exp(ll[c] - mx);
  }

  Rng rng(config.seed);
  std::vector<double> pi(C, 1.0 / static_cast<double>(C));
  std::vector<double> counts(C);
  std::vector<double> weights(C);
  std::vector<double> membership(N * C, 0.0);
  std::vector<double> pi_sum(C, 0.0), pi_sq(C, 0.0);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    const bool keep = it >= config.burn_in;
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      const auto row = lik.row(i);
      double total = 0.0;
      for (std::size_t c = 0; c < C; ++c) {
        weights[c] = pi[c] * row[c];
        total += weights[c];
      }
      if (!(total > 0.0) || !std::isfinite(total)) {
        // Underflow in the scaled product; redo in log space.
        const auto ll = loglik.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < C; ++c) {
          weights[c] = pi[c] > 0.0 ? std::log(pi[c]) + ll[c]
                                   : -std::numeric_limits<double>::infinity();
          mx = std::max(mx, weights[c]);
        }
        total = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
          weights[c] = std::exp(weights[c] - mx);
          total += weights[c];
        }
      }
      const std::size_t y = draw_categorical(weights, total, rng);
      counts[y] += 1.0;
      if (keep) {
        // Rao-Blackwellized membership: accumulate P(y_i = c | pi) rather than the draw.
        double* m = membership.data() + i * C;
        for (std::size_t c = 0; c < C; ++c) m[c] += weights[c] / total;
      }
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      std::gamma_distribution<double> g(config.dirichlet_prior + counts[c], 1.0);
      pi[c] = g(rng);
      sum += pi[c];
    }
    for (double& p : pi) p /= sum;
    if (keep) {
      for (std::size_t c = 0; c < C; ++c) {
        pi_sum[c] += pi[c];
        pi_sq[c] += pi[c] * pi[c];
      }
    }
  }

  const double kept = static_cast<double>(config.iterations - config.burn_in);
  GibbsResult result;
  result.csmf_mean.resize(C);
  result.csmf_sd.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double mean = pi_sum[c] / kept;
    result.csmf_mean[c] = mean;
    result.csmf_sd[c] = std::sqrt(std::max(0.0, pi_sq[c] / kept - mean * mean));
  }
  result.membership.assign(N, std::vector<double>(C));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t c = 0; c < C; ++c) {
      result.membership[i][c] = membership[i * C + c] / kept;
    }
  }
  return result;
}

CauseAssignment insilico_fit(const CondProbMatrix& sci, const Dataset& test,
                             const GibbsConfig& config) {
  Algorithm algorithm;
  switch (sci.provenance) {
    case SciProvenance::QuantileConverted: algorithm = Algorithm::InSilicoQ; break;
    case SciProvenance::FixedConverted: algorithm = Algorithm::InSilicoF; break;
    default: throw ConfigError("insilico_fit requires a level-converted SCI");
  }
  GibbsResult chain = run_gibbs(sci.values, test, config);
  CauseAssignment out;
  out.algorithm = algorithm;
  out.csmf_estimate = std::move(chain.csmf_mean);
  out.ranking.reserve(chain.membership.size());
  for (auto& m : chain.membership) out.ranking.push_back(detail::rank_by_score(m));
  out.scores = std::move(chain.membership);
  return out;
}

}  // namespace vabench
