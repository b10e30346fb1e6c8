#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vabench/dataset.hpp"
#include "vabench/matrix.hpp"
#include "vabench/sci.hpp"

namespace vabench {

enum class Algorithm { Tariff, InterVaQ, InterVaF, InSilicoQ, InSilicoF };

/// Exact command-line / CSV token: tariff, interva-q, interva-f, insilico-q, insilico-f.
const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& token);
const std::vector<Algorithm>& all_algorithms();

/// Per-death cause rankings plus the algorithm's population CSMF estimate.
struct CauseAssignment {
  Algorithm algorithm = Algorithm::Tariff;
  /// scores[d][c]; higher means more likely.
  std::vector<std::vector<double>> scores;
  /// ranking[d] is a permutation of cause indices, most likely first.
  std::vector<std::vector<CauseIndex>> ranking;
  std::vector<double> csmf_estimate;

  std::size_t num_deaths() const { return ranking.size(); }
};

/// Fraction of deaths whose top-ranked cause is each cause.
std::vector<double> top_cause_fractions(const std::vector<std::vector<CauseIndex>>& ranking,
                                        std::size_t num_causes);

/// First k causes of every death's ranking.
std::vector<std::vector<CauseIndex>> top_k(const CauseAssignment& assignment, std::size_t k);

// ---------------------------------------------------------------------------
// Tariff

struct TariffModel {
  std::vector<std::string> symptom_names;
  Matrix tariffs;  // causes x symptoms
  /// Causes with at least one training death. Others are never ranked ahead.
  std::vector<bool> retained;
  /// Per candidate cause, sorted scores of every training death.
  std::vector<std::vector<double>> train_score_distributions;
};

/// Linear-interpolation sample quantile (type 7) of a sorted sequence.
double interpolated_quantile(std::span<const double> sorted, double q);

/// Median/IQR-standardized tariffs rounded to the nearest 0.5, computed over
/// the retained rows of an endorsement-rate matrix.
Matrix tariffs_from_endorsement(const Matrix& endorsement, const std::vector<bool>& retained);

TariffModel tariff_fit(const Dataset& train);
CauseAssignment tariff_assign(const TariffModel& model, const Dataset& test);

// ---------------------------------------------------------------------------
// InterVA

/// Yes-only naive Bayes over a level-converted SCI. The prior may be any
/// nonnegative vector with positive sum; it is normalized before use.
CauseAssignment interva_assign(const CondProbMatrix& sci, std::span<const double> prior,
                               const Dataset& test);
/// Same, with a uniform prior.
CauseAssignment interva_assign(const CondProbMatrix& sci, const Dataset& test);

// ---------------------------------------------------------------------------
// InSilicoVA

struct GibbsConfig {
  std::size_t iterations = 4000;
  std::size_t burn_in = 2000;
  double dirichlet_prior = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Output of one Gibbs chain over a fixed conditional-probability matrix.
struct GibbsResult {
  std::vector<double> csmf_mean;             // posterior mean of the CSMF
  std::vector<double> csmf_sd;               // posterior sd of the CSMF
  /// Per death, posterior cause-membership probabilities averaged over kept
  /// iterations (conditional probabilities given pi, not raw draw counts).
  std::vector<std::vector<double>> membership;
};

/// Entries are clamped into [1e-8, 1 - 1e-8] before use.
inline constexpr double kGibbsClamp = 1e-8;

/// Sampler for y_i | pi and pi | y with conditionally independent symptoms
/// (Yes and No both informative, Missing skipped).
GibbsResult run_gibbs(const Matrix& condprob, const Dataset& test, const GibbsConfig& config);

/// InSilicoVA-style assignment from a level-converted SCI.
CauseAssignment insilico_fit(const CondProbMatrix& sci, const Dataset& test,
                             const GibbsConfig& config);

}  // namespace vabench
