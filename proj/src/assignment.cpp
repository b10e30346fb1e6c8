#include <array>

#include "vabench/classifiers.hpp"
#include "vabench/error.hpp"

namespace vabench {

namespace {
constexpr std::array<std::pair<Algorithm, const char*>, 5> kTokens{{
    {Algorithm::Tariff, "tariff"},
    {Algorithm::InterVaQ, "interva-q"},
    {Algorithm::InterVaF, "interva-f"},
    {Algorithm::InSilicoQ, "insilico-q"},
    {Algorithm::InSilicoF, "insilico-f"},
}};
}  // namespace

const char* to_string(Algorithm a) {
  for (const auto& [alg, token] : kTokens) {
    if (alg == a) return token;
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& token) {
  for (const auto& [alg, name] : kTokens) {
    if (token == name) return alg;
  }
  throw ConfigError("unknown algorithm '" + token +
                    "' (expected tariff, interva-q, interva-f, insilico-q or insilico-f)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::Tariff, Algorithm::InterVaQ,
                                          Algorithm::InterVaF, Algorithm::InSilicoQ,
                                          Algorithm::InSilicoF};
  return all;
}

std::vector<double> top_cause_fractions(const std::vector<std::vector<CauseIndex>>& ranking,
                                        std::size_t num_causes) {
  std::vector<double> out(num_causes, 0.0);
  if (ranking.empty()) return out;
  for (const auto& r : ranking) out[r.front()] += 1.0;
  for (double& v : out) v /= static_cast<double>(ranking.size());
  return out;
}

std::vector<std::vector<CauseIndex>> top_k(const CauseAssignment& assignment, std::size_t k) {
  if (k == 0) throw ConfigError("top_k requires k >= 1");
  std::vector<std::vector<CauseIndex>> out;
  out.reserve(assignment.ranking.size());
  for (const auto& r : assignment.ranking) {
    if (k > r.size()) {
      throw ConfigError("top_k: k = " + std::to_string(k) + " exceeds the number of causes (" +
                        std::to_string(r.size()) + ")");
    }
    out.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

}  // namespace vabench
