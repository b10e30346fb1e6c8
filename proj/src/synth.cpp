#include "vabench/synth.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>

#include "vabench/error.hpp"
#include "vabench/experiment.hpp"
#include "vabench/random.hpp"

namespace vabench {

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

int digits(std::size_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void SynthConfig::validate() const {
  if (n_sites == 0 || n_causes == 0 || n_symptoms == 0 || deaths_per_site == 0) {
    throw ConfigError("synthetic config: counts must be positive");
  }
  if (!(site_heterogeneity >= 0.0)) throw ConfigError("synthetic config: heterogeneity must be >= 0");
  if (!(missingness >= 0.0 && missingness < 1.0)) {
    throw ConfigError("synthetic config: missingness must be in [0, 1)");
  }
  if (base_condprob) {
    if (base_condprob->rows() != n_causes || base_condprob->cols() != n_symptoms) {
      throw ConfigError("synthetic config: base_condprob must be n_causes x n_symptoms");
    }
    for (double v : base_condprob->values()) {
      if (!(v > 0.0 && v < 1.0)) throw ConfigError("synthetic config: base_condprob entries must lie in (0, 1)");
    }
  }
  if (site_csmfs) {
    if (site_csmfs->size() != n_sites) throw ConfigError("synthetic config: one CSMF per site required");
    for (const auto& csmf : *site_csmfs) {
      if (csmf.size() != n_causes) throw ConfigError("synthetic config: CSMF length must equal n_causes");
      double total = 0.0;
      for (double v : csmf) {
        if (!(v >= 0.0)) throw ConfigError("synthetic config: CSMF entries must be nonnegative");
        total += v;
      }
      if (std::abs(total - 1.0) > 1e-9) throw ConfigError("synthetic config: CSMF must sum to 1");
    }
  }
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  const std::size_t C = config.n_causes;
  const std::size_t S = config.n_symptoms;

  SynthTruth truth;
  if (config.base_condprob) {
    truth.base_condprob = *config.base_condprob;
  } else {
    Rng rng(derive_seed(config.seed, {"base"}));
    truth.base_condprob = Matrix(C, S);
    for (double& v : truth.base_condprob.values()) v = 0.05 + 0.9 * uniform01(rng);
  }

  std::vector<std::string> cause_names, symptom_names;
  for (std::size_t c = 1; c <= C; ++c) cause_names.push_back(numbered("cause", c, std::max(2, digits(C))));
  for (std::size_t s = 1; s <= S; ++s) symptom_names.push_back(numbered("sym", s, std::max(3, digits(S))));

  std::vector<DeathRecord> records;
  records.reserve(config.n_sites * config.deaths_per_site);
  const int id_width = std::max(4, digits(config.deaths_per_site));
  for (std::size_t k = 0; k < config.n_sites; ++k) {
    const std::string site = "site" + std::to_string(k + 1);
    truth.site_names.push_back(site);
    Rng rng(derive_seed(config.seed, {"site", site}));

    std::vector<double> csmf = config.site_csmfs ? (*config.site_csmfs)[k] : sample_dirichlet(1.0, C, rng);
    Matrix sci = truth.base_condprob;
    if (config.site_heterogeneity > 0.0) {
      std::normal_distribution<double> noise(0.0, 1.0);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t s = 0; s < S; ++s) {
          sci(c, s) = logistic(logit(truth.base_condprob(c, s)) + config.site_heterogeneity * noise(rng));
        }
      }
    }

    double csmf_total = 0.0;
    for (double v : csmf) csmf_total += v;
    for (std::size_t d = 0; d < config.deaths_per_site; ++d) {
      DeathRecord r;
      r.id = site + "-" + numbered("", d + 1, id_width);
      r.site = site;
      const CauseIndex cause = draw_categorical(csmf, csmf_total, rng);
      r.cause = cause;
      r.symptoms.resize(S);
      for (std::size_t s = 0; s < S; ++s) {
        const bool yes = uniform01(rng) < sci(cause, s);
        const bool missing = config.missingness > 0.0 && uniform01(rng) < config.missingness;
        r.symptoms[s] = missing ? SymptomValue::Missing : (yes ? SymptomValue::Yes : SymptomValue::No);
      }
      records.push_back(std::move(r));
    }
    truth.site_csmfs.push_back(std::move(csmf));
    truth.site_condprobs.push_back(std::move(sci));
  }

  return {Dataset(std::move(symptom_names), std::move(cause_names), std::move(records)),
          std::move(truth)};
}

}  // namespace vabench
