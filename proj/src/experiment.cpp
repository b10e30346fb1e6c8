#include "vabench/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "vabench/error.hpp"

namespace vabench {

void GridConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("grid needs at least one algorithm");
  if (!(dirichlet_concentration > 0.0)) throw ConfigError("Dirichlet concentration must be positive");
  classifier.gibbs.validate();
}

std::vector<double> sample_dirichlet(double concentration, std::size_t dimension, Rng& rng) {
  if (dimension == 0) throw ConfigError("Dirichlet dimension must be at least 1");
  if (!(concentration > 0.0)) throw ConfigError("Dirichlet concentration must be positive");
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> out(dimension);
  double total = 0.0;
  for (double& v : out) {
    v = gamma(rng);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

Dataset resample_test(const Dataset& test, std::span<const double> target, Rng& rng) {
  if (test.empty()) throw DataError("resample_test: empty test set");
  const std::size_t C = test.num_causes();
  if (target.size() != C) throw ConfigError("resample_test: target length differs from cause count");
  std::vector<std::vector<std::size_t>> by_cause(C);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& cause = test.records()[i].cause;
    if (!cause) throw DataError("resample_test: test record '" + test.records()[i].id + "' is unlabeled");
    by_cause[*cause].push_back(i);
  }
  std::vector<double> weights(C, 0.0);
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    if (target[c] < 0.0) throw ConfigError("resample_test: negative target mass");
    if (!by_cause[c].empty()) {
      weights[c] = target[c];
      total += target[c];
    }
  }
  if (!(total > 0.0)) {
    throw DataError("resample_test: target puts all mass on causes absent from the test set");
  }
  std::vector<DeathRecord> records;
  records.reserve(test.size());
  for (std::size_t slot = 0; slot < test.size(); ++slot) {
    const auto& pool = by_cause[draw_categorical(weights, total, rng)];
    const auto pick = std::min(pool.size() - 1,
                               static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool.size())));
    DeathRecord r = test.records()[pool[pick]];
    r.id += '#';
    r.id += std::to_string(slot);
    records.push_back(std::move(r));
  }
  return Dataset(test.symptom_names(), test.cause_names(), std::move(records));
}

TrainedModels train_models(const Dataset& train, const std::vector<Algorithm>& algorithms,
                           const ClassifierSettings& settings) {
  TrainedModels models;
  bool need_quantile = false, need_fixed = false;
  for (Algorithm a : algorithms) {
    switch (a) {
      case Algorithm::Tariff:
        if (!models.tariff) models.tariff = tariff_fit(train);
        break;
      case Algorithm::InterVaQ:
      case Algorithm::InSilicoQ: need_quantile = true; break;
      case Algorithm::InterVaF:
      case Algorithm::InSilicoF: need_fixed = true; break;
    }
  }
  if (need_quantile || need_fixed) {
    const CondProbMatrix raw = estimate_condprob(train);
    if (need_quantile) models.quantile_sci = convert_quantile(raw, settings.levels);
    if (need_fixed) models.fixed_sci = convert_fixed(raw, settings.levels, settings.distance);
  }
  return models;
}

CauseAssignment apply_model(const TrainedModels& models, Algorithm algorithm,
                            const Dataset& test, const ClassifierSettings& settings,
                            const GibbsConfig& gibbs) {
  auto require = [](const auto& opt) -> const auto& {
    if (!opt) throw ConfigError("apply_model: algorithm was not trained");
    return *opt;
  };
  switch (algorithm) {
    case Algorithm::Tariff: return tariff_assign(require(models.tariff), test);
    case Algorithm::InterVaQ:
    case Algorithm::InterVaF: {
      const auto& sci = require(algorithm == Algorithm::InterVaQ ? models.quantile_sci
                                                                 : models.fixed_sci);
      if (settings.interva_prior) return interva_assign(sci, *settings.interva_prior, test);
      return interva_assign(sci, test);
    }
    case Algorithm::InSilicoQ: return insilico_fit(require(models.quantile_sci), test, gibbs);
    case Algorithm::InSilicoF: return insilico_fit(require(models.fixed_sci), test, gibbs);
  }
  throw ConfigError("apply_model: unknown algorithm");
}

MetricsRow run_cell(const Dataset& train, const Dataset& test, Algorithm algorithm,
                    const ClassifierSettings& settings) {
  if (!train.same_catalogs(test)) throw DataError("run_cell: train and test catalogs differ");
  const TrainedModels models = train_models(train, {algorithm}, settings);
  MetricsRow row = compute_metrics(apply_model(models, algorithm, test, settings, settings.gibbs), test);
  if (!train.empty()) row.train_site = train.records().front().site;
  if (!test.empty()) row.test_site = test.records().front().site;
  return row;
}

MetricsRow run_cell(const Dataset& train, const Dataset& test, const std::string& algorithm,
                    const ClassifierSettings& settings) {
  return run_cell(train, test, parse_algorithm(algorithm), settings);
}

std::size_t grid_row_count(std::size_t num_sites, const GridConfig& config) {
  const std::size_t cells =
      config.include_same_site ? num_sites * num_sites : num_sites * (num_sites - 1);
  const std::size_t per_cell = config.replications == 0 ? 1 : config.replications + 1;
  return cells * config.algorithms.size() * per_cell;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<MetricsRow> run_grid(const Dataset& data, const GridConfig& config) {
  config.validate();
  const auto& sites = data.sites();
  if (sites.empty()) throw DataError("run_grid: dataset has no sites");
  if (sites.size() < 2 && !config.include_same_site) {
    throw DataError("run_grid: at least two sites are needed without same-site cells");
  }

  std::vector<Dataset> site_data;
  for (const auto& s : sites) {
    site_data.push_back(select_site(data, s));
    if (site_data.back().empty()) throw DataError("run_grid: site '" + s + "' is empty");
  }

  std::vector<TrainedModels> models(sites.size());
  parallel_for(sites.size(), config.jobs, [&](std::size_t i) {
    models[i] = train_models(site_data[i], config.algorithms, config.classifier);
  });

  struct Task {
    std::size_t train, test;
    int replicate;
  };
  std::vector<Task> tasks;
  const int reps = static_cast<int>(config.replications);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (i == j && !config.include_same_site) continue;
      if (reps == 0) {
        tasks.push_back({i, j, 0});
      } else {
        for (int r = 1; r <= reps; ++r) tasks.push_back({i, j, r});
      }
    }
  }

  std::vector<std::vector<MetricsRow>> results(tasks.size());
  parallel_for(tasks.size(), config.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::string& train_site = sites[task.train];
    const std::string& test_site = sites[task.test];
    const std::string rep = std::to_string(task.replicate);
    Dataset resampled;
    const Dataset* test = &site_data[task.test];
    if (task.replicate > 0) {
      Rng rng(derive_seed(config.seed, {"resample", train_site, test_site, rep}));
      const auto target = sample_dirichlet(config.dirichlet_concentration, data.num_causes(), rng);
      resampled = resample_test(*test, target, rng);
      test = &resampled;
    }
    for (Algorithm a : config.algorithms) {
      GibbsConfig gibbs = config.classifier.gibbs;
      gibbs.seed = derive_seed(config.seed, {"gibbs", train_site, test_site, rep, to_string(a)});
      MetricsRow row = compute_metrics(
          apply_model(models[task.train], a, *test, config.classifier, gibbs), *test);
      row.train_site = train_site;
      row.test_site = test_site;
      row.replicate = task.replicate;
      results[t].push_back(std::move(row));
    }
  });

  std::vector<MetricsRow> rows;
  rows.reserve(grid_row_count(sites.size(), config));
  const std::size_t per_cell = reps == 0 ? 1 : static_cast<std::size_t>(reps);
  for (std::size_t t = 0; t < tasks.size(); t += per_cell) {
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      if (reps == 0) {
        rows.push_back(results[t][a]);
        continue;
      }
      MetricsRow mean = results[t][a];
      mean.replicate = -1;
      mean.ccc = mean.csmf_accuracy = mean.top1 = mean.top3 = 0.0;
      for (std::size_t r = 0; r < per_cell; ++r) {
        const MetricsRow& row = results[t + r][a];
        rows.push_back(row);
        mean.ccc += row.ccc;
        mean.csmf_accuracy += row.csmf_accuracy;
        mean.top1 += row.top1;
        mean.top3 += row.top3;
      }
      const double n = static_cast<double>(per_cell);
      mean.ccc /= n;
      mean.csmf_accuracy /= n;
      mean.top1 /= n;
      mean.top3 /= n;
      rows.push_back(std::move(mean));
    }
  }
  return rows;
}

}  // namespace vabench
