#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "manifest.hpp"
#include "plot.hpp"
#include "vabench/anova.hpp"
#include "vabench/error.hpp"
#include "vabench/experiment.hpp"
#include "vabench/random.hpp"
#include "vabench/results_io.hpp"
#include "vabench/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vabench::app {

namespace {

template <typename Fn>
auto stage(RunManifest& manifest, const std::string& name, Fn&& fn) {
  manifest.begin_stage(name);
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string catalog_digest(const std::vector<std::string>& names) {
  std::string joined;
  for (const auto& n : names) {
    joined += n;
    joined += '\n';
  }
  return hex64(fnv1a64(joined));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Dataset load_site_data(const std::string& path, const std::string& causes_path,
                       std::vector<std::string>* files_read) {
  std::vector<std::string> files;
  std::string sidecar = causes_path;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (sidecar.empty() && fs::exists(fs::path(path) / "causes.txt")) {
      sidecar = (fs::path(path) / "causes.txt").string();
    }
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw DataError("data path '" + path + "' does not exist");
  }
  if (files.empty()) throw DataError("no .csv files found in '" + path + "'");

  std::optional<std::vector<std::string>> causes;
  if (!sidecar.empty()) {
    causes = load_cause_list(sidecar);
    if (files_read) files_read->push_back(sidecar);
  } else if (files.size() > 1) {
    std::set<std::string> all;
    for (const auto& f : files) {
      const Dataset d = load_dataset(f);
      all.insert(d.cause_names().begin(), d.cause_names().end());
    }
    causes = std::vector<std::string>(all.begin(), all.end());
  }

  std::vector<Dataset> parts;
  for (const auto& f : files) {
    parts.push_back(load_dataset(f, causes));
    if (files_read) files_read->push_back(f);
    if (!parts.back().same_catalogs(parts.front())) {
      throw DataError("catalog mismatch: '" + f + "' has a different symptom catalog than '" +
                      files.front() + "'");
    }
  }
  return merge_datasets(parts);
}

int cmd_simulate(const GlobalOptions& global, const SimulateOptions& opts) {
  RunManifest manifest("simulate");
  const std::string out_dir = global.out.empty() ? "simulated" : global.out;

  SynthConfig config = stage(manifest, "read-config", [&] {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config '" + opts.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return synth_config_from_json(j);
  });
  if (global.seed) config.seed = *global.seed;
  manifest.add_input(opts.config_path);
  manifest.set_config(to_json(config));
  manifest.set_seed(config.seed);

  const SynthOutput generated = stage(manifest, "generate", [&] { return generate(config); });

  stage(manifest, "write", [&] {
    fs::create_directories(out_dir);
    for (const auto& site : generated.data.sites()) {
      const std::string path = (fs::path(out_dir) / (site + ".csv")).string();
      std::ostringstream csv;
      write_dataset(csv, select_site(generated.data, site));
      write_text(path, csv.str());
      manifest.add_output(path);
    }
    std::ostringstream causes;
    write_cause_list(causes, generated.data.cause_names());
    const std::string causes_path = (fs::path(out_dir) / "causes.txt").string();
    write_text(causes_path, causes.str());
    manifest.add_output(causes_path);

    json truth = to_json(generated.truth);
    truth["manifest"] = "manifest.json";
    const std::string truth_path = (fs::path(out_dir) / "truth.json").string();
    write_text(truth_path, truth.dump(2) + "\n");
    manifest.add_output(truth_path);
    return 0;
  });
  stage(manifest, "write-manifest", [&] {
    manifest.write((fs::path(out_dir) / "manifest.json").string());
    return 0;
  });
  return 0;
}

int cmd_grid(const GlobalOptions& global, const GridOptions& opts) {
  RunManifest manifest("grid");
  const std::string out_path = global.out.empty() ? "results.csv" : global.out;

  GridConfig config = stage(manifest, "configure", [&] {
    GridConfig c;
    if (opts.design != 1 && opts.design != 2) throw ConfigError("--design must be 1 or 2");
    if (opts.design == 1) {
      if (opts.replications && *opts.replications != 0) {
        throw ConfigError("--replications requires --design 2");
      }
      c.replications = 0;
    } else {
      c.replications = opts.replications.value_or(50);
      if (c.replications == 0) throw ConfigError("design 2 needs at least one replication");
    }
    c.algorithms.clear();
    for (const auto& token : split_list(opts.algorithms)) c.algorithms.push_back(parse_algorithm(token));
    c.include_same_site = !opts.no_same_site;
    c.seed = global.seed.value_or(1);
    c.jobs = global.jobs;
    c.dirichlet_concentration = opts.dirichlet;
    c.classifier.levels = load_level_table(opts.levels_path);
    c.classifier.distance = parse_level_distance(opts.distance);
    c.classifier.gibbs.iterations = opts.gibbs_iterations;
    c.classifier.gibbs.burn_in = opts.gibbs_burn_in;
    c.classifier.gibbs.dirichlet_prior = opts.gibbs_prior;
    c.validate();
    return c;
  });

  std::vector<std::string> inputs;
  const Dataset data = stage(manifest, "load-data", [&] {
    return load_site_data(opts.data_path, opts.causes_path, &inputs);
  });
  for (const auto& f : inputs) manifest.add_input(f);
  manifest.add_input(opts.levels_path);

  json algorithms = json::array();
  for (Algorithm a : config.algorithms) algorithms.push_back(to_string(a));
  manifest.set_seed(config.seed);
  manifest.set_config({{"design", opts.design},
                       {"replications", config.replications},
                       {"algorithms", algorithms},
                       {"include_same_site", config.include_same_site},
                       {"dirichlet_concentration", config.dirichlet_concentration},
                       {"levels", opts.levels_path},
                       {"level_distance", opts.distance},
                       {"gibbs", {{"iterations", config.classifier.gibbs.iterations},
                                  {"burn_in", config.classifier.gibbs.burn_in},
                                  {"dirichlet_prior", config.classifier.gibbs.dirichlet_prior}}},
                       {"interva_prior", "uniform"},
                       {"jobs", config.jobs}});
  json sites = json::array();
  for (const auto& [site, count] : data.site_counts()) sites.push_back({{"site", site}, {"deaths", count}});
  manifest.set_field("sites", sites);
  manifest.set_field("catalogs", {{"symptoms", data.num_symptoms()},
                                  {"causes", data.num_causes()},
                                  {"symptom_digest", catalog_digest(data.symptom_names())},
                                  {"cause_digest", catalog_digest(data.cause_names())}});
  manifest.set_field("seed_derivation",
                     "per cell: derive_seed(seed, {resample|gibbs, train, test, replicate[, algorithm]})");

  const auto rows = stage(manifest, "run-grid", [&] { return run_grid(data, config); });

  stage(manifest, "write", [&] {
    if (auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ostringstream csv;
    write_metrics_csv(csv, rows);
    write_text(out_path, csv.str());
    manifest.add_output(out_path);
    manifest.set_field("rows", rows.size());
    return 0;
  });
  stage(manifest, "write-manifest", [&] {
    manifest.write(out_path + ".manifest.json");
    return 0;
  });
  return 0;
}

int cmd_decompose(const GlobalOptions& global, const DecomposeOptions& opts) {
  RunManifest manifest("decompose");
  const int e = opts.experiment;
  const std::string out_path =
      global.out.empty() ? "decompose_exp" + std::to_string(e) + ".json" : global.out;
  if (global.seed) manifest.set_seed(*global.seed);

  const auto all_rows = stage(manifest, "read-results", [&] {
    if (e < 1 || e > 4) throw ConfigError("--experiment must be 1, 2, 3 or 4");
    return load_metrics_csv(opts.results_path);
  });
  manifest.add_input(opts.results_path);
  manifest.set_config({{"experiment", e},
                       {"per_test_site", opts.per_test_site},
                       {"friedman", opts.friedman}});

  json doc{{"experiment", e},
           {"per_test_site", opts.per_test_site},
           {"manifest", fs::path(out_path + ".manifest.json").filename().string()}};
  json warnings = json::array();
  std::vector<FlatAnovaRow> flat;

  stage(manifest, "anova", [&] {
    const bool any_same_site = std::any_of(all_rows.begin(), all_rows.end(), [](const MetricsRow& r) {
      return r.train_site == r.test_site;
    });
    if (e >= 3 && !any_same_site) {
      const std::string w = "results contain no same-site rows; the same-site filter of experiment " +
                            std::to_string(e) + " is a no-op";
      std::cerr << "warning: " << w << '\n';
      warnings.push_back(w);
    }
    const auto rows = experiment_rows(all_rows, e);
    if (rows.empty()) {
      throw DataError(std::string("experiment ") + std::to_string(e) + " needs " +
                      (e % 2 == 1 ? "unresampled (replicate 0)" : "replicate-mean (replicate -1)") +
                      " rows; none found");
    }
    doc["rows_used"] = rows.size();

    std::vector<std::string> test_sites;
    for (const auto& r : rows) {
      if (std::find(test_sites.begin(), test_sites.end(), r.test_site) == test_sites.end()) {
        test_sites.push_back(r.test_site);
      }
    }
    json reports = json::array();
    const FactorSpec spec = experiment_spec(e, opts.per_test_site);
    doc["factors"] = json::array();
    for (Factor f : spec.factors) doc["factors"].push_back(to_string(f));
    for (Metric m : all_metrics()) {
      if (!opts.per_test_site) {
        const AnovaReport report = anova_sequential(rows, m, spec);
        json j = to_json(report);
        j["scope"] = "all";
        reports.push_back(j);
        append_flat_rows(flat, e, "all", report);
        continue;
      }
      for (const auto& site : test_sites) {
        std::vector<MetricsRow> subset;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(subset),
                     [&](const MetricsRow& r) { return r.test_site == site; });
        const AnovaReport report = anova_sequential(subset, m, spec);
        json j = to_json(report);
        j["scope"] = site;
        reports.push_back(j);
        append_flat_rows(flat, e, site, report);
      }
    }
    doc["reports"] = reports;

    if (opts.friedman) {
      json friedman = json::array();
      for (Metric m : all_metrics()) {
        for (const auto& site : test_sites) {
          std::vector<MetricsRow> subset;
          std::copy_if(rows.begin(), rows.end(), std::back_inserter(subset),
                       [&](const MetricsRow& r) { return r.test_site == site; });
          json j = to_json(friedman_test(subset, m, Factor::TrainSite, Factor::Algorithm));
          j["scope"] = site;
          j["metric"] = to_string(m);
          j["treatment"] = "train_site";
          j["block"] = "algorithm";
          friedman.push_back(j);
        }
      }
      doc["friedman"] = friedman;
    }
    doc["warnings"] = warnings;
    return 0;
  });

  stage(manifest, "write", [&] {
    if (auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_text(out_path, doc.dump(2) + "\n");
    manifest.add_output(out_path);
    const std::string flat_path = fs::path(out_path).replace_extension(".csv").string();
    std::ostringstream csv;
    write_flat_anova_csv(csv, flat);
    write_text(flat_path, csv.str());
    manifest.add_output(flat_path);
    return 0;
  });
  stage(manifest, "write-manifest", [&] {
    manifest.write(out_path + ".manifest.json");
    return 0;
  });
  return 0;
}

int cmd_plot(const GlobalOptions& global, const PlotOptions& opts) {
  RunManifest manifest("plot");
  const std::string out_dir = global.out.empty() ? "figures" : global.out;
  const std::string manifest_ref = "manifest.json";

  std::vector<MetricsRow> rows;
  std::vector<json> docs;
  stage(manifest, "read-inputs", [&] {
    if (opts.inputs.empty()) throw ConfigError("plot needs at least one input file");
    for (const auto& path : opts.inputs) {
      std::ifstream in(path);
      if (!in) throw DataError("cannot open '" + path + "'");
      std::string first;
      std::getline(in, first);
      if (!first.empty() && first.back() == '\r') first.pop_back();
      if (first == kMetricsHeader) {
        auto more = load_metrics_csv(path);
        rows.insert(rows.end(), more.begin(), more.end());
      } else {
        json j;
        try {
          std::ifstream again(path);
          again >> j;
        } catch (const json::exception&) {
          throw DataError("unknown input schema in '" + path + "'");
        }
        if (!j.is_object() || !j.contains("experiment") || !j.contains("reports")) {
          throw DataError("unknown input schema in '" + path + "'");
        }
        docs.push_back(std::move(j));
      }
      manifest.add_input(path);
    }
    return 0;
  });

  stage(manifest, "render", [&] {
    fs::create_directories(out_dir);
    auto emit = [&](const std::string& name, const std::string& svg) {
      const std::string path = (fs::path(out_dir) / name).string();
      write_text(path, svg);
      manifest.add_output(path);
    };
    const bool has_design1 = std::any_of(rows.begin(), rows.end(), [](auto& r) { return r.replicate == 0; });
    const bool has_design2 = std::any_of(rows.begin(), rows.end(), [](auto& r) { return r.replicate == -1; });
    if (has_design1) {
      emit("grid_design1.svg", render_grid_svg(rows, 0, "Performance by train/test site (no resampling)", manifest_ref));
    }
    if (has_design2) {
      emit("grid_design2.svg",
           render_grid_svg(rows, -1, "Mean performance over resampled test sets", manifest_ref));
    }
    const bool has_global = std::any_of(docs.begin(), docs.end(),
                                        [](const json& d) { return !d.value("per_test_site", false); });
    const bool has_site = std::any_of(docs.begin(), docs.end(),
                                      [](const json& d) { return d.value("per_test_site", false); });
    if (has_global) emit("variance.svg", render_variance_svg(docs, false, manifest_ref));
    if (has_site) emit("variance_per_site.svg", render_variance_svg(docs, true, manifest_ref));
    const bool has_friedman = std::any_of(docs.begin(), docs.end(), [](const json& d) {
      return d.value("per_test_site", false) && d.contains("friedman");
    });
    if (has_friedman) emit("pvalues.svg", render_pvalue_svg(docs, manifest_ref));
    if (!has_design1 && !has_design2 && docs.empty()) throw DataError("nothing to plot");
    return 0;
  });
  stage(manifest, "write-manifest", [&] {
    manifest.write((fs::path(out_dir) / manifest_ref).string());
    return 0;
  });
  return 0;
}

}  // namespace vabench::app
