#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vabench/dataset.hpp"

namespace vabench::app {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out;
};

struct SimulateOptions {
  std::string config_path;
};

struct GridOptions {
  std::string data_path;
  std::string causes_path;
  int design = 1;
  std::optional<std::size_t> replications;
  std::string algorithms = "tariff,interva-q,interva-f,insilico-q,insilico-f";
  bool no_same_site = false;
  std::string levels_path = VABENCH_DEFAULT_LEVELS;
  std::string distance = "linear";
  std::size_t gibbs_iterations = 4000;
  std::size_t gibbs_burn_in = 2000;
  double gibbs_prior = 1.0;
  double dirichlet = 1.0;
};

struct DecomposeOptions {
  std::string results_path;
  int experiment = 1;
  bool friedman = false;
  bool per_test_site = false;
};

struct PlotOptions {
  std::vector<std::string> inputs;
};

/// Loads one CSV file or every *.csv in a directory (sorted by name) into a
/// single dataset. The cause catalog comes from `causes_path`, else from a
/// `causes.txt` beside the data, else from the sorted union of cause labels.
Dataset load_site_data(const std::string& path, const std::string& causes_path,
                       std::vector<std::string>* files_read = nullptr);

/// Each command writes its outputs plus a manifest and returns the exit code.
/// Failures throw StageError naming the failing stage.
int cmd_simulate(const GlobalOptions& global, const SimulateOptions& opts);
int cmd_grid(const GlobalOptions& global, const GridOptions& opts);
int cmd_decompose(const GlobalOptions& global, const DecomposeOptions& opts);
int cmd_plot(const GlobalOptions& global, const PlotOptions& opts);

class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& message)
      : std::runtime_error("stage '" + stage + "': " + message) {}
};

}  // namespace vabench::app
