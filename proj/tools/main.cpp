#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace vabench::app;

int main(int argc, char** argv) {
  CLI::App app{"vabench: verbal-autopsy classifier benchmarking across training sites"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Master random seed");
  app.add_option("--jobs", global.jobs, "Worker threads for grid cells")->check(CLI::PositiveNumber);
  app.add_option("--out", global.out, "Output file or directory");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic multi-site data");
  simulate->add_option("--config", sim.config_path, "Synthetic config JSON")->required();

  GridOptions grid;
  auto* grid_cmd = app.add_subcommand("grid", "Run the train/test site grid");
  grid_cmd->add_option("data", grid.data_path, "Site CSV file or directory of site CSVs")->required();
  grid_cmd->add_option("--causes", grid.causes_path, "Cause-list sidecar (one cause per line)");
  grid_cmd->add_option("--design", grid.design, "1 = no resampling, 2 = Dirichlet-resampled test sets");
  grid_cmd->add_option("--replications", grid.replications, "Resampled replicates per cell (design 2)");
  grid_cmd->add_option("--algorithms", grid.algorithms, "Comma-separated algorithm tokens");
  grid_cmd->add_flag("--no-same-site", grid.no_same_site, "Skip cells with train site == test site");
  grid_cmd->add_option("--levels", grid.levels_path, "Level ladder CSV")->capture_default_str();
  grid_cmd->add_option("--distance", grid.distance, "Fixed-level distance: linear or log");
  grid_cmd->add_option("--gibbs-iterations", grid.gibbs_iterations, "InSilico chain length");
  grid_cmd->add_option("--gibbs-burn-in", grid.gibbs_burn_in, "InSilico burn-in");
  grid_cmd->add_option("--gibbs-prior", grid.gibbs_prior, "InSilico Dirichlet prior concentration");
  grid_cmd->add_option("--dirichlet", grid.dirichlet, "Concentration of resampling CSMF draws");

  DecomposeOptions dec;
  auto* decompose = app.add_subcommand("decompose", "Variance decomposition of grid results");
  decompose->add_option("results", dec.results_path, "Results CSV from `grid`")->required();
  decompose->add_option("--experiment", dec.experiment, "Experiment preset 1-4")->required();
  decompose->add_flag("--friedman", dec.friedman, "Add per-test-site Friedman tests");
  decompose->add_flag("--per-test-site", dec.per_test_site, "Fit train_site + algorithm per test site");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG figures from results and reports");
  plot_cmd->add_option("inputs", plot.inputs, "Results CSVs and decompose JSON reports")->required();

  CLI11_PARSE(app, argc, argv);
  if (app.count("--seed") > 0) global.seed = seed;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*simulate) return cmd_simulate(global, sim);
    if (*grid_cmd) return cmd_grid(global, grid);
    if (*decompose) return cmd_decompose(global, dec);
    if (*plot_cmd) return cmd_plot(global, plot);
  } catch (const std::exception& e) {
    std::cerr << "vabench " << command << ": error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
