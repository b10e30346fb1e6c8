#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vabench/results_io.hpp"
#include "vabench/dataset.hpp"
#include "json.hpp"

namespace vabench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vabench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(VABENCH_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path config(std::size_t sites, std::size_t deaths, double missing, std::uint64_t seed = 5) {
    const fs::path p = dir_ / ("cfg_" + std::to_string(sites) + ".json");
    std::ofstream(p) << json{{"n_sites", sites},        {"n_causes", 4},
                             {"n_symptoms", 10},        {"deaths_per_site", deaths},
                             {"site_heterogeneity", 1.0}, {"missingness", missing},
                             {"seed", seed}}
                            .dump();
    return p;
  }

  std::string fast_gibbs() const { return " --gibbs-iterations 60 --gibbs-burn-in 20"; }

  fs::path dir_;
};

TEST_F(Cli, SimulateWritesFileContract) {
  ASSERT_EQ(run("--out " + (dir_ / "a").string() + " simulate --config " + config(2, 30, 0.0).string()), 0);
  for (const char* f : {"site1.csv", "site2.csv", "causes.txt", "truth.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  const json manifest = json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "simulate");
  EXPECT_EQ(manifest.at("seed"), 5);
  EXPECT_EQ(json::parse(slurp(dir_ / "a" / "truth.json")).at("manifest"), "manifest.json");
}

TEST_F(Cli, SimulateIsByteDeterministic) {
  const auto cfg = config(2, 40, 0.1).string();
  ASSERT_EQ(run("--out " + (dir_ / "a").string() + " simulate --config " + cfg), 0);
  ASSERT_EQ(run("--out " + (dir_ / "b").string() + " simulate --config " + cfg), 0);
  for (const char* f : {"site1.csv", "site2.csv", "causes.txt", "truth.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  ASSERT_EQ(run("--seed 6 --out " + (dir_ / "c").string() + " simulate --config " + cfg), 0);
  EXPECT_NE(slurp(dir_ / "a" / "site1.csv"), slurp(dir_ / "c" / "site1.csv"));
}

TEST_F(Cli, SimulateMissingnessRate) {
  ASSERT_EQ(run("--out " + (dir_ / "m").string() + " simulate --config " + config(2, 1000, 0.2).string()), 0);
  const Dataset d = load_dataset((dir_ / "m" / "site1.csv").string());
  double missing = 0.0, cells = 0.0;
  for (const auto& r : d.records()) {
    for (auto v : r.symptoms) {
      cells += 1.0;
      if (v == SymptomValue::Missing) missing += 1.0;
    }
  }
  EXPECT_NEAR(missing / cells, 0.2, 3.0 * std::sqrt(0.2 * 0.8 / cells));
}

TEST_F(Cli, GridRowCounts) {
  ASSERT_EQ(run("--out " + (dir_ / "d2").string() + " simulate --config " + config(2, 30, 0.05).string()), 0);
  ASSERT_EQ(run("--out " + (dir_ / "t.csv").string() + " grid " + (dir_ / "d2").string() +
                " --algorithms tariff"),
            0);
  EXPECT_EQ(load_metrics_csv((dir_ / "t.csv").string()).size(), 4u);
  EXPECT_TRUE(fs::exists(dir_ / "t.csv.manifest.json"));

  ASSERT_EQ(run("--out " + (dir_ / "r.csv").string() + " grid " + (dir_ / "d2").string() +
                " --design 2 --replications 50 --algorithms tariff,interva-f"),
            0);
  const auto rows = load_metrics_csv((dir_ / "r.csv").string());
  ASSERT_EQ(rows.size(), 4u * 2u * 51u);
  EXPECT_EQ(rows[49].replicate, 50);
  EXPECT_EQ(rows[50].replicate, -1);

  EXPECT_NE(run("grid " + (dir_ / "d2").string() + " --algorithms bogus"), 0);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("vabench grid: error"), std::string::npos);
  EXPECT_NE(run("grid " + (dir_ / "missing").string()), 0);
}

TEST_F(Cli, DecomposeAndPlotPipeline) {
  ASSERT_EQ(run("--out " + (dir_ / "d6").string() + " simulate --config " + config(6, 40, 0.05).string()), 0);
  const std::string data = (dir_ / "d6").string();
  ASSERT_EQ(run("--out " + (dir_ / "g1.csv").string() + " grid " + data + fast_gibbs()), 0);
  EXPECT_EQ(load_metrics_csv((dir_ / "g1.csv").string()).size(), 180u);
  ASSERT_EQ(run("--out " + (dir_ / "g2.csv").string() + " grid " + data +
                " --design 2 --replications 2 --algorithms tariff,interva-q,interva-f"),
            0);

  std::vector<std::string> docs;
  for (int e = 1; e <= 4; ++e) {
    const std::string results = (dir_ / (e % 2 ? "g1.csv" : "g2.csv")).string();
    const std::string out = (dir_ / ("e" + std::to_string(e) + ".json")).string();
    ASSERT_EQ(run("--out " + out + " decompose " + results + " --experiment " + std::to_string(e)), 0) << e;
    docs.push_back(out);
    const json doc = json::parse(slurp(out));
    EXPECT_EQ(doc.at("rows_used"), e == 1 ? 180 : e == 2 ? 108 : e == 3 ? 150 : 90);
    EXPECT_EQ(doc.at("reports").size(), 4u);
    const bool has_gamma = doc.at("factors").size() == 4;
    EXPECT_EQ(has_gamma, e <= 2);
    for (const auto& rep : doc.at("reports")) {
      double sum = rep.at("residual").at("ss").get<double>();
      for (const auto& f : rep.at("factors")) sum += f.at("ss").get<double>();
      EXPECT_NEAR(sum, rep.at("total_ss").get<double>(), 1e-8 * std::max(1.0, rep.at("total_ss").get<double>()));
    }
    EXPECT_TRUE(fs::exists(fs::path(out).replace_extension(".csv")));
  }

  const std::string site_out = (dir_ / "site.json").string();
  ASSERT_EQ(run("--out " + site_out + " decompose " + (dir_ / "g1.csv").string() +
                " --experiment 3 --per-test-site --friedman"),
            0);
  const json site_doc = json::parse(slurp(site_out));
  EXPECT_EQ(site_doc.at("reports").size(), 6u * 4u);
  EXPECT_EQ(site_doc.at("friedman").size(), 6u * 4u);
  docs.push_back(site_out);

  std::string inputs = (dir_ / "g1.csv").string() + " " + (dir_ / "g2.csv").string();
  for (const auto& d : docs) inputs += " " + d;
  ASSERT_EQ(run("--out " + (dir_ / "figA").string() + " plot " + inputs), 0);
  ASSERT_EQ(run("--out " + (dir_ / "figB").string() + " plot " + inputs), 0);
  for (const char* f : {"grid_design1.svg", "grid_design2.svg", "variance.svg", "variance_per_site.svg",
                        "pvalues.svg"}) {
    ASSERT_TRUE(fs::exists(dir_ / "figA" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "figA" / f), slurp(dir_ / "figB" / f)) << f;
  }
  const std::string variance = slurp(dir_ / "figA" / "variance.svg");
  for (int e = 1; e <= 4; ++e) {
    EXPECT_NE(variance.find(">experiment " + std::to_string(e) + "<"), std::string::npos) << e;
  }
  EXPECT_NE(variance.find("manifest.json"), std::string::npos);
}

TEST_F(Cli, DecomposeRejectsBadExperiment) {
  std::ofstream(dir_ / "empty.csv") << std::string(kMetricsHeader) << "\n";
  EXPECT_NE(run("decompose " + (dir_ / "empty.csv").string() + " --experiment 7"), 0);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("vabench decompose: error"), std::string::npos);
}

}  // namespace
}  // namespace vabench
