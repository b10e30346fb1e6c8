// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Options: --seeds N (default 10), --quick (smaller grids, for smoke runs only).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vabench/anova.hpp"
#include "vabench/classifiers.hpp"
#include "vabench/experiment.hpp"
#include "vabench/metrics.hpp"
#include "vabench/special_functions.hpp"
#include "vabench/synth.hpp"

using namespace vabench;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failed.find(what) == std::string::npos) failed += " [failed: " + what + "]";
    }
  }
};

int failures = 0;

void report(const std::string& id, Outcome& o, double seconds) {
  std::printf("%s  %-28s %6.1fs %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), seconds,
              (o.detail.str() + o.failed).c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(const std::string& id, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, o, s);
}

CauseAssignment with_tops(const std::vector<CauseIndex>& top, std::size_t C) {
  CauseAssignment a;
  for (CauseIndex t : top) {
    std::vector<CauseIndex> r{t};
    for (CauseIndex c = 0; c < C; ++c) {
      if (c != t) r.push_back(c);
    }
    a.ranking.push_back(r);
  }
  a.csmf_estimate = top_cause_fractions(a.ranking, C);
  return a;
}

Dataset labeled(const std::vector<CauseIndex>& causes, std::size_t C) {
  std::vector<std::string> cn, sn{"s"};
  for (std::size_t c = 0; c < C; ++c) cn.push_back("c" + std::to_string(c));
  std::vector<DeathRecord> recs;
  for (std::size_t i = 0; i < causes.size(); ++i) {
    recs.push_back({"d" + std::to_string(i), "A", causes[i], {SymptomValue::Yes}});
  }
  return Dataset(sn, cn, recs);
}

void metric_identities(Outcome& o) {
  const std::vector<double> t{0.5, 0.3, 0.2};
  o.check(std::abs(csmf_accuracy(t, t) - 1.0) <= 1e-12, "csmf_acc(pred=true) = 1");
  o.check(std::abs(csmf_accuracy(t, std::vector<double>{0, 0, 1})) <= 1e-12, "csmf_acc(worst) = 0");
  const std::size_t C = 34;
  const std::vector<CauseIndex> truth(C, 0);
  std::vector<CauseIndex> chance(C, 1);
  chance[0] = 0;
  const Dataset d = labeled(truth, C);
  o.check(std::abs(ccc_cause(with_tops(truth, C), d, 0) - 1.0) <= 1e-12, "CCC perfect = 1");
  o.check(std::abs(ccc_cause(with_tops(chance, C), d, 0)) <= 1e-12, "CCC chance = 0");
  o.check(std::abs(ccc_cause(with_tops(std::vector<CauseIndex>(C, 2), C), d, 0) + 1.0 / 33.0) <= 1e-12,
          "CCC zero recall = -1/(C-1)");
  o.detail << "csmf_acc {1,0}, CCC {1,0,-1/33} at C=34, tol 1e-12";
}

SynthConfig figure_config(std::uint64_t seed, std::size_t deaths) {
  SynthConfig c;
  c.n_sites = 6;
  c.n_causes = 10;
  c.n_symptoms = 40;
  c.deaths_per_site = deaths;
  c.site_heterogeneity = 1.0;
  c.missingness = 0.05;
  c.seed = seed;
  return c;
}

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

double mean_of(const std::vector<MetricsRow>& rows, Algorithm a, bool same, Metric m) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.algorithm != a || (r.train_site == r.test_site) != same) continue;
    s += metric_value(r, m);
    ++n;
  }
  return s / static_cast<double>(n);
}

struct SeedGrids {
  std::vector<MetricsRow> design1, design2;
};

bool partition_ok(const AnovaReport& r) {
  double sum = r.residual_ss;
  for (const auto& t : r.terms) sum += t.ss;
  return std::abs(sum - r.total_ss) <= 1e-8 * std::max(1.0, r.total_ss);
}

}  // namespace

int main(int argc, char** argv) {
  int seeds = 10;
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--seeds") == 0 && i + 1 < argc) seeds = std::atoi(argv[++i]);
  }
  std::printf("vabench acceptance (seeds=%d%s, jobs=%zu)\n", seeds, quick ? ", quick" : "", jobs());

  run("metric-identities", metric_identities);

  run("grid-cardinality", [&](Outcome& o) {
    const auto data = generate(figure_config(1, quick ? 100 : 500)).data;
    GridConfig g;
    g.jobs = jobs();
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_grid(data, g);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(rows.size() == 180, "expected 180 rows");
    o.check(s < 300.0, "runtime < 5 min");
    o.detail << rows.size() << " rows, 6 sites x 5 algorithms, default Gibbs "
             << GibbsConfig{}.iterations << "/" << GibbsConfig{}.burn_in << ", "
             << (quick ? 100 : 500) << " deaths/site";
  });

  // Shared synthetic grids for the same-site and variance-share criteria.
  std::vector<SeedGrids> grids(static_cast<std::size_t>(seeds));
  const std::size_t deaths = quick ? 150 : 1000;
  const std::size_t reps = quick ? 3 : 10;
  const auto t_grid = std::chrono::steady_clock::now();
  bool grids_ok = true;
  try {
    for (int s = 0; s < seeds; ++s) {
      const auto data = generate(figure_config(static_cast<std::uint64_t>(s + 1), deaths)).data;
      GridConfig g;
      g.seed = static_cast<std::uint64_t>(s + 1);
      g.jobs = jobs();
      grids[s].design1 = run_grid(data, g);
      g.replications = reps;
      g.classifier.gibbs.iterations = 1000;
      g.classifier.gibbs.burn_in = 500;
      grids[s].design2 = run_grid(data, g);
    }
  } catch (const std::exception& e) {
    grids_ok = false;
    std::printf("grid generation failed: %s\n", e.what());
  }
  const double grid_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_grid).count();
  std::printf("      synthetic grids: %d seeds, 6 sites, C=10, S=40, tau=1.0, m=0.05, %zu deaths/site, "
              "design 2 with %zu replicates (Gibbs 1000/500); %.1fs\n",
              seeds, deaths, reps, grid_seconds);

  run("same-site-advantage", [&](Outcome& o) {
    o.check(grids_ok, "grids available");
    int good = 0;
    std::ostringstream misses;
    for (int s = 0; s < seeds && grids_ok; ++s) {
      bool ok = true;
      for (Algorithm a : all_algorithms()) {
        for (Metric m : {Metric::CsmfAccuracy, Metric::Top1}) {
          const double same = mean_of(grids[s].design1, a, true, m);
          const double cross = mean_of(grids[s].design1, a, false, m);
          if (!(same > cross)) {
            ok = false;
            misses << " seed" << s + 1 << ":" << to_string(a) << "/" << to_string(m);
          }
        }
      }
      good += ok;
    }
    const int need = (9 * seeds + 9) / 10;
    o.check(good >= need, "need >= " + std::to_string(need) + " seeds");
    o.detail << good << "/" << seeds << " seeds with same-site > cross-site for all algorithms"
             << misses.str();
    o.check(grid_seconds < 1800.0, "runtime < 30 min");
  });

  run("variance-shares", [&](Outcome& o) {
    o.check(grids_ok, "grids available");
    int good = 0, gamma_good = 0, train_good = 0;
    std::ostringstream misses;
    const std::vector<Metric> metrics{Metric::CsmfAccuracy, Metric::Top1, Metric::Top3};
    for (int s = 0; s < seeds && grids_ok; ++s) {
      bool gamma_ok = true, train_ok = true;
      for (int e = 1; e <= 4; ++e) {
        const auto& source = (e % 2 == 1) ? grids[s].design1 : grids[s].design2;
        const auto rows = experiment_rows(source, e);
        for (Metric m : metrics) {
          const auto rep = anova_sequential(rows, m, experiment_spec(e));
          if (e <= 2) {
            const auto* largest = &rep.terms.front();
            for (const auto& t : rep.terms) {
              if (t.ss > largest->ss) largest = &t;
            }
            if (largest->factor != Factor::SameSite) {
              gamma_ok = false;
              misses << " s" << s + 1 << "e" << e << to_string(m) << ":" << to_string(largest->factor);
            }
          } else {
            const double tr = rep.term(Factor::TrainSite)->proportion;
            const double al = rep.term(Factor::Algorithm)->proportion;
            if (tr < al) {
              train_ok = false;
              char buf[96];
              std::snprintf(buf, sizeof buf, " s%de%d%s:%.3f<%.3f", s + 1, e, to_string(m), tr, al);
              misses << buf;
            }
          }
        }
      }
      gamma_good += gamma_ok;
      train_good += train_ok;
      good += gamma_ok && train_ok;
    }
    const int need = (8 * seeds + 9) / 10;
    o.check(good >= need, "need >= " + std::to_string(need) + " seeds");
    o.detail << good << "/" << seeds << " seeds (gamma largest in exp 1-2: " << gamma_good
             << ", train >= algorithm in exp 3-4: " << train_good << ")" << misses.str();
  });

  run("anova-correctness", [&](Outcome& o) {
    std::size_t fits = 0;
    for (int s = 0; s < seeds && grids_ok; ++s) {
      for (int e = 1; e <= 4; ++e) {
        const auto& source = (e % 2 == 1) ? grids[s].design1 : grids[s].design2;
        const auto rows = experiment_rows(source, e);
        for (Metric m : all_metrics()) {
          ++fits;
          o.check(partition_ok(anova_sequential(rows, m, experiment_spec(e))), "partition identity");
          std::map<std::string, std::vector<MetricsRow>> by_site;
          for (const auto& r : rows) by_site[r.test_site].push_back(r);
          for (const auto& [site, subset] : by_site) {
            ++fits;
            o.check(partition_ok(anova_sequential(subset, m, experiment_spec(e, true))),
                    "per-site partition identity");
          }
        }
      }
    }
    // order invariance on the balanced 180-row grid without the same-site term
    double worst_order = 0.0;
    if (grids_ok) {
      const auto rows = experiment_rows(grids[0].design1, 1);
      for (Metric m : all_metrics()) {
        std::vector<Factor> order{Factor::Algorithm, Factor::TestSite, Factor::TrainSite};
        FactorSpec spec;
        spec.factors = order;
        const auto ref = anova_sequential(rows, m, spec);
        while (std::next_permutation(order.begin(), order.end())) {
          spec.factors = order;
          const auto rep = anova_sequential(rows, m, spec);
          for (Factor f : order) {
            const double gap = std::abs(rep.term(f)->ss - ref.term(f)->ss) /
                               std::max(1.0, std::abs(ref.term(f)->ss));
            worst_order = std::max(worst_order, gap);
          }
        }
      }
    }
    o.check(worst_order <= 1e-8, "order invariance");
    // closed-form group means on a balanced 3 x 4 fixture
    std::vector<MetricsRow> fixture;
    const double a[3] = {0.2, 0.6, 0.45}, b[4] = {0.0, 0.05, -0.1, 0.2};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) {
        MetricsRow r;
        r.train_site = "t" + std::to_string(i);
        r.test_site = "s" + std::to_string(j);
        r.ccc = a[i] + b[j];
        fixture.push_back(r);
      }
    }
    FactorSpec spec;
    spec.factors = {Factor::TrainSite, Factor::TestSite};
    const auto fit = fit_ols(fixture, Metric::Ccc, spec);
    double worst_coef = std::abs(fit.coefficients[0] - (a[0] + b[0]));
    for (int i = 1; i < 3; ++i) worst_coef = std::max(worst_coef, std::abs(fit.coefficients[i] - (a[i] - a[0])));
    for (int j = 1; j < 4; ++j) {
      worst_coef = std::max(worst_coef, std::abs(fit.coefficients[2 + j] - (b[j] - b[0])));
    }
    o.check(worst_coef <= 1e-10, "closed-form coefficients");
    o.detail << fits << " fits with partition identity <= 1e-8; order gap " << worst_order
             << "; coefficient error " << worst_coef;
  });

  run("special-functions", [&](Outcome& o) {
    double worst = 0.0;
    for (double x : {0.0, 0.25, 1.0}) worst = std::max(worst, std::abs(reg_inc_beta(x, 1, 1) - x));
    for (double aa : {0.5, 1.0, 3.0, 17.0, 250.0}) worst = std::max(worst, std::abs(reg_inc_beta(0.5, aa, aa) - 0.5));
    for (double x : {0.5, 2.0, 10.0}) {
      worst = std::max(worst, std::abs(reg_inc_gamma_lower(1.0, x) - (1.0 - std::exp(-x))));
    }
    o.check(worst <= 1e-10, "closed-form identities");
    // F(2, 10) density integrated on [0, f] by Simpson's rule
    const double f = 4.1028, d1 = 2.0, d2 = 10.0;
    const double ln = std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2) + (d1 / 2) * std::log(d1 / d2);
    auto dens = [&](double x) { return std::exp(ln - ((d1 + d2) / 2) * std::log1p(d1 * x / d2)); };
    const int n = 100000;
    double sum = dens(0.0) + dens(f);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * dens(f * i / n);
    const double oracle = 1.0 - sum * (f / n) / 3.0;
    const double p = f_upper_tail(f, d1, d2);
    o.check(std::abs(p - 0.05) <= 5e-4 && std::abs(oracle - 0.05) <= 5e-4, "F tail 0.05 +- 5e-4");
    o.check(std::abs(p - oracle) <= 1e-8, "F tail vs integration");
    char buf[160];
    std::snprintf(buf, sizeof buf, "identity error %.2e; f_upper_tail(4.1028,2,10)=%.6f, integration %.6f", worst, p, oracle);
    o.detail << buf;
  });

  run("friedman", [&](Outcome& o) {
    Matrix t(2, 3);
    t(0, 0) = 0.1; t(0, 1) = 0.2; t(0, 2) = 0.3;
    t(1, 0) = 0.4; t(1, 1) = 0.5; t(1, 2) = 0.9;
    const auto r = friedman_test(t);
    o.check(std::abs(r.statistic - 4.0) <= 1e-12 && std::abs(r.p - std::exp(-2.0)) <= 1e-12, "Q=4, p=e^-2");
    Rng rng(99);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng() % 8, k = 2 + rng() % 6;
      Matrix a(n, k), b(n, k);
      for (std::size_t i = 0; i < n * k; ++i) {
        a.values()[i] = std::floor(uniform01(rng) * 5.0) / 5.0;
        b.values()[i] = std::log(a.values()[i] + 0.3) * 3.0 + 1.0;
      }
      const auto ra = friedman_test(a), rb = friedman_test(b);
      if (ra.statistic != rb.statistic || ra.p != rb.p) ++mismatches;
    }
    o.check(mismatches == 0, "monotone invariance");
    o.detail << "Q=" << r.statistic << " p=" << r.p << "; 200 random fixtures, " << mismatches
             << " transform mismatches";
  });

  run("gibbs-validity", [&](Outcome& o) {
    Matrix p(2, 2);
    p(0, 0) = 0.8; p(0, 1) = 0.3; p(1, 0) = 0.2; p(1, 1) = 0.6;
    std::vector<DeathRecord> recs{{"a", "A", 0, {SymptomValue::Yes, SymptomValue::No}},
                                  {"b", "A", 0, {SymptomValue::Yes, SymptomValue::Missing}},
                                  {"c", "A", 1, {SymptomValue::No, SymptomValue::Yes}}};
    const Dataset tiny({"s0", "s1"}, {"c0", "c1"}, recs);
    double num = 0.0, den = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double f = (x * 0.8 * 0.7 + (1 - x) * 0.2 * 0.4) * (x * 0.8 + (1 - x) * 0.2) *
                       (x * 0.2 * 0.3 + (1 - x) * 0.8 * 0.6);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      num += w * x * f;
      den += w * f;
    }
    GibbsConfig cfg;
    cfg.iterations = 100000;
    cfg.burn_in = 1000;
    cfg.seed = 3;
    const double est = run_gibbs(p, tiny, cfg).csmf_mean[0];
    o.check(std::abs(est - num / den) <= 0.02, "tiny case within 0.02");

    SynthConfig sc;
    sc.n_sites = 1;
    sc.n_causes = 5;
    sc.n_symptoms = 20;
    sc.deaths_per_site = 2000;
    sc.site_csmfs = std::vector<std::vector<double>>{{0.3, 0.25, 0.2, 0.15, 0.1}};
    sc.seed = 11;
    const auto synth = generate(sc);
    GibbsConfig rc;
    rc.seed = 12;
    const auto fit = run_gibbs(synth.truth.base_condprob, synth.data, rc);
    double l1 = 0.0;
    for (std::size_t c = 0; c < 5; ++c) l1 += std::abs(fit.csmf_mean[c] - (*sc.site_csmfs)[0][c]);
    o.check(l1 < 0.05, "recovery L1 < 0.05");

    CondProbMatrix sci{synth.truth.base_condprob, SciProvenance::FixedConverted};
    GibbsConfig dc;
    dc.iterations = 400;
    dc.burn_in = 100;
    const auto a = insilico_fit(sci, synth.data, dc), b = insilico_fit(sci, synth.data, dc);
    o.check(a.scores == b.scores && a.csmf_estimate == b.csmf_estimate, "bit determinism");
    char buf[160];
    std::snprintf(buf, sizeof buf, "tiny %.4f vs quadrature %.4f; recovery L1 %.4f; determinism ok", est,
                  num / den, l1);
    o.detail << buf;
  });

  run("dirichlet-resampling", [&](Outcome& o) {
    SynthConfig sc;
    sc.n_sites = 1;
    sc.n_causes = 10;
    sc.n_symptoms = 5;
    sc.deaths_per_site = 1000;
    sc.seed = 4;
    const Dataset test = generate(sc).data;
    Rng trng(5);
    const auto target = sample_dirichlet(1.0, 10, trng);
    const auto present = empirical_csmf(test);
    std::vector<double> renorm(10, 0.0);
    double tot = 0.0;
    for (std::size_t c = 0; c < 10; ++c) tot += present[c] > 0 ? target[c] : 0.0;
    for (std::size_t c = 0; c < 10; ++c) renorm[c] = present[c] > 0 ? target[c] / tot : 0.0;
    std::vector<double> mean(10, 0.0);
    const int runs = 100;
    for (int s = 0; s < runs; ++s) {
      Rng rng(derive_seed(77, {"resample", std::to_string(s)}));
      const auto got = empirical_csmf(resample_test(test, target, rng));
      for (std::size_t c = 0; c < 10; ++c) mean[c] += got[c] / runs;
    }
    double worst_z = 0.0;
    for (std::size_t c = 0; c < 10; ++c) {
      const double se = std::sqrt(renorm[c] * (1 - renorm[c]) / (static_cast<double>(test.size()) * runs));
      if (se > 0) worst_z = std::max(worst_z, std::abs(mean[c] - renorm[c]) / se);
    }
    o.check(worst_z <= 3.0, "resample mean within 3 SE");

    Rng drng(6);
    const std::size_t C = 34, draws = 10000;
    std::vector<double> sum(C, 0.0);
    for (std::size_t i = 0; i < draws; ++i) {
      const auto v = sample_dirichlet(1.0, C, drng);
      for (std::size_t c = 0; c < C; ++c) sum[c] += v[c];
    }
    const double se = std::sqrt((C - 1.0) / (C * C * (C + 1.0)) / draws);
    double worst_d = 0.0;
    for (double v : sum) worst_d = std::max(worst_d, std::abs(v / draws - 1.0 / C) / se);
    o.check(worst_d <= 3.0, "Dirichlet means within 3 SE");
    char buf[160];
    std::snprintf(buf, sizeof buf, "resample max |z| %.2f over 100 seeds; Dirichlet(1) C=34 max |z| %.2f", worst_z,
                  worst_d);
    o.detail << buf;
  });

  run("real-data-recipe", [&](Outcome& o) {
    // Pipeline shape check: 4 experiments x 4 metrics of train-site p-values.
    o.check(grids_ok, "grids available");
    int cells = 0;
    for (int e = 1; e <= 4 && grids_ok; ++e) {
      const auto& source = (e % 2 == 1) ? grids[0].design1 : grids[0].design2;
      for (Metric m : all_metrics()) {
        const auto rep = anova_sequential(experiment_rows(source, e), m, experiment_spec(e));
        const double p = rep.term(Factor::TrainSite)->p;
        if (p >= 0.0 && p <= 1.0) ++cells;
      }
    }
    o.check(cells == 16, "16 p-values");
    std::ifstream readme(VABENCH_README);
    std::stringstream text;
    text << readme.rdbuf();
    o.check(text.str().find("## Reproducing with real data") != std::string::npos, "README recipe section");
    o.detail << cells << "/16 train-site p-values; README recipe "
             << (text.str().find("## Reproducing with real data") != std::string::npos ? "present" : "missing")
             << " (real data not bundled)";
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
