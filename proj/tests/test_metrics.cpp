#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "vabench/error.hpp"
#include "vabench/metrics.hpp"

namespace vabench {
namespace {

// Assignment whose ranking puts `top[d]` first, remaining causes in index order.
CauseAssignment assignment_with_tops(const std::vector<CauseIndex>& top, std::size_t C) {
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

Dataset labels(const std::vector<CauseIndex>& causes, std::size_t C) {
  std::vector<std::pair<std::size_t, std::string>> deaths;
  for (auto c : causes) deaths.emplace_back(c, "Y");
  return testing::make_dataset(C, deaths);
}

TEST(Ccc, PerCauseExamples) {
  const std::size_t C = 34;
  std::vector<CauseIndex> truth(34, 0);
  // perfect
  EXPECT_EQ(ccc_cause(assignment_with_tops(truth, C), labels(truth, C), 0), 1.0);
  // recall 1/34
  std::vector<CauseIndex> pred(34, 1);
  pred[0] = 0;
  EXPECT_EQ(ccc_cause(assignment_with_tops(pred, C), labels(truth, C), 0), 0.0);
  // zero recall
  std::vector<CauseIndex> wrong(34, 5);
  EXPECT_NEAR(ccc_cause(assignment_with_tops(wrong, C), labels(truth, C), 0), -1.0 / 33.0, 1e-12);
  // recall 0.5, C = 3
  EXPECT_NEAR(ccc_cause(assignment_with_tops({0, 1}, 3), labels({0, 0}, 3), 0), 0.25, 1e-12);
  EXPECT_THROW(ccc_cause(assignment_with_tops({0, 1}, 3), labels({0, 0}, 3), 2), DataError);
}

TEST(Ccc, OverallMeanOverPresentCauses) {
  // recalls: cause0 1 (2/2), cause1 0.5 (1/2), cause2 0 (0/1)
  const std::vector<CauseIndex> truth{0, 0, 1, 1, 2};
  const std::vector<CauseIndex> pred{0, 0, 1, 0, 0};
  const double expected = (1.0 + 0.25 + -0.5) / 3.0;
  EXPECT_NEAR(ccc_overall(assignment_with_tops(pred, 3), labels(truth, 3)), expected, 1e-12);
  EXPECT_EQ(ccc_overall(assignment_with_tops(truth, 3), labels(truth, 3)), 1.0);
  // cause 3 absent from the test set is excluded
  EXPECT_NEAR(ccc_overall(assignment_with_tops(pred, 4), labels(truth, 4)),
              ((1.0 - 0.25) / 0.75 + (0.5 - 0.25) / 0.75 - 1.0 / 3.0) / 3.0, 1e-12);
}

TEST(Ccc, RandomAssignmentIsNearZero) {
  std::mt19937_64 rng(1);
  const std::size_t C = 5;
  std::vector<CauseIndex> truth, pred;
  for (int i = 0; i < 50000; ++i) {
    truth.push_back(i % C);
    pred.push_back(rng() % C);
  }
  EXPECT_NEAR(ccc_overall(assignment_with_tops(pred, C), labels(truth, C)), 0.0, 0.02);
}

TEST(Ccc, ConstantClassifierBelowOne) {
  const std::vector<CauseIndex> truth{0, 1, 1, 2};
  const std::vector<CauseIndex> pred(4, 1);
  EXPECT_LT(ccc_overall(assignment_with_tops(pred, 3), labels(truth, 3)), 1.0);
}

TEST(CsmfAccuracy, Examples) {
  const std::vector<double> truth{0.5, 0.3, 0.2};
  EXPECT_EQ(csmf_accuracy(truth, truth), 1.0);
  EXPECT_NEAR(csmf_accuracy(truth, std::vector<double>{0.0, 0.0, 1.0}), 0.0, 1e-12);
  EXPECT_NEAR(csmf_accuracy(truth, std::vector<double>{0.2, 0.3, 0.5}), 1.0 - 0.6 / 1.6, 1e-12);
  EXPECT_THROW(csmf_accuracy(truth, std::vector<double>{1.0}), ConfigError);
  EXPECT_THROW(csmf_accuracy(std::vector<double>{1.0}, std::vector<double>{1.0}), NumericError);
}

TEST(CsmfAccuracy, BoundedOnRandomVectors) {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(0.5, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> t(6), p(6);
    for (auto& v : t) v = g(rng);
    for (auto& v : p) v = g(rng);
    const double st = std::accumulate(t.begin(), t.end(), 0.0);
    const double sp = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : t) v /= st;
    for (auto& v : p) v /= sp;
    const double acc = csmf_accuracy(t, p);
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
    if (t != p) EXPECT_LT(acc, 1.0);
  }
}

TEST(TopK, PositionsExample) {
  // true cause at ranking positions 1, 2, 4, 3
  CauseAssignment a;
  a.ranking = {{0, 1, 2, 3}, {1, 0, 2, 3}, {1, 2, 3, 0}, {1, 2, 0, 3}};
  a.csmf_estimate = top_cause_fractions(a.ranking, 4);
  const Dataset truth = labels({0, 0, 0, 0}, 4);
  EXPECT_DOUBLE_EQ(topk_accuracy(a, truth, 3), 0.75);
  EXPECT_DOUBLE_EQ(topk_accuracy(a, truth, 1), 0.25);
  EXPECT_EQ(topk_accuracy(a, truth, 4), 1.0);
  EXPECT_THROW(topk_accuracy(a, truth, 5), ConfigError);
}

TEST(TopK, NondecreasingAndPermutationInvariant) {
  std::mt19937_64 rng(12);
  const std::size_t C = 6, N = 40;
  CauseAssignment a;
  std::vector<CauseIndex> truth;
  for (std::size_t d = 0; d < N; ++d) {
    std::vector<CauseIndex> r(C);
    std::iota(r.begin(), r.end(), CauseIndex{0});
    std::shuffle(r.begin(), r.end(), rng);
    a.ranking.push_back(r);
    truth.push_back(rng() % C);
  }
  a.csmf_estimate = top_cause_fractions(a.ranking, C);
  const Dataset t = labels(truth, C);
  double prev = 0.0;
  for (std::size_t k = 1; k <= C; ++k) {
    const double acc = topk_accuracy(a, t, k);
    EXPECT_GE(acc, prev);
    prev = acc;
  }
  EXPECT_EQ(prev, 1.0);

  const MetricsRow base = compute_metrics(a, t);
  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  CauseAssignment b;
  std::vector<CauseIndex> truth_b;
  for (auto i : perm) {
    b.ranking.push_back(a.ranking[i]);
    truth_b.push_back(truth[i]);
  }
  b.csmf_estimate = a.csmf_estimate;
  const MetricsRow shuffled = compute_metrics(b, labels(truth_b, C));
  EXPECT_NEAR(shuffled.ccc, base.ccc, 1e-12);
  EXPECT_EQ(shuffled.top1, base.top1);
  EXPECT_EQ(shuffled.top3, base.top3);
  EXPECT_NEAR(shuffled.csmf_accuracy, base.csmf_accuracy, 1e-12);
  EXPECT_LE(base.top1, base.top3);
}

TEST(ComputeMetrics, RequiresLabels) {
  const Dataset unlabeled = testing::parse("id,site,cause,s1\nd1,A,,Y\n", std::vector<std::string>{"a", "b"});
  EXPECT_THROW(compute_metrics(assignment_with_tops({0}, 2), unlabeled), DataError);
  EXPECT_THROW(compute_metrics(assignment_with_tops({0, 1}, 2), labels({0}, 2)), DataError);
}

}  // namespace
}  // namespace vabench
