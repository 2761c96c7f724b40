// Copyright 2026 The hteb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hteb/stats/agreement.hpp"
#include "hteb/stats/bootstrap.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/stats/drift.hpp"
#include "hteb/stats/holm.hpp"
#include "hteb/stats/signed_rank.hpp"
#include "hteb/stats/split_half.hpp"
#include "oracles.hpp"

namespace hteb::stats {
namespace {

std::vector<double> random_deltas(std::mt19937_64& gen, std::size_t n, bool with_ties) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = with_ties ? std::round(u(gen) * 2.0) / 2.0 : u(gen);
  return xs;
}

TEST(Wilcoxon, AllPositiveFiveIsExtreme) {
  const std::vector<double> d{0.4, 1.1, 2.3, 0.7, 3.0};
  const auto r = wilcoxon_signed_rank(d);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
  EXPECT_DOUBLE_EQ(r.w_plus, 15.0);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
}

TEST(Wilcoxon, SymmetricDeltasGivePOne) {
  const std::vector<double> d{1.0, -1.0, 2.5, -2.5, 4.0, -4.0};
  EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(d).p_value, 1.0);
}

TEST(Wilcoxon, ZerosAreDiscarded) {
  const std::vector<double> d{0.0, 0.4, 1.1, 0.0, 2.3, 0.7, 3.0};
  const auto r = wilcoxon_signed_rank(d);
  EXPECT_EQ(r.n, 5u);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
}

TEST(Wilcoxon, AllZeroThrows) {
  const std::vector<double> d{0.0, 0.0};
  try {
    wilcoxon_signed_rank(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kAllZero);
  }
}

TEST(Wilcoxon, MixedEightMatchesEnumeration) {
  const std::vector<double> d{1.5, -0.5, 2.0, 2.0, -3.5, 4.0, 0.25, -1.5};
  EXPECT_EQ(wilcoxon_signed_rank(d).p_value, oracle::wilcoxon_enumeration_p(d));
}

TEST(Wilcoxon, RandomFixturesMatchEnumeration) {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 100; ++rep) {
    const auto d = random_deltas(gen, 1 + rep % 12, rep % 2 == 0);
    bool any = false;
    for (double x : d) any = any || x != 0.0;
    if (!any) continue;
    EXPECT_EQ(wilcoxon_signed_rank(d).p_value, oracle::wilcoxon_enumeration_p(d)) << "rep " << rep;
  }
}

TEST(Wilcoxon, NormalApproximationAboveTwentyFive) {
  std::mt19937_64 gen(11);
  auto d = random_deltas(gen, 40, false);
  for (auto& x : d) x += 1.0;
  const auto r = wilcoxon_signed_rank(d);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 0.05);
}

TEST(HodgesLehmann, ThreeValues) {
  const std::vector<double> d{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(hodges_lehmann(d).shift, 2.0);
}

TEST(HodgesLehmann, SingleValue) {
  const std::vector<double> d{-4.25};
  const auto r = hodges_lehmann(d);
  EXPECT_EQ(r.shift, -4.25);
  EXPECT_EQ(r.ci_low, -4.25);
  EXPECT_EQ(r.ci_high, -4.25);
}

TEST(HodgesLehmann, TenValuesMatchWalshEnumeration) {
  const std::vector<double> d{-1.2, 0.3, 2.2, -0.4, 1.9, 3.1, -2.6, 0.8, 1.1, 0.05};
  const auto r = hodges_lehmann(d);
  const auto o = oracle::hodges_lehmann_enumeration(d, 0.95);
  EXPECT_EQ(r.shift, o.shift);
  EXPECT_EQ(r.ci_low, o.low);
  EXPECT_EQ(r.ci_high, o.high);
}

TEST(HodgesLehmann, RandomFixturesMatchWalshEnumeration) {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 50; ++rep) {
    const auto d = random_deltas(gen, 1 + rep % 15, rep % 3 == 0);
    const auto r = hodges_lehmann(d);
    const auto o = oracle::hodges_lehmann_enumeration(d, 0.95);
    EXPECT_EQ(r.shift, o.shift);
    EXPECT_EQ(r.ci_low, o.low);
    EXPECT_EQ(r.ci_high, o.high);
    EXPECT_LE(r.ci_low, r.shift);
    EXPECT_GE(r.ci_high, r.shift);
  }
}

TEST(HodgesLehmann, LowerConfidenceNestsInside) {
  std::mt19937_64 gen(5);
  const auto d = random_deltas(gen, 30, false);
  const auto wide = hodges_lehmann(d, 0.95);
  const auto narrow = hodges_lehmann(d, 0.80);
  EXPECT_LE(wide.ci_low, narrow.ci_low);
  EXPECT_GE(wide.ci_high, narrow.ci_high);
  EXPECT_LE(narrow.ci_low, narrow.shift);
  EXPECT_GE(narrow.ci_high, narrow.shift);
}

TEST(Holm, SingleUnchanged) {
  const std::vector<double> p{0.037};
  EXPECT_EQ(holm_correct(p)[0], 0.037);
}

TEST(Holm, StepDownExample) {
  const std::vector<double> p{0.01, 0.04, 0.03};
  const auto adj = holm_correct(p);
  EXPECT_DOUBLE_EQ(adj[0], 0.03);
  EXPECT_DOUBLE_EQ(adj[1], 0.06);
  EXPECT_DOUBLE_EQ(adj[2], 0.06);
}

TEST(Holm, MatchesDefinitionAndIsConservative) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> p(2 + rep % 9);
    for (auto& x : p) x = u(gen);
    const auto adj = holm_correct(p);
    const auto expected = oracle::holm(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_DOUBLE_EQ(adj[i], expected[i]);
      EXPECT_GE(adj[i], p[i]);
      EXPECT_LE(adj[i], 1.0);
    }
    std::vector<double> rev(p.rbegin(), p.rend());
    const auto adj_rev = holm_correct(rev);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(adj_rev[i], adj[p.size() - 1 - i]);
  }
}

TEST(Holm, RejectsOutOfRange) {
  const std::vector<double> p{0.5, 1.2};
  EXPECT_THROW(holm_correct(p), Error);
}

TEST(Bootstrap, ConstantValuesCollapse) {
  const std::vector<double> v(12, 3.25);
  const auto ci = percentile_bootstrap_ci(v, 2000, 0.95, 1);
  EXPECT_DOUBLE_EQ(ci.low, 3.25);
  EXPECT_DOUBLE_EQ(ci.high, 3.25);
}

TEST(Bootstrap, ContainsSampleMeanAndIsSeeded) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> nd(4.0, 1.0);
  std::vector<double> v(30);
  for (auto& x : v) x = nd(gen);
  const auto a = percentile_bootstrap_ci(v, 5000, 0.95, 42);
  const auto b = percentile_bootstrap_ci(v, 5000, 0.95, 42);
  EXPECT_EQ(a.low, b.low);
  EXPECT_EQ(a.high, b.high);
  EXPECT_LT(a.low, mean(v));
  EXPECT_GT(a.high, mean(v));
}

TEST(Bootstrap, TooFewThrows) {
  const std::vector<double> v{1.0};
  EXPECT_THROW(percentile_bootstrap_ci(v), Error);
}

TEST(PairedBootstrap, IdenticalSamplesGivePOne) {
  const std::vector<double> a{4.0, 3.5, 5.0, 4.5};
  EXPECT_DOUBLE_EQ(paired_bootstrap_p(a, a, 1000, 9), 1.0);
}

TEST(PairedBootstrap, ConstantShiftHitsFloor) {
  std::vector<double> b{1.0, 2.0, 3.0, 4.0, 2.5};
  std::vector<double> a = b;
  for (auto& x : a) x += 10.0;
  EXPECT_DOUBLE_EQ(paired_bootstrap_p(a, b, 10000, 9), 1.0 / 10000.0);
}

TEST(PairedBootstrap, MatchesIndependentResampler) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> nd(0.1, 1.0);
  std::vector<double> a(20), b(20);
  for (std::size_t i = 0; i < 20; ++i) {
    b[i] = nd(gen);
    a[i] = b[i] + nd(gen);
  }
  const std::size_t B = 4000;
  const std::uint64_t seed = 77;
  // Same index stream: mt19937_64 draws mapped with a 128-bit multiply-shift.
  std::mt19937_64 stream(seed);
  double le = 0, ge = 0;
  for (std::size_t r = 0; r < B; ++r) {
    double s = 0;
    for (std::size_t i = 0; i < 20; ++i) {
      const auto j = static_cast<std::size_t>((static_cast<unsigned __int128>(stream()) * 20u) >> 64);
      s += a[j] - b[j];
    }
    const double m = s / 20.0;
    le += m <= 0.0;
    ge += m >= 0.0;
  }
  const double expected = std::max(1.0 / B, std::min(1.0, 2.0 * std::min(le, ge) / B));
  EXPECT_DOUBLE_EQ(paired_bootstrap_p(a, b, B, seed), expected);
  EXPECT_DOUBLE_EQ(paired_bootstrap_p(b, a, B, seed), paired_bootstrap_p(a, b, B, seed));
}

TEST(PairedBootstrap, LengthMismatchThrows) {
  const std::vector<double> a{1, 2, 3}, b{1, 2};
  try {
    paired_bootstrap_p(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLengthMismatch);
  }
}

TEST(RankCorrelation, IdentityAndReversal) {
  const std::vector<double> x{0.3, 1.7, -2.0, 4.4, 0.9};
  const std::vector<double> r(x.rbegin(), x.rend());
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  EXPECT_DOUBLE_EQ(spearman_rho(x, x), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman_rho(x, neg), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, neg), -1.0);
}

TEST(RankCorrelation, SpearmanFivePairHandComputation) {
  // Ranks x: 1 2 3 4 5, ranks y: 2 1 4 3 5; sum d^2 = 4, rho = 1 - 6*4/(5*24) = 0.8.
  const std::vector<double> x{10, 20, 30, 40, 50};
  const std::vector<double> y{0.2, 0.1, 0.9, 0.5, 1.3};
  EXPECT_NEAR(spearman_rho(x, y), 0.8, 1e-12);
}

TEST(RankCorrelation, KendallTiedFixturesMatchOracle) {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<int> u(0, 4);
  int checked = 0;
  while (checked < 100) {
    const std::size_t n = 3 + static_cast<std::size_t>(checked % 10);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(gen);
      y[i] = u(gen);
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
      continue;
    }
    EXPECT_NEAR(kendall_tau(x, y), oracle::kendall_tau_b(x, y), 1e-12);
    ++checked;
  }
}

TEST(RankCorrelation, InvariantUnderMonotoneMaps) {
  const std::vector<double> x{0.3, 1.7, 1.7, 4.4, 0.9, 2.0};
  const std::vector<double> y{2.0, 1.0, 3.0, 3.0, 0.5, 6.0};
  std::vector<double> fx(x.size()), fy(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fx[i] = std::exp(x[i]);
    fy[i] = y[i] * y[i] * y[i] + 1.0;
  }
  EXPECT_NEAR(spearman_rho(x, y), spearman_rho(fx, fy), 1e-12);
  EXPECT_NEAR(kendall_tau(x, y), kendall_tau(fx, fy), 1e-12);
}

TEST(RankCorrelation, ConstantInputIsDegenerate) {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(spearman_rho(x, y), Error);
  EXPECT_THROW(kendall_tau(x, y), Error);
}

TEST(Gwet, WeightEndpoints) {
  const auto w = ordinal_weights(5);
  EXPECT_EQ(w[0][4], 0.0);
  EXPECT_EQ(w[4][0], 0.0);
  EXPECT_EQ(w[2][2], 1.0);
  EXPECT_DOUBLE_EQ(w[0][1], 0.9);
  EXPECT_DOUBLE_EQ(w[0][2], 0.7);
  EXPECT_DOUBLE_EQ(w[0][3], 0.4);
}

TEST(Gwet, PerfectAgreementIsOne) {
  const RatingMatrix r{{3, 3, 3}, {1, 1, std::nullopt}, {5, 5, 5}, {2, 2, 2}};
  const std::vector<int> cats{1, 2, 3, 4, 5};
  EXPECT_EQ(gwet_ac2(r, cats).ac2, 1.0);
}

// Worked example, 5 categories, weights 1 / .9 / .7 / .4 / 0 by distance.
//   item 1 ratings (1,2,1): r = (2,1,0,0,0); r* = (2.9, 2.8, ...);
//       2*1.9 + 1*1.8 = 5.6, / (3*2) = 14/15
//   item 2 ratings (3,3,4): same pattern one step up, 14/15
//   item 3 ratings (5,4,-): r = (0,0,0,1,1); 0.9 + 0.9 = 1.8, / (2*1) = 9/10
//   item 4 ratings (2,2,2): 3*2 / 6 = 1
//   pa = (14/15 + 14/15 + 9/10 + 1) / 4 = 113/120
//   pi = (1/6, 1/3, 1/6, 5/24, 1/8); sum pi(1-pi) = 1 - sum pi^2 = 223/288
//   sum of weights = 18, pe = 18 / (5*4) * 223/288 = 223/320
//   AC2 = (113/120 - 223/320) / (1 - 223/320) = 235/291
TEST(Gwet, WorkedExample) {
  const RatingMatrix r{{1, 2, 1}, {3, 3, 4}, {5, 4, std::nullopt}, {2, 2, 2}};
  const std::vector<int> cats{1, 2, 3, 4, 5};
  const auto res = gwet_ac2(r, cats);
  EXPECT_NEAR(res.ac2, 235.0 / 291.0, 1e-9);
  EXPECT_EQ(res.n_items, 4u);
  EXPECT_EQ(res.n_raters, 3u);
  EXPECT_EQ(res.n_categories, 5u);
}

TEST(Gwet, OrderPreservingRelabelIsInvariant) {
  const RatingMatrix r{{1, 2, 1}, {3, 3, 4}, {5, 4, std::nullopt}, {2, 2, 2}};
  const RatingMatrix shifted{{10, 20, 10}, {30, 30, 40}, {50, 40, std::nullopt}, {20, 20, 20}};
  const std::vector<int> cats{1, 2, 3, 4, 5};
  const std::vector<int> cats10{10, 20, 30, 40, 50};
  EXPECT_DOUBLE_EQ(gwet_ac2(r, cats).ac2, gwet_ac2(shifted, cats10).ac2);
}

TEST(Gwet, SingleRaterIsInsufficient) {
  const RatingMatrix r{{1}, {2}};
  const std::vector<int> cats{1, 2, 3};
  try {
    gwet_ac2(r, cats);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInsufficientRaters);
  }
}

TEST(Drift, Endpoints) {
  EXPECT_NEAR(embedding_drift({1, 2, 3}, {1, 2, 3}), 0.0, 1e-15);
  EXPECT_NEAR(embedding_drift({1, 0}, {0, 1}), 1.0, 1e-15);
  EXPECT_NEAR(embedding_drift({1, -2}, {-1, 2}), 2.0, 1e-15);
  EXPECT_NEAR(embedding_drift({0.3, 0.4}, {3.0, 4.0}), 0.0, 1e-15);
  EXPECT_THROW(embedding_drift({0, 0}, {1, 0}), Error);
}

TEST(SplitHalf, DuplicatedDatasetsGiveOne) {
  SplitHalfInput in;
  in.models = {"a", "b", "c", "d"};
  in.datasets = {{"sts1", "STS", {1, 2, 3, 4}},     {"sts2", "STS", {1, 2, 3, 4}},
                 {"ret1", "Retrieval", {9, 3, 5, 1}}, {"ret2", "Retrieval", {9, 3, 5, 1}}};
  const auto r = split_half_reliability(in, 50, 1);
  EXPECT_DOUBLE_EQ(r.median_rho, 1.0);
  EXPECT_EQ(r.n_splits, 50u);
}

TEST(SplitHalf, RandomScoresCentreOnZero) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> nd(0.0, 1.0);
  SplitHalfInput in;
  for (int m = 0; m < 8; ++m) in.models.push_back("m" + std::to_string(m));
  for (int d = 0; d < 20; ++d) {
    StratumDataset ds{"d" + std::to_string(d), d % 2 ? "STS" : "Retrieval", {}};
    for (int m = 0; m < 8; ++m) ds.model_scores.push_back(nd(gen));
    in.datasets.push_back(ds);
  }
  const auto r = split_half_reliability(in, 400, 3);
  EXPECT_NEAR(r.median_rho, 0.0, 0.15);
}

TEST(SplitHalf, SeededAndOrderIndependent) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd(0.0, 1.0);
  SplitHalfInput in;
  in.models = {"a", "b", "c", "d", "e"};
  for (int d = 0; d < 9; ++d) {
    StratumDataset ds{"d" + std::to_string(d), d % 3 ? "STS" : "Clustering", {}};
    for (int m = 0; m < 5; ++m) ds.model_scores.push_back(nd(gen) + m);
    in.datasets.push_back(ds);
  }
  SplitHalfInput rev = in;
  std::reverse(rev.datasets.begin(), rev.datasets.end());
  EXPECT_EQ(split_half_reliability(in, 200, 5).median_rho,
            split_half_reliability(rev, 200, 5).median_rho);
}

TEST(SplitHalf, TooFewModels) {
  SplitHalfInput in;
  in.models = {"a", "b"};
  try {
    split_half_reliability(in, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooFewModels);
  }
}

}  // namespace
}  // namespace hteb::stats
