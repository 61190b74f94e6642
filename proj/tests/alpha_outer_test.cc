// Copyright 2026 The smallcell-vrm Authors
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

#include "vrm/alpha_outer.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "vrm/relaxed_problem.h"

namespace vrm {
namespace {

// InP `m`'s part of the objective with x, y and z frozen and every rate
// recomputed at the split `alpha`.
double FrozenInpObjective(const Scenario& s, const AllocationPoint& p, int m, double alpha,
                          const SchemeOptions& options) {
  const ScenarioConfig& c = s.config();
  Eigen::VectorXd split = Eigen::VectorXd::Constant(s.num_inps(), 0.5);
  split(m) = alpha;
  const RateTable r = BuildRateTable(s, split);
  double v = 0.0;
  for (int b : s.bs_of(m)) {
    const bool macro = s.bs(b).is_macro();
    double load = 0.0;
    for (int u = 0; u < s.num_users(); ++u) {
      if (p.x(u, b) < 0.5) continue;
      v += s.payment(u) * std::log(p.y(u, b) * r.access(u, b));
      load += p.y(u, b) * r.access(u, b);
      v -= macro ? c.Price(m) * alpha * c.BandwidthHz(m) * c.MacroPowerW(m) * p.y(u, b)
                 : c.Price(m) * c.SbsWeight(m) * (1 - alpha) * c.BandwidthHz(m) *
                       c.SbsPowerW(m) * p.y(u, b);
    }
    if (macro) continue;
    v -= options.self_backhaul ? (1 - alpha) * c.MacroPowerW(m) * p.z(b) * load
                               : c.external_backhaul_price * load;
  }
  return v;
}

// A recovered allocation where every user sits on its best-rate BS.
AllocationPoint Recovered(const RelaxedProblem& p) {
  const Scenario& s = p.scenario();
  Matrix x = Matrix::Zero(s.num_users(), s.num_bs());
  for (int u = 0; u < s.num_users(); ++u) {
    int best = 0;
    p.rates().access.row(u).maxCoeff(&best);
    x(u, best) = 1.0;
  }
  return p.Recover(x);
}

class AlphaSubproblemTest : public ::testing::TestWithParam<bool> {
 protected:
  void SetUp() override {
    options_ = {true, GetParam()};
    scenario_ = std::make_unique<Scenario>(GenerateScenario(testing::DeskConfig(12, 4)));
    problem_ = std::make_unique<RelaxedProblem>(*scenario_, Eigen::VectorXd::Constant(2, 0.5),
                                                options_);
    point_ = Recovered(*problem_);
  }
  SchemeOptions options_;
  std::unique_ptr<Scenario> scenario_;
  std::unique_ptr<RelaxedProblem> problem_;
  AllocationPoint point_;
};

TEST_P(AlphaSubproblemTest, ValueMatchesFrozenObjectiveAndDerivative) {
  for (int m = 0; m < 2; ++m) {
    const AlphaSubproblem f(*scenario_, FullBandRates(*scenario_), point_, options_, m);
    for (double a : {0.1, 0.35, 0.5, 0.8}) {
      const double expected = FrozenInpObjective(*scenario_, point_, m, a, options_);
      EXPECT_NEAR(f.Value(a), expected, 1e-9 * std::abs(expected));
      const double h = 1e-6;
      const double fd = (f.Value(a + h) - f.Value(a - h)) / (2 * h);
      EXPECT_NEAR(f.Derivative(a), fd, 1e-5 * std::abs(fd) + 1e-3);
      EXPECT_LE(f.Value(a + 0.01) + f.Value(a - 0.01) - 2 * f.Value(a), 1e-9 * std::abs(f.Value(a)));
    }
  }
}

TEST_P(AlphaSubproblemTest, SolveMatchesDenseGrid) {
  for (int m = 0; m < 2; ++m) {
    const AlphaSubproblem f(*scenario_, FullBandRates(*scenario_), point_, options_, m);
    const AlphaSolution sol = SolveAlpha(*scenario_, point_, options_, m, 0.5);
    ASSERT_FALSE(sol.degenerate);
    double best = -INFINITY, best_a = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double a = k / 1000.0;
      const double v = FrozenInpObjective(*scenario_, point_, m, std::clamp(a, 1e-12, 1 - 1e-12),
                                          options_);
      if (v > best) best = v, best_a = a;
    }
    EXPECT_NEAR(sol.alpha, best_a, 1e-3);
    EXPECT_GE(f.Value(sol.alpha), best - 1e-9 * std::abs(best));
    EXPECT_GE(f.Value(sol.alpha), f.Value(0.5));
  }
}

INSTANTIATE_TEST_SUITE_P(Backhaul, AlphaSubproblemTest, ::testing::Bool());

TEST(SolveAlphaTest, OnlyMacroUsersAndFreeSpectrumTakeWholeBand) {
  ScenarioConfig c = testing::DeskConfig(3, 2);
  c.price = {0.0};
  const Scenario s = GenerateScenario(c);
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  Matrix x = Matrix::Zero(s.num_users(), s.num_bs());
  for (int u = 0; u < s.num_users(); ++u) x(u, s.macro_of(u % 2)) = 1.0;
  const AllocationPoint rec = p.Recover(x);
  for (int m = 0; m < 2; ++m) EXPECT_DOUBLE_EQ(SolveAlpha(s, rec, {}, m, 0.5).alpha, 1.0);
}

TEST(SolveAlphaTest, OnlySbsUsersWithDominantPaymentTakeLowerEnd) {
  ScenarioConfig c = testing::DeskConfig(3, 2);
  c.price = {0.0};
  c.user_payment = 1e14;
  const Scenario s = GenerateScenario(c);
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  Matrix x = Matrix::Zero(s.num_users(), s.num_bs());
  for (int u = 0; u < s.num_users(); ++u) x(u, s.sbs_of(u % 2)[0]) = 1.0;
  const AllocationPoint rec = p.Recover(x);
  for (int m = 0; m < 2; ++m) {
    const AlphaSubproblem f(s, FullBandRates(s), rec, {}, m);
    EXPECT_DOUBLE_EQ(SolveAlpha(s, rec, {}, m, 0.5).alpha, f.lower());
  }
}

TEST(SolveAlphaTest, InfeasibleBackhaulIsDegenerate) {
  const Scenario s = GenerateScenario(testing::DeskConfig(3, 2));
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  Matrix x = Matrix::Zero(s.num_users(), s.num_bs());
  for (int u = 0; u < s.num_users(); ++u) x(u, s.sbs_of(0)[0]) = 1.0;
  AllocationPoint rec = p.Recover(x);
  rec.z(s.sbs_of(0)[0]) *= 0.5;
  const AlphaSolution sol = SolveAlpha(s, rec, {}, 0, 0.37);
  EXPECT_TRUE(sol.degenerate);
  EXPECT_EQ(sol.alpha, 0.37);
}

TEST(RunAlgorithm2Test, ZeroUsersStopAfterOneRound) {
  const Scenario s = GenerateScenario(testing::DeskConfig(1, 0));
  const OuterResult r = RunAlgorithm2(s);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.history[0].objective, 0.0);
  EXPECT_EQ(r.termination, "converged");
}

TEST(RunAlgorithm2Test, RoundsAreMonotoneAndSplitsStayInRange) {
  for (std::uint64_t seed : {2, 5}) {
    const Scenario s = GenerateScenario(testing::DeskConfig(seed, 3));
    OuterConfig config;
    config.alpha0 = 0.2;
    const OuterResult r = RunAlgorithm2(s, config);
    ASSERT_GE(r.history.size(), 2u);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      const double prev = r.history[k - 1].objective;
      EXPECT_GE(r.history[k].objective, prev - 1e-6 * std::abs(prev));
    }
    for (const OuterRow& row : r.history) {
      EXPECT_GE(row.alpha.minCoeff(), 0.0);
      EXPECT_LE(row.alpha.maxCoeff(), 1.0);
    }
    EXPECT_DOUBLE_EQ(r.history.back().objective, r.report.recovered_objective);
    std::stringstream out;
    WriteOuterTraceCsv(r.history, out);
    EXPECT_EQ(out.str().rfind("# schema: outer_trace v1\nround,alpha_1,alpha_2,objective", 0),
              0u);
  }
}

}  // namespace
}  // namespace vrm
