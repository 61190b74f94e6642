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

#include "vrm/admm.h"

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace vrm {
namespace {

TEST(ConsensusStepsTest, GlobalAndDualUpdates) {
  const std::vector<Matrix> x = {Matrix::Constant(2, 3, 0.2), Matrix::Constant(2, 3, 0.6)};
  std::vector<Matrix> lambda = {Matrix::Constant(2, 3, 4.0), Matrix::Constant(2, 3, -2.0)};
  lambda[0](1, 2) = 10.0;
  const double rho = 2.0;
  const Matrix g = GlobalUpdate(x, lambda, rho);
  EXPECT_NEAR(g(0, 0), 0.4 + (4.0 - 2.0) / (2 * rho), 1e-15);
  EXPECT_NEAR(g(1, 2), 0.4 + (10.0 - 2.0) / (2 * rho), 1e-15);
  const Matrix l = DualUpdate(lambda[1], x[1], g, rho);
  EXPECT_NEAR(l(0, 0), -2.0 + rho * (0.6 - g(0, 0)), 1e-15);
}

class AdmmDeskTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(AdmmDeskTest, ConvergesToCentralizedAndRecoversFeasiblePoint) {
  const Scenario s = GenerateScenario(testing::DeskConfig(GetParam(), 3));
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  AdmmConfig config;
  config.xi2 = 1e-4;
  config.max_iter = 2000;
  const SolveReport r = RunAdmm(p, config);
  const double central = p.Objective(SolveCentralized(p));
  EXPECT_EQ(r.termination, "converged");
  EXPECT_NEAR(r.relaxed_objective, central, 2e-3 * std::abs(central));
  EXPECT_LE(r.relaxed_objective, central + 1e-6 * std::abs(central));
  EXPECT_TRUE(p.CheckFeasible(r.relaxed, 1e-7).empty());
  EXPECT_TRUE(p.CheckFeasible(r.recovered, 1e-7).empty());
  EXPECT_LE(r.recovered_objective, central + 1e-6 * std::abs(central));
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_GE(r.trace[k].best_objective, r.trace[k - 1].best_objective);
  }
  for (int u = 0; u < s.num_users(); ++u) EXPECT_DOUBLE_EQ(r.recovered.x.row(u).sum(), 1.0);
  EXPECT_NEAR(r.utilities.total_vrm, r.recovered_objective,
              1e-9 * std::abs(r.recovered_objective));
}

INSTANTIATE_TEST_SUITE_P(Seeds, AdmmDeskTest, ::testing::Values(1, 2, 3));

TEST(AdmmTest, LocalUpdateOnlyAllocatesOwnBss) {
  const Scenario s = GenerateScenario(testing::DeskConfig(5, 2));
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  const Matrix x0 = p.InitialPoint().x;
  const Matrix lambda = Matrix::Zero(x0.rows(), x0.cols());
  const LocalUpdateResult r = LocalUpdate(p.local(0), p.candidates(), x0, lambda, 5e7, x0);
  EXPECT_TRUE(r.converged);
  for (int b : s.bs_of(1)) EXPECT_EQ(r.ytilde.col(b).cwiseAbs().sum(), 0.0);
  for (int u = 0; u < s.num_users(); ++u) EXPECT_NEAR(r.x.row(u).sum(), 1.0, 1e-12);
}

TEST(AdmmTest, RecoveryPicksLargestMarginalBenefit) {
  const Scenario s = GenerateScenario(testing::DeskConfig(7, 2));
  const RelaxedProblem p(s, Eigen::VectorXd::Constant(2, 0.5));
  const SolveReport r = RunAdmm(p);
  const Matrix d = MarginalBenefit(r.relaxed.x, p);
  const Matrix x = RecoverAssociation(r.relaxed, p);
  for (int u = 0; u < s.num_users(); ++u) {
    int chosen = -1;
    for (int b = 0; b < s.num_bs(); ++b) {
      if (x(u, b) == 1.0) chosen = b;
    }
    ASSERT_GE(chosen, 0);
    if (d.row(u).maxCoeff() >= 0.0) {
      EXPECT_GE(d(u, chosen), d.row(u).maxCoeff() - 1e-3 * s.payment(u));
    }
  }
}

TEST(AdmmTest, EmptyInstance) {
  ScenarioConfig c = testing::DeskConfig(1, 0);
  const Scenario s = GenerateScenario(c);
  const SolveReport r = RunAdmm(RelaxedProblem(s, Eigen::VectorXd::Constant(2, 0.5)));
  EXPECT_EQ(r.termination, "empty");
  EXPECT_EQ(r.relaxed_objective, 0.0);
  EXPECT_EQ(r.recovered_objective, 0.0);
}

TEST(AdmmTest, SingleBsHasNoRoundingGap) {
  ScenarioConfig c;
  c.num_inps = 1;
  c.num_mvnos = 2;
  c.sbs_per_inp = 0;
  c.users_per_mvno = 3;
  const Scenario s = GenerateScenario(c);
  const SolveReport r = RunAdmm(RelaxedProblem(s, Eigen::VectorXd::Constant(1, 0.5)));
  EXPECT_NEAR(r.relaxed_objective, r.recovered_objective,
              1e-9 * std::abs(r.recovered_objective));
}

TEST(AdmmTest, TraceCsvHeader) {
  std::stringstream out;
  WriteTraceCsv({{1, 2.0, 0.5, 0.25, 0.125, 2.0}}, out);
  EXPECT_EQ(out.str(),
            "# schema: admm_trace v1\n"
            "iter,objective,primal_residual,dual_residual,consensus_gap,best_objective\n"
            "1,2,0.5,0.25,0.125,2\n");
}

}  // namespace
}  // namespace vrm
