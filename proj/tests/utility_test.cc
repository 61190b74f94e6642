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

#include "vrm/utility.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace vrm {
namespace {

// Objective assembled term by term from the model definition.
double ReferenceObjective(const Scenario& s, const RateTable& r, const Matrix& x,
                          const Matrix& yt, bool self_backhaul) {
  const ScenarioConfig& c = s.config();
  double total = 0.0;
  for (int u = 0; u < s.num_users(); ++u) {
    for (int b = 0; b < s.num_bs(); ++b) {
      if (x(u, b) > 0) total += s.payment(u) * x(u, b) * std::log(yt(u, b) * r.access(u, b) / x(u, b));
    }
  }
  for (int b = 0; b < s.num_bs(); ++b) {
    const int m = s.bs(b).inp;
    const double a = r.alpha(m);
    double shares = 0.0, load = 0.0;
    for (int u = 0; u < s.num_users(); ++u) {
      shares += yt(u, b);
      load += yt(u, b) * r.access(u, b);
    }
    if (s.bs(b).is_macro()) {
      total -= c.Price(m) * a * c.BandwidthHz(m) * c.MacroPowerW(m) * shares;
    } else {
      total -= c.Price(m) * c.SbsWeight(m) * (1 - a) * c.BandwidthHz(m) * c.SbsPowerW(m) * shares;
      if (self_backhaul) {
        const double z = load / r.backhaul(b);
        total -= (1 - a) * c.MacroPowerW(m) * z * load;
      } else {
        total -= c.external_backhaul_price * load;
      }
    }
  }
  return total;
}

struct RandomPoint {
  Matrix x, yt;
};

RandomPoint MakePoint(const Scenario& s, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  RandomPoint p{Matrix(s.num_users(), s.num_bs()), Matrix(s.num_users(), s.num_bs())};
  for (int u = 0; u < s.num_users(); ++u) {
    double sum = 0;
    for (int b = 0; b < s.num_bs(); ++b) sum += (p.x(u, b) = unit(gen));
    p.x.row(u) /= sum;
    for (int b = 0; b < s.num_bs(); ++b) p.yt(u, b) = p.x(u, b) * unit(gen) / s.num_users();
  }
  return p;
}

TEST(FairnessTermTest, PerspectiveOfLog) {
  EXPECT_DOUBLE_EQ(FairnessTerm(0.0, 0.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(FairnessTerm(0.5, 0.25, 8.0), 0.5 * std::log(4.0));
  EXPECT_EQ(FairnessTerm(0.5, 0.0, 8.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(FairnessTerm(1.0, 0.5, 0.0), -std::numeric_limits<double>::infinity());
}

TEST(CostTest, ResourceCostArithmetic) {
  const double macro[] = {0.2, 0.3};
  const double sbs[] = {0.5};
  // 0.5 * 0.25 * 10 * 4 + 0.1 * 0.5 * 0.75 * 10 * 2
  EXPECT_NEAR(ResourceCost(macro, sbs, 0.25, 10.0, 4.0, 2.0, 0.1), 5.0 + 0.75, 1e-14);
}

TEST(CostTest, BackhaulCostIsConvexQuadraticInLoad) {
  const double rates[] = {2.0, 3.0};
  const double a[] = {0.1, 0.2};
  const double b[] = {0.3, 0.1};
  const auto q = [&](std::span<const double> y) {
    return BackhaulCost(y, rates, 4.0, 0.25, 8.0);
  };
  // load(a) = 0.8 -> 0.75 * 8 * 0.64 / 4
  EXPECT_NEAR(q(a), 0.96, 1e-14);
  double mid[2];
  for (double t : {0.1, 0.5, 0.9}) {
    for (int k = 0; k < 2; ++k) mid[k] = t * a[k] + (1 - t) * b[k];
    EXPECT_LE(q(mid), t * q(a) + (1 - t) * q(b) + 1e-14);
  }
  const double zero[] = {0.0, 0.0};
  EXPECT_EQ(BackhaulCost(zero, rates, 0.0, 0.5, 1.0), 0.0);
  EXPECT_EQ(BackhaulCost(a, rates, 0.0, 0.5, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(LeasedBackhaulCost(a, rates, 3.0), 2.4, 1e-14);
}

TEST(VrmObjectiveTest, MatchesReferenceOnRandomPoints) {
  std::mt19937_64 gen(11);
  for (std::uint64_t seed : {1, 2, 3}) {
    const Scenario s = GenerateScenario(testing::DeskConfig(seed, 3));
    for (double a : {0.2, 0.5, 0.8}) {
      const RateTable r = BuildRateTable(s, Eigen::VectorXd::Constant(2, a));
      for (int k = 0; k < 5; ++k) {
        const RandomPoint p = MakePoint(s, gen);
        for (bool fd : {true, false}) {
          const double expected = ReferenceObjective(s, r, p.x, p.yt, fd);
          EXPECT_NEAR(VrmObjective(p.x, p.yt, s, r, {true, fd}), expected,
                      1e-10 * std::abs(expected));
        }
      }
    }
  }
}

TEST(ReportUtilitiesTest, BreakdownIsConsistent) {
  const Scenario s = GenerateScenario(testing::DeskConfig(4, 3));
  const RateTable r = BuildRateTable(s, Eigen::VectorXd::Constant(2, 0.4));
  std::mt19937_64 gen(5);
  const RandomPoint rp = MakePoint(s, gen);
  AllocationPoint p;
  p.x = rp.x;
  p.ytilde = rp.yt;
  for (bool fd : {true, false}) {
    const UtilityBreakdown u = ReportUtilities(p, s, r, {true, fd});
    const double objective = VrmObjective(p.x, p.ytilde, s, r, {true, fd});
    EXPECT_NEAR(u.total_vrm, objective, 1e-10 * std::abs(objective));
    double resource = 0, backhaul = 0, income = 0;
    for (int i = 0; i < s.num_mvnos(); ++i) {
      resource += u.mvno_resource_cost[i];
      backhaul += u.mvno_backhaul_cost[i];
      income += u.mvno_income[i];
      EXPECT_NEAR(u.mvno_raw[i],
                  u.mvno_income[i] - u.mvno_resource_cost[i] - u.mvno_backhaul_cost[i],
                  1e-6 * std::abs(u.mvno_income[i]));
    }
    EXPECT_NEAR(u.total_raw, income - resource - backhaul, 1e-9 * income);
    // Self-backhaul payments stay with the InP; leased ones are passed on.
    const double expected_inp = fd ? resource + backhaul : resource;
    EXPECT_NEAR(u.total_inp, expected_inp, 1e-9 * expected_inp);
    double rate0 = 0;
    for (int b = 0; b < s.num_bs(); ++b) rate0 += p.ytilde(0, b) * r.access(0, b);
    EXPECT_NEAR(u.user_rate[0], rate0, 1e-9 * rate0);
  }
}

TEST(ReportUtilitiesTest, CsvHasTotals) {
  const Scenario s = GenerateScenario(testing::DeskConfig(4, 1));
  const RateTable r = BuildRateTable(s, Eigen::VectorXd::Constant(2, 0.4));
  AllocationPoint p = AllocationPoint::Zero(s.num_users(), s.num_bs());
  std::stringstream out;
  WriteUtilitiesCsv(ReportUtilities(p, s, r), out);
  EXPECT_NE(out.str().find("total,0,mvno_utility,0"), std::string::npos);
  EXPECT_EQ(out.str().rfind("# schema: utilities v1\nentity,index,metric,value\n", 0), 0u);
}

}  // namespace
}  // namespace vrm
