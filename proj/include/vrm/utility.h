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

#ifndef VRM_UTILITY_H_
#define VRM_UTILITY_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "vrm/allocation.h"
#include "vrm/rates.h"
#include "vrm/scenario.h"

namespace vrm {

// x * ln(ytilde * rate / x), continuously extended by 0 at x = 0. Returns
// -infinity for an associated user that receives nothing.
double FairnessTerm(double x, double ytilde, double rate);

// Bandwidth-power product (Hz*W) one MVNO consumes at one InP.
double ResourceCost(std::span<const double> macro_shares,
                    std::span<const double> sbs_shares, double alpha,
                    double bandwidth_hz, double macro_power_w, double sbs_power_w,
                    double sbs_weight);

// Self-backhaul cost of one SBS with the backhaul time share eliminated:
// (1 - alpha) * P_m * (sum ytilde * R)^2 / R_bh. Infinite when the SBS carries
// traffic but has no backhaul rate.
double BackhaulCost(std::span<const double> shares, std::span<const double> access_rates,
                    double backhaul_rate, double alpha, double macro_power_w);

// Leased backhaul of one SBS billed per bit.
double LeasedBackhaulCost(std::span<const double> shares,
                          std::span<const double> access_rates, double price_per_bit);

// Total fairness-adjusted MVNO utility of a relaxed or recovered point.
double VrmObjective(const Matrix& x, const Matrix& ytilde, const Scenario& scenario,
                    const RateTable& rates, const SchemeOptions& options = {});

struct UtilityBreakdown {
  std::vector<double> user_rate;     // C_u, bit/s
  std::vector<double> user_utility;  // C_u - delta_u

  std::vector<double> mvno_income;           // sum delta_u * C_u
  std::vector<double> mvno_fairness_income;  // sum delta_u * U(C_u)
  std::vector<double> mvno_resource_cost;    // sum_m gamma_m * T
  std::vector<double> mvno_backhaul_cost;    // sum_m Q
  std::vector<double> mvno_raw;              // income - costs
  std::vector<double> mvno_net;              // fairness income - costs

  std::vector<double> inp_utility;

  double total_vrm = 0.0;  // sum of mvno_net
  double total_raw = 0.0;  // sum of mvno_raw
  double total_inp = 0.0;
};

UtilityBreakdown ReportUtilities(const AllocationPoint& point, const Scenario& scenario,
                                 const RateTable& rates,
                                 const SchemeOptions& options = {});

// Rows: entity,index,metric,value with entity in {user, mvno, inp, total}.
void WriteUtilitiesCsv(const UtilityBreakdown& breakdown, std::ostream& out);

}  // namespace vrm

#endif  // VRM_UTILITY_H_
