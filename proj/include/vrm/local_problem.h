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

#ifndef VRM_LOCAL_PROBLEM_H_
#define VRM_LOCAL_PROBLEM_H_

#include <vector>

#include <Eigen/Dense>

#include "vrm/allocation.h"
#include "vrm/rates.h"
#include "vrm/scenario.h"

namespace vrm {

// Everything one InP knows about its own part of the relaxed problem. A local
// solver only ever sees this struct, never another InP's channel gains.
struct InpLocalData {
  int inp = 0;
  std::vector<int> columns;        // global BS indices, MBS first
  Matrix rate;                     // users x columns; 0 marks a non-candidate
  Matrix cost;                     // linear price of one unit of ytilde
  Eigen::VectorXd kappa;           // quadratic backhaul price per column
  Eigen::VectorXd backhaul_rate;   // per column, 0 for the MBS
  bool backhaul_budget = false;    // enforce sum_j load_j / R_bh_j <= 1
  Eigen::VectorXd payment;         // delta_u

  int num_users() const { return static_cast<int>(rate.rows()); }
  int num_columns() const { return static_cast<int>(columns.size()); }
};

InpLocalData BuildInpLocalData(const Scenario& scenario, const RateTable& rates,
                               const SchemeOptions& options, int inp);

// Maximizer over ytilde of the InP's utility at a fixed association x.
struct ShareSolution {
  Matrix ytilde;          // users x columns
  Matrix ratio;           // ytilde / x, also defined (as a limit) where x = 0
  Matrix marginal;        // d value / d x, 0 for non-candidates
  Eigen::VectorXd load;   // sum_u ytilde * R per column
  double capacity_price = 0.0;  // multiplier of the per-InP backhaul budget
  double value = 0.0;
};

// `x` is users x columns with x >= 0. The returned ytilde is feasible for the
// cone 0 <= ytilde <= x, the per-BS budget sum_u ytilde <= 1 and, if enabled,
// the per-InP backhaul budget.
ShareSolution SolveShares(const InpLocalData& data, const Matrix& x);

// Utility of the InP at (x, ytilde) without any optimization.
double LocalUtility(const InpLocalData& data, const Matrix& x, const Matrix& ytilde);

}  // namespace vrm

#endif  // VRM_LOCAL_PROBLEM_H_
