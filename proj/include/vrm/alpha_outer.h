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

#ifndef VRM_ALPHA_OUTER_H_
#define VRM_ALPHA_OUTER_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrm/admm.h"
#include "vrm/allocation.h"
#include "vrm/rates.h"
#include "vrm/scenario.h"

namespace vrm {

// One InP's share of the objective as a function of its spectrum split, with
// the recovered association, time shares y and backhaul shares z held fixed.
class AlphaSubproblem {
 public:
  AlphaSubproblem(const Scenario& scenario, const RateTable& full_band,
                  const AllocationPoint& recovered, const SchemeOptions& options, int inp);

  double Value(double alpha) const;
  double Derivative(double alpha) const;

  // Interval on which the fixed allocation keeps every SBS throughput within
  // its backhaul capacity; empty (lo > hi) when no split works.
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  bool has_users() const { return macro_payment_ + sbs_payment_ > 0.0; }

 private:
  double macro_payment_ = 0.0;  // sum of delta over macro users
  double sbs_payment_ = 0.0;    // sum of delta over SBS users
  double log_terms_ = 0.0;      // sum delta * ln(y * full-band rate)
  double macro_price_ = 0.0;    // gamma B P_m sum ytilde (macro)
  double sbs_price_ = 0.0;      // gamma w B P_s sum ytilde (SBS)
  double backhaul_quad_ = 0.0;  // P_m sum_j z_j * full-band load_j
  double leased_ = 0.0;         // price * sum of full-band SBS loads
  double lower_ = 0.0;
  double upper_ = 1.0;
};

struct AlphaSolution {
  double alpha = 0.0;
  bool degenerate = false;  // no feasible split; previous value kept
};

// Maximizes the subproblem by bisection on its derivative (tolerance 1e-8).
AlphaSolution SolveAlpha(const Scenario& scenario, const AllocationPoint& recovered,
                         const SchemeOptions& options, int inp, double previous_alpha);

struct OuterConfig {
  double alpha0 = 0.5;  // initial split of every InP
  double xi1 = 1e6;     // stop when the squared objective change is below
  int max_rounds = 50;
  AdmmConfig admm;
};

struct OuterRow {
  int round = 0;
  Eigen::VectorXd alpha;  // split the round's allocation was computed at
  double objective = 0.0; // recovered fairness-adjusted MVNO utility
  bool degenerate = false;
  int admm_iterations = 0;
};

struct OuterResult {
  SolveReport report;  // final allocation
  std::vector<OuterRow> history;
  std::string termination;  // "converged" or "round cap"
};

// Alternates consensus solves at a fixed split with per-InP split updates.
OuterResult RunAlgorithm2(const Scenario& scenario, const OuterConfig& config = {},
                          const SchemeOptions& options = {});

// Rows: round,alpha_1..alpha_M,objective,degenerate,admm_iterations.
void WriteOuterTraceCsv(const std::vector<OuterRow>& history, std::ostream& out);

}  // namespace vrm

#endif  // VRM_ALPHA_OUTER_H_
