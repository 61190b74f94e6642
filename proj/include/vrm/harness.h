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


#ifndef VRM_HARNESS_H_
#define VRM_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vrm/admm.h"
#include "vrm/alpha_outer.h"
#include "vrm/scenario.h"

namespace vrm {

enum class SweepVariable {
  kNone,        // a single point at the base configuration
  kUsers,       // total users, split evenly over MVNOs
  kSiGainDb,    // residual self-interference gain of every InP
  kRho,         // consensus penalty
  kSbsWeight,   // w of every InP
  kAlphaInit,   // initial spectrum split
};

const char* SweepVariableName(SweepVariable v);
SweepVariable ParseSweepVariable(const std::string& name);

struct NamedScheme {
  std::string name;
  SchemeOptions options;
};

// The four combinations of virtualization and self-backhaul, full scheme first.
std::vector<NamedScheme> AblationSchemes();

struct ExperimentSpec {
  std::string id;
  ScenarioConfig base;
  SweepVariable variable = SweepVariable::kNone;
  std::vector<double> values = {0.0};
  std::vector<NamedScheme> schemes = {{"fd_virt", {}}};
  std::vector<std::uint64_t> seeds = {1};
  OuterConfig solver;
  // When false the split stays at solver.alpha0 and a single consensus solve
  // is run per point.
  bool optimize_split = true;

  // Throws std::invalid_argument on an empty sweep or repeated seeds.
  void Validate() const;
};

// Built-in experiments: users, si, rho, w, alpha_init, ablation, desk.
ExperimentSpec StandardExperiment(const std::string& id);
std::vector<std::string> StandardExperimentIds();

// Configuration of one row: the base with the sweep value and seed applied.
ScenarioConfig PointConfig(const ExperimentSpec& spec, double value, std::uint64_t seed);

struct Metrics {
  double total_mvno_utility = 0.0;  // fairness-adjusted, the optimized objective
  double total_mvno_raw = 0.0;      // income minus costs
  double avg_user_utility = 0.0;
  double total_inp_utility = 0.0;
  double utilization = 0.0;   // sum of allocated time shares / number of BSs
  double sbs_fraction = 0.0;  // users served by an SBS / users
};

Metrics ComputeMetrics(const Scenario& scenario, const SolveReport& report);

struct ExperimentRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string scheme;
  std::string status = "ok";  // or the error that stopped this point
  Metrics metrics;
  Eigen::VectorXd alpha;
  int admm_iterations = 0;
  int rounds = 0;
  std::string termination;
  std::vector<TraceRow> trace;    // consensus trace of the final solve
  std::vector<OuterRow> history;  // outer rounds, empty without split updates
};

// Solves one point with the spec's solver settings.
ExperimentRow RunPoint(const ExperimentSpec& spec, double value, std::uint64_t seed,
                       const NamedScheme& scheme);

// Every (value, seed, scheme) combination; a failing point is recorded and the
// run continues.
std::vector<ExperimentRow> RunExperiment(const ExperimentSpec& spec);

// Pairs (value, seed) where a scheme without virtualization beats the same
// scheme with virtualization, which the subset argument rules out.
std::vector<std::string> CheckSubsetOrdering(const std::vector<ExperimentRow>& rows);

// Rows: experiment,variable,value,seed,scheme,status,metrics...,alpha_1..M,
// admm_iterations,rounds,termination.
void WriteExperimentCsv(const ExperimentSpec& spec, const std::vector<ExperimentRow>& rows,
                        std::ostream& out);

struct OracleComparison {
  std::uint64_t seed = 0;
  double relaxed = 0.0;    // centralized relaxed optimum
  double consensus = 0.0;  // relaxed objective reached by the consensus solve
  double recovered = 0.0;
  double oracle = 0.0;
  double gap = 0.0;        // (oracle - recovered) / |oracle|, 0 when both are 0
};

// At the fixed split solver.alpha0, per seed of the spec's base configuration.
std::vector<OracleComparison> CompareWithOracle(const ExperimentSpec& desk);

void WriteComparisonCsv(const std::vector<OracleComparison>& rows, std::ostream& out);

}  // namespace vrm

#endif  // VRM_HARNESS_H_
