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

#include "vrm/harness.h"

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "vrm/csv.h"
#include "vrm/oracle.h"
#include "vrm/relaxed_problem.h"

namespace vrm {
namespace {

// Keeps free-form messages from breaking the CSV layout.
std::string Sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

const char* SweepVariableName(SweepVariable v) {
  switch (v) {
    case SweepVariable::kNone: return "none";
    case SweepVariable::kUsers: return "users";
    case SweepVariable::kSiGainDb: return "si_gain_db";
    case SweepVariable::kRho: return "rho";
    case SweepVariable::kSbsWeight: return "sbs_weight";
    case SweepVariable::kAlphaInit: return "alpha_init";
  }
  return "none";
}

SweepVariable ParseSweepVariable(const std::string& name) {
  for (SweepVariable v : {SweepVariable::kNone, SweepVariable::kUsers, SweepVariable::kSiGainDb,
                          SweepVariable::kRho, SweepVariable::kSbsWeight,
                          SweepVariable::kAlphaInit}) {
    if (name == SweepVariableName(v)) return v;
  }
  throw std::invalid_argument("unknown sweep variable: " + name);
}

std::vector<NamedScheme> AblationSchemes() {
  return {{"fd_virt", {true, true}},
          {"fd_novirt", {false, true}},
          {"ext_virt", {true, false}},
          {"ext_novirt", {false, false}}};
}

void ExperimentSpec::Validate() const {
  if (values.empty()) throw std::invalid_argument("experiment: empty sweep");
  if (schemes.empty()) throw std::invalid_argument("experiment: no scheme");
  if (seeds.empty()) throw std::invalid_argument("experiment: no seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("experiment: repeated seed");
  }
  base.Validate();
}

ExperimentSpec StandardExperiment(const std::string& id) {
  ExperimentSpec spec;
  spec.id = id;
  if (id == "users") {
    spec.variable = SweepVariable::kUsers;
    spec.values = {10, 20, 30, 40};
    spec.schemes = AblationSchemes();
  } else if (id == "si") {
    spec.variable = SweepVariable::kSiGainDb;
    spec.values = {-100, -90, -80, -70, -60, -50, -40, -30, -20, -10};
  } else if (id == "rho") {
    spec.variable = SweepVariable::kRho;
    spec.values = {5e4, 5e7, 8e7};
    spec.optimize_split = false;
  } else if (id == "w") {
    spec.variable = SweepVariable::kSbsWeight;
    spec.values = {1e-3, 1.0};
  } else if (id == "alpha_init") {
    spec.variable = SweepVariable::kAlphaInit;
    spec.values = {0.1, 0.9};
  } else if (id == "ablation") {
    spec.schemes = AblationSchemes();
  } else if (id == "desk") {
    spec.base.sbs_per_inp = 1;
    spec.base.users_per_mvno = 2;
    spec.optimize_split = false;
    spec.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) spec.seeds.push_back(s);
  } else {
    throw std::invalid_argument("unknown experiment: " + id);
  }
  return spec;
}

std::vector<std::string> StandardExperimentIds() {
  return {"users", "si", "rho", "w", "alpha_init", "ablation", "desk"};
}

ScenarioConfig PointConfig(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  ScenarioConfig c = spec.base;
  c.rng_seed = seed;
  switch (spec.variable) {
    case SweepVariable::kUsers: {
      const int total = static_cast<int>(std::lround(value));
      if (total < 0 || total % c.num_mvnos != 0) {
        throw std::invalid_argument("user count must be a multiple of the MVNO count");
      }
      c.users_per_mvno = total / c.num_mvnos;
      break;
    }
    case SweepVariable::kSiGainDb: c.residual_si_gain_db = {value}; break;
    case SweepVariable::kSbsWeight: c.sbs_weight = {value}; break;
    case SweepVariable::kNone:
    case SweepVariable::kRho:
    case SweepVariable::kAlphaInit: break;
  }
  return c;
}

Metrics ComputeMetrics(const Scenario& s, const SolveReport& report) {
  Metrics m;
  const UtilityBreakdown& u = report.utilities;
  m.total_mvno_utility = u.total_vrm;
  m.total_mvno_raw = u.total_raw;
  m.total_inp_utility = u.total_inp;
  if (!u.user_utility.empty()) {
    double sum = 0.0;
    for (double v : u.user_utility) sum += v;
    m.avg_user_utility = sum / static_cast<double>(u.user_utility.size());
  }
  const AllocationPoint& p = report.recovered;
  if (s.num_bs() > 0 && p.ytilde.size() > 0) m.utilization = p.ytilde.sum() / s.num_bs();
  if (s.num_users() > 0 && p.x.size() > 0) {
    int on_sbs = 0;
    for (int u2 = 0; u2 < s.num_users(); ++u2) {
      for (int b = 0; b < s.num_bs(); ++b) {
        if (p.x(u2, b) > 0.5 && !s.bs(b).is_macro()) ++on_sbs;
      }
    }
    m.sbs_fraction = static_cast<double>(on_sbs) / s.num_users();
  }
  return m;
}

ExperimentRow RunPoint(const ExperimentSpec& spec, double value, std::uint64_t seed,
                       const NamedScheme& scheme) {
  ExperimentRow row;
  row.value = value;
  row.seed = seed;
  row.scheme = scheme.name;
  row.alpha = Eigen::VectorXd::Constant(spec.base.num_inps,
                                        std::numeric_limits<double>::quiet_NaN());
  try {
    const Scenario s = GenerateScenario(PointConfig(spec, value, seed));
    OuterConfig solver = spec.solver;
    if (spec.variable == SweepVariable::kRho) solver.admm.rho = value;
    if (spec.variable == SweepVariable::kAlphaInit) solver.alpha0 = value;
    SolveReport report;
    if (spec.optimize_split) {
      OuterResult outer = RunAlgorithm2(s, solver, scheme.options);
      report = std::move(outer.report);
      row.history = std::move(outer.history);
      row.rounds = static_cast<int>(row.history.size());
      row.termination = outer.termination;
    } else {
      const RelaxedProblem problem(s, Eigen::VectorXd::Constant(s.num_inps(), solver.alpha0),
                                   scheme.options);
      report = RunAdmm(problem, solver.admm);
      row.rounds = 1;
      row.termination = report.termination;
    }
    row.metrics = ComputeMetrics(s, report);
    row.alpha = report.alpha;
    row.admm_iterations = report.iterations;
    row.trace = std::move(report.trace);
  } catch (const std::exception& e) {
    row.status = Sanitize(e.what());
  }
  return row;
}

std::vector<ExperimentRow> RunExperiment(const ExperimentSpec& spec) {
  spec.Validate();
  std::vector<ExperimentRow> rows;
  for (double value : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      for (const NamedScheme& scheme : spec.schemes) {
        rows.push_back(RunPoint(spec, value, seed, scheme));
      }
    }
  }
  return rows;
}

std::vector<std::string> CheckSubsetOrdering(const std::vector<ExperimentRow>& rows) {
  std::vector<std::string> violations;
  for (const ExperimentRow& restricted : rows) {
    const auto pos = restricted.scheme.find("_novirt");
    if (pos == std::string::npos || restricted.status != "ok") continue;
    const std::string full = restricted.scheme.substr(0, pos) + "_virt";
    for (const ExperimentRow& r : rows) {
      if (r.scheme != full || r.value != restricted.value || r.seed != restricted.seed ||
          r.status != "ok") {
        continue;
      }
      if (restricted.metrics.total_mvno_utility > r.metrics.total_mvno_utility) {
        violations.push_back(fmt::format("{} beats {} at value {} seed {}",
                                         restricted.scheme, full, restricted.value,
                                         restricted.seed));
      }
    }
  }
  return violations;
}

void WriteExperimentCsv(const ExperimentSpec& spec, const std::vector<ExperimentRow>& rows,
                        std::ostream& out) {
  std::vector<std::string> columns = {
      "experiment",         "variable",          "value",           "seed",
      "scheme",             "status",            "total_mvno_utility", "total_mvno_raw",
      "avg_user_utility",   "total_inp_utility", "utilization",     "sbs_fraction"};
  const int m = spec.base.num_inps;
  for (int i = 1; i <= m; ++i) columns.push_back("alpha_" + std::to_string(i));
  for (const char* c : {"admm_iterations", "rounds", "termination"}) columns.push_back(c);
  CsvWriter csv(out, "experiment", 1, columns);
  for (const ExperimentRow& r : rows) {
    out << spec.id << ',' << SweepVariableName(spec.variable) << ','
        << FormatNumber(r.value) << ',' << r.seed << ',' << r.scheme << ',' << r.status;
    const Metrics& x = r.metrics;
    for (double v : {x.total_mvno_utility, x.total_mvno_raw, x.avg_user_utility,
                     x.total_inp_utility, x.utilization, x.sbs_fraction}) {
      out << ',' << FormatNumber(v);
    }
    for (int i = 0; i < m; ++i) {
      out << ',' << (i < r.alpha.size() ? FormatNumber(r.alpha(i)) : std::string("nan"));
    }
    out << ',' << r.admm_iterations << ',' << r.rounds << ',' << r.termination << '\n';
  }
}

std::vector<OracleComparison> CompareWithOracle(const ExperimentSpec& desk) {
  desk.Validate();
  std::vector<OracleComparison> rows;
  for (std::uint64_t seed : desk.seeds) {
    const Scenario s = GenerateScenario(PointConfig(desk, desk.values.front(), seed));
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(s.num_inps(), desk.solver.alpha0);
    const SchemeOptions options = desk.schemes.front().options;
    const RelaxedProblem problem(s, alpha, options);
    const SolveReport report = RunAdmm(problem, desk.solver.admm);
    OracleConfig oracle_config;
    oracle_config.fixed_alpha = alpha;
    const OracleResult oracle = BruteForce(s, oracle_config, options);

    OracleComparison row;
    row.seed = seed;
    row.relaxed = problem.Objective(SolveCentralized(problem));
    row.consensus = report.relaxed_objective;
    row.recovered = report.recovered_objective;
    row.oracle = oracle.objective;
    if (row.oracle != 0.0) row.gap = (row.oracle - row.recovered) / std::abs(row.oracle);
    rows.push_back(row);
  }
  return rows;
}

void WriteComparisonCsv(const std::vector<OracleComparison>& rows, std::ostream& out) {
  CsvWriter csv(out, "oracle_comparison", 1,
                {"seed", "relaxed", "consensus", "recovered", "oracle", "gap"});
  for (const OracleComparison& r : rows) {
    csv.Row(r.seed, r.relaxed, r.consensus, r.recovered, r.oracle, r.gap);
  }
}

}  // namespace vrm
