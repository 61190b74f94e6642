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

// Command-line front end: scenario generation, single solves, sweeps and
// oracle comparisons. Every command writes CSV files into --out.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vrm/admm.h"
#include "vrm/alpha_outer.h"
#include "vrm/csv.h"
#include "vrm/harness.h"
#include "vrm/oracle.h"
#include "vrm/rates.h"
#include "vrm/relaxed_problem.h"
#include "vrm/scenario.h"
#include "vrm/utility.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  double rho = vrm::AdmmConfig{}.rho;
  double xi1 = vrm::OuterConfig{}.xi1;
  double xi2 = vrm::AdmmConfig{}.xi2;
  int max_iter = vrm::AdmmConfig{}.max_iter;
  int max_rounds = vrm::OuterConfig{}.max_rounds;
  double alpha0 = vrm::OuterConfig{}.alpha0;
  bool fixed_alpha = false;
  bool no_virtualization = false;
  bool external_backhaul = false;
  bool dump_rates = false;
};

void AddCommonFlags(CLI::App* app, CommonFlags& f, bool solver) {
  app->add_option("--config", f.config_path, "Scenario config file (key = value)");
  app->add_option("--out", f.out_dir, "Output directory");
  app->add_option("--seed", f.seed, "Overrides rng_seed of the config");
  if (!solver) return;
  app->add_option("--rho", f.rho, "Consensus penalty")->check(CLI::PositiveNumber);
  app->add_option("--xi1", f.xi1, "Outer stop threshold on the squared objective change")
      ->check(CLI::PositiveNumber);
  app->add_option("--xi2", f.xi2, "Consensus stop threshold")->check(CLI::NonNegativeNumber);
  app->add_option("--max-iter", f.max_iter, "Consensus iteration cap");
  app->add_option("--max-rounds", f.max_rounds, "Outer round cap");
  app->add_option("--alpha0", f.alpha0, "Initial spectrum split")->check(CLI::Range(0.0, 1.0));
  app->add_flag("--fixed-alpha", f.fixed_alpha, "Keep the split at --alpha0");
  app->add_flag("--no-virtualization", f.no_virtualization,
                "Restrict users to their MVNO's home InP");
  app->add_flag("--external-backhaul", f.external_backhaul,
                "Lease SBS backhaul instead of full-duplex self-backhaul");
  app->add_flag("--dump-rates", f.dump_rates, "Also write rates.csv");
}

vrm::ScenarioConfig Config(const CommonFlags& f, vrm::ScenarioConfig base = {}) {
  vrm::ScenarioConfig c = f.config_path.empty() ? base : vrm::LoadConfig(f.config_path);
  if (f.seed) c.rng_seed = *f.seed;
  c.Validate();
  return c;
}

vrm::OuterConfig Solver(const CommonFlags& f) {
  vrm::OuterConfig o;
  o.alpha0 = f.alpha0;
  o.xi1 = f.xi1;
  o.max_rounds = f.max_rounds;
  o.admm.rho = f.rho;
  o.admm.xi2 = f.xi2;
  o.admm.max_iter = f.max_iter;
  return o;
}

vrm::SchemeOptions Scheme(const CommonFlags& f) {
  return {!f.no_virtualization, !f.external_backhaul};
}

std::ofstream Open(const CommonFlags& f, const std::string& name) {
  std::filesystem::create_directories(f.out_dir);
  const std::filesystem::path path = std::filesystem::path(f.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> Split(const std::string& list) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

void Generate(const CommonFlags& f) {
  const vrm::Scenario s = vrm::GenerateScenario(Config(f));
  auto cfg = Open(f, "config.txt");
  vrm::WriteConfig(s.config(), cfg);
  auto gains = Open(f, "gains.csv");
  s.WriteGainsCsv(gains);
  auto rates = Open(f, "rates.csv");
  vrm::WriteRatesCsv(s, vrm::BuildRateTable(s, Eigen::VectorXd::Constant(s.num_inps(), f.alpha0)),
                     rates);
}

void Solve(const CommonFlags& f) {
  const vrm::Scenario s = vrm::GenerateScenario(Config(f));
  const vrm::OuterConfig solver = Solver(f);
  const vrm::SchemeOptions options = Scheme(f);
  vrm::SolveReport report;
  if (f.fixed_alpha) {
    const vrm::RelaxedProblem problem(
        s, Eigen::VectorXd::Constant(s.num_inps(), solver.alpha0), options);
    report = vrm::RunAdmm(problem, solver.admm);
    std::cerr << fmt::format("consensus: {} after {} iterations\n", report.termination,
                             report.iterations);
  } else {
    vrm::OuterResult outer = vrm::RunAlgorithm2(s, solver, options);
    auto trace = Open(f, "outer_trace.csv");
    vrm::WriteOuterTraceCsv(outer.history, trace);
    std::cerr << fmt::format("outer loop: {} after {} rounds\n", outer.termination,
                             outer.history.size());
    report = std::move(outer.report);
  }
  auto alloc = Open(f, "allocation.csv");
  vrm::WriteAllocationCsv(s, report.recovered, alloc);
  auto util = Open(f, "utilities.csv");
  vrm::WriteUtilitiesCsv(report.utilities, util);
  auto trace = Open(f, "admm_trace.csv");
  vrm::WriteTraceCsv(report.trace, trace);
  if (f.dump_rates) {
    auto rates = Open(f, "rates.csv");
    vrm::WriteRatesCsv(s, vrm::BuildRateTable(s, report.alpha), rates);
  }
  std::cout << fmt::format("objective {}\n", vrm::FormatNumber(report.recovered_objective));
}

void Sweep(const CommonFlags& f, const std::string& id, const std::string& values,
           const std::string& seeds, bool ablation) {
  vrm::ExperimentSpec spec = vrm::StandardExperiment(id);
  if (!f.config_path.empty()) spec.base = vrm::LoadConfig(f.config_path);
  if (!values.empty()) {
    spec.values.clear();
    for (const std::string& v : Split(values)) spec.values.push_back(std::stod(v));
  }
  if (!seeds.empty()) {
    spec.seeds.clear();
    for (const std::string& v : Split(seeds)) spec.seeds.push_back(std::stoull(v));
  } else if (f.seed) {
    spec.seeds = {*f.seed};
  }
  if (ablation) spec.schemes = vrm::AblationSchemes();
  const vrm::OuterConfig solver = Solver(f);
  spec.solver.xi1 = solver.xi1;
  spec.solver.max_rounds = solver.max_rounds;
  spec.solver.admm = solver.admm;
  if (spec.variable != vrm::SweepVariable::kAlphaInit) spec.solver.alpha0 = f.alpha0;
  if (f.fixed_alpha) spec.optimize_split = false;
  if (f.no_virtualization || f.external_backhaul) spec.schemes = {{"custom", Scheme(f)}};

  const std::vector<vrm::ExperimentRow> rows = vrm::RunExperiment(spec);
  auto out = Open(f, "experiment_" + id + ".csv");
  vrm::WriteExperimentCsv(spec, rows, out);
  for (const vrm::ExperimentRow& r : rows) {
    const std::string tag = fmt::format("{}_{}_{}_{}", id, vrm::FormatNumber(r.value), r.seed,
                                        r.scheme);
    auto trace = Open(f, "trace_" + tag + ".csv");
    vrm::WriteTraceCsv(r.trace, trace);
    if (!r.history.empty()) {
      auto history = Open(f, "outer_" + tag + ".csv");
      vrm::WriteOuterTraceCsv(r.history, history);
    }
  }
  for (const std::string& v : vrm::CheckSubsetOrdering(rows)) {
    std::cerr << "warning: " << v << '\n';
  }
}

void Oracle(const CommonFlags& f, int alpha_steps, std::optional<double> fixed) {
  const vrm::Scenario s =
      vrm::GenerateScenario(Config(f, vrm::StandardExperiment("desk").base));
  vrm::OracleConfig config;
  config.alpha_steps = alpha_steps;
  if (fixed) config.fixed_alpha = Eigen::VectorXd::Constant(s.num_inps(), *fixed);
  const vrm::OracleResult result = vrm::BruteForce(s, config, Scheme(f));
  auto out = Open(f, "oracle.csv");
  vrm::WriteOracleCsv(result, out);
}

void Compare(const CommonFlags& f, const std::string& seeds) {
  vrm::ExperimentSpec spec = vrm::StandardExperiment("desk");
  if (!f.config_path.empty()) spec.base = vrm::LoadConfig(f.config_path);
  if (!seeds.empty()) {
    spec.seeds.clear();
    for (const std::string& v : Split(seeds)) spec.seeds.push_back(std::stoull(v));
  } else if (f.seed) {
    spec.seeds = {*f.seed};
  }
  const vrm::OuterConfig solver = Solver(f);
  spec.solver.alpha0 = solver.alpha0;
  spec.solver.admm = solver.admm;
  spec.schemes = {{"custom", Scheme(f)}};
  auto out = Open(f, "oracle_comparison.csv");
  vrm::WriteComparisonCsv(vrm::CompareWithOracle(spec), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual resource allocation for small-cell networks"};
  app.require_subcommand(1);

  CommonFlags gen_flags, solve_flags, sweep_flags, oracle_flags, compare_flags;
  CLI::App* gen = app.add_subcommand("generate", "Write a scenario, its gains and rates");
  AddCommonFlags(gen, gen_flags, false);
  gen->add_option("--alpha0", gen_flags.alpha0, "Split used for rates.csv")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* solve = app.add_subcommand("solve", "Solve one scenario");
  AddCommonFlags(solve, solve_flags, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  AddCommonFlags(sweep, sweep_flags, true);
  std::string experiment = "users", values, sweep_seeds;
  bool ablation = false;
  sweep->add_option("--experiment", experiment, "Experiment id")
      ->check(CLI::IsMember(vrm::StandardExperimentIds()));
  sweep->add_option("--values", values, "Comma-separated sweep values");
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds");
  sweep->add_flag("--ablation", ablation, "Run all four scheme combinations");

  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force a desk-sized scenario");
  AddCommonFlags(oracle, oracle_flags, true);
  int alpha_steps = vrm::OracleConfig{}.alpha_steps;
  std::optional<double> oracle_alpha;
  oracle->add_option("--alpha-steps", alpha_steps, "Split grid resolution")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--at-alpha", oracle_alpha, "Evaluate only this split")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* compare = app.add_subcommand("compare", "Solver versus oracle on desk scenarios");
  AddCommonFlags(compare, compare_flags, true);
  std::string compare_seeds;
  compare->add_option("--seeds", compare_seeds, "Comma-separated seeds");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) Generate(gen_flags);
    if (*solve) Solve(solve_flags);
    if (*sweep) Sweep(sweep_flags, experiment, values, sweep_seeds, ablation);
    if (*oracle) Oracle(oracle_flags, alpha_steps, oracle_alpha);
    if (*compare) Compare(compare_flags, compare_seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
