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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and a
// summary. With --strict the exit status is non-zero when any criterion fails;
// otherwise it is non-zero only if the checks could not be run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "vrm/admm.h"
#include "vrm/alpha_outer.h"
#include "vrm/harness.h"
#include "vrm/oracle.h"
#include "vrm/relaxed_problem.h"
#include "vrm/utility.h"

#ifndef VRM_CLI_PATH
#error "VRM_CLI_PATH must name the CLI binary"
#endif

namespace vrm {
namespace {

// Pinned tolerances.
constexpr double kGradientRelTol = 1e-5;
constexpr double kGradientRuntimeS = 10.0;
constexpr double kConvexityRelTol = 1e-9;
constexpr double kTightnessRelTol = 1e-7;
constexpr double kOracleGap = 0.05;
constexpr double kOracleRuntimeS = 300.0;
// Orderings between iterative solver outputs hold up to the solvers'
// relative objective convergence tolerance.
constexpr double kOrderingRelTol = 1e-6;
constexpr double kAdmmGap = 0.01;
constexpr int kAdmmIterations = 100;
constexpr double kEarlyShrink = 0.5;  // gap(10) <= kEarlyShrink * gap(1)
constexpr double kAlphaAgreement = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Fig.-8-style instance: 2 InPs with 4 SBSs each and 40 users.
Scenario ConsensusScenario() {
  ScenarioConfig c;
  c.num_inps = 2;
  c.sbs_per_inp = 4;
  c.num_mvnos = 2;
  c.users_per_mvno = 20;
  c.rng_seed = 1;
  return GenerateScenario(c);
}

ScenarioConfig Desk(std::uint64_t seed) {
  ScenarioConfig c;
  c.sbs_per_inp = 1;
  c.users_per_mvno = 2;
  c.rng_seed = seed;
  return c;
}

AllocationPoint RandomInterior(const Scenario& s, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  AllocationPoint a = AllocationPoint::Zero(s.num_users(), s.num_bs());
  for (int u = 0; u < s.num_users(); ++u) {
    for (int b = 0; b < s.num_bs(); ++b) a.x(u, b) = unit(gen);
    a.x.row(u) /= a.x.row(u).sum();
    for (int b = 0; b < s.num_bs(); ++b) a.ytilde(u, b) = a.x(u, b) * unit(gen);
  }
  return a;
}

Outcome Criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2026);
  double worst = 0.0;
  int points = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = GenerateScenario(Desk(seed));
    const RelaxedProblem p(s, Eigen::VectorXd::Constant(s.num_inps(), 0.5));
    for (int k = 0; k < 20; ++k, ++points) {
      const AllocationPoint a = RandomInterior(s, gen);
      const PointGradient g = p.Gradient(a.x, a.ytilde);
      Matrix fx(a.x.rows(), a.x.cols()), fy(a.x.rows(), a.x.cols());
      for (int u = 0; u < a.x.rows(); ++u) {
        for (int b = 0; b < a.x.cols(); ++b) {
          const double hx = 1e-5 * a.x(u, b), hy = 1e-5 * a.ytilde(u, b);
          Matrix xp = a.x, xm = a.x, yp = a.ytilde, ym = a.ytilde;
          xp(u, b) += hx;
          xm(u, b) -= hx;
          yp(u, b) += hy;
          ym(u, b) -= hy;
          fx(u, b) = (p.Objective(xp, a.ytilde) - p.Objective(xm, a.ytilde)) / (2 * hx);
          fy(u, b) = (p.Objective(a.x, yp) - p.Objective(a.x, ym)) / (2 * hy);
        }
      }
      // Relative error of the full gradient vector at this point.
      const double num = std::sqrt((g.x - fx).squaredNorm() + (g.ytilde - fy).squaredNorm());
      const double den = std::sqrt(fx.squaredNorm() + fy.squaredNorm());
      worst = std::max(worst, num / den);
    }
  }
  const double t = Seconds(t0);
  return {worst <= kGradientRelTol && t < kGradientRuntimeS,
          fmt::format("{} points, max relative error {:.3g} (tol {:.0e}), {:.2f} s", points,
                      worst, kGradientRelTol, t)};
}

Outcome Criterion2() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_concave = 0.0, worst_q = 0.0;
  int segments = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = GenerateScenario(Desk(seed));
    const RelaxedProblem p(s, Eigen::VectorXd::Constant(s.num_inps(), 0.3 + 0.1 * seed));
    const RateTable& r = p.rates();
    for (int k = 0; k < 200; ++k, ++segments) {
      const AllocationPoint a = RandomInterior(s, gen), b = RandomInterior(s, gen);
      const double t = unit(gen);
      const Matrix xm = t * a.x + (1 - t) * b.x;
      const Matrix ym = t * a.ytilde + (1 - t) * b.ytilde;
      const double fa = p.Objective(a), fb = p.Objective(b), fm = p.Objective(xm, ym);
      const double scale = std::max({std::abs(fa), std::abs(fb), 1.0});
      worst_concave = std::max(worst_concave, (t * fa + (1 - t) * fb - fm) / scale);
      for (int j = 0; j < s.num_bs(); ++j) {
        if (s.bs(j).is_macro()) continue;
        const int m = s.bs(j).inp;
        std::vector<double> ra(s.num_users()), ya(s.num_users()), yb(s.num_users()),
            yc(s.num_users());
        for (int u = 0; u < s.num_users(); ++u) {
          ra[u] = r.access(u, j);
          ya[u] = a.ytilde(u, j);
          yb[u] = b.ytilde(u, j);
          yc[u] = ym(u, j);
        }
        const double pm = s.config().MacroPowerW(m);
        const double qa = BackhaulCost(ya, ra, r.backhaul(j), r.alpha(m), pm);
        const double qb = BackhaulCost(yb, ra, r.backhaul(j), r.alpha(m), pm);
        const double qc = BackhaulCost(yc, ra, r.backhaul(j), r.alpha(m), pm);
        const double qs = std::max({qa, qb, 1e-300});
        worst_q = std::max(worst_q, (qc - t * qa - (1 - t) * qb) / qs);
      }
    }
  }
  return {worst_concave <= kConvexityRelTol && worst_q <= kConvexityRelTol,
          fmt::format("{} segments, worst concavity excess {:.3g}, worst Q' convexity "
                      "excess {:.3g} (tol {:.0e})",
                      segments, worst_concave, worst_q, kConvexityRelTol)};
}

Outcome Criterion3() {
  double worst = 0.0;
  int loaded = 0, stray = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = GenerateScenario(Desk(seed));
    const RelaxedProblem p(s, Eigen::VectorXd::Constant(s.num_inps(), 0.5));
    const SolveReport report = RunAdmm(p);
    const AllocationPoint& q = report.recovered;
    for (int b = 0; b < s.num_bs(); ++b) {
      if (s.bs(b).is_macro()) continue;
      double load = 0.0;
      for (int u = 0; u < s.num_users(); ++u) load += q.x(u, b) * q.y(u, b) * p.rates().access(u, b);
      const double capacity = q.z(b) * p.rates().backhaul(b);
      if (load <= 0.0) {
        if (q.z(b) != 0.0) ++stray;
        continue;
      }
      ++loaded;
      worst = std::max(worst, std::abs(load - capacity) / capacity);
    }
  }
  return {worst <= kTightnessRelTol && stray == 0 && loaded > 0,
          fmt::format("{} loaded SBSs over 20 seeds, max |load - z R_bh| / (z R_bh) = {:.3g} "
                      "(tol {:.0e}), idle SBSs with z > 0: {}",
                      loaded, worst, kTightnessRelTol, stray)};
}

Outcome Criterion4() {
  const auto t0 = Clock::now();
  ExperimentSpec desk = StandardExperiment("desk");
  const std::vector<OracleComparison> rows = CompareWithOracle(desk);
  const double t = Seconds(t0);
  int order_ok = 0;
  double worst_gap = 0.0;
  for (const OracleComparison& r : rows) {
    const double slack = kOrderingRelTol * std::abs(r.oracle);
    if (r.relaxed >= r.oracle - slack && r.oracle >= r.recovered - slack) ++order_ok;
    worst_gap = std::max(worst_gap, r.gap);
  }
  const int n = static_cast<int>(rows.size());
  return {n == 20 && order_ok == n && worst_gap <= kOracleGap && t < kOracleRuntimeS,
          fmt::format("{}/{} instances with relaxed >= oracle >= recovered, worst "
                      "recovered gap {:.4f} (tol {}), {:.1f} s",
                      order_ok, n, worst_gap, kOracleGap, t)};
}

struct ConsensusRuns {
  double central = 0.0;
  SolveReport fast, slow, off;
};

const ConsensusRuns& Consensus() {
  static const ConsensusRuns runs = [] {
    ConsensusRuns r;
    const Scenario s = ConsensusScenario();
    const RelaxedProblem p(s, Eigen::VectorXd::Constant(s.num_inps(), 0.5));
    r.central = p.Objective(SolveCentralized(p));
    AdmmConfig config;
    config.rho = 5e7;
    r.fast = RunAdmm(p, config);
    config.rho = 8e7;
    r.slow = RunAdmm(p, config);
    config.rho = 5e4;
    r.off = RunAdmm(p, config);
    return r;
  }();
  return runs;
}

Outcome Criterion5() {
  const ConsensusRuns& r = Consensus();
  const SolveReport& a = r.fast;
  const double final_gap = (r.central - a.relaxed_objective) / std::abs(r.central);
  const auto gap_at = [&](int iter) {
    return (r.central - a.trace[iter - 1].objective) / std::abs(r.central);
  };
  const bool have10 = a.trace.size() >= 10;
  const double g1 = gap_at(1), g10 = have10 ? gap_at(10) : NAN;
  const bool pass = std::abs(final_gap) <= kAdmmGap && a.termination == "converged" &&
                    a.iterations <= kAdmmIterations && have10 && g10 <= kEarlyShrink * g1;
  return {pass, fmt::format("final relative gap {:.4g} (tol {}), stop rule met after {} "
                            "iterations ({}; cap for the criterion {}), gap(1) = {:.4g}, "
                            "gap(10) = {:.4g}",
                            final_gap, kAdmmGap, a.iterations, a.termination,
                            kAdmmIterations, g1, g10)};
}

Outcome Criterion6() {
  const ConsensusRuns& r = Consensus();
  const bool ordered = r.fast.termination == "converged" &&
                       (r.slow.termination != "converged" ||
                        r.fast.iterations <= r.slow.iterations);
  const bool off = r.off.termination != "converged";
  return {ordered && off,
          fmt::format("rho=5e7: {} iterations ({}), rho=8e7: {} iterations ({}), rho=5e4: "
                      "{} after {} iterations",
                      r.fast.iterations, r.fast.termination, r.slow.iterations,
                      r.slow.termination, r.off.termination, r.off.iterations)};
}

Outcome Criterion7() {
  ExperimentSpec spec = StandardExperiment("si");
  const std::vector<ExperimentRow> rows = RunExperiment(spec);
  bool ok = true;
  std::string trend;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ExperimentRow& row = rows[k];
    ok = ok && row.status == "ok";
    trend += fmt::format("{}dB:{:.6g}/{:.2f} ", row.value, row.metrics.total_mvno_utility,
                         row.metrics.sbs_fraction);
    if (k > 0) {
      const double prev = rows[k - 1].metrics.total_mvno_utility;
      if (row.metrics.total_mvno_utility > prev + kOrderingRelTol * std::abs(prev)) ok = false;
    }
  }
  const bool zero = !rows.empty() && rows.back().value == -10.0 &&
                    rows.back().metrics.sbs_fraction == 0.0;
  return {ok && zero, "utility/SBS fraction: " + trend};
}

double FinalAlpha1(const ScenarioConfig& c, double alpha0) {
  OuterConfig config;
  config.alpha0 = alpha0;
  const OuterResult r = RunAlgorithm2(GenerateScenario(c), config);
  return r.report.alpha(0);
}

Outcome Criterion8() {
  const ScenarioConfig c = ConsensusScenario().config();
  const double low = FinalAlpha1(c, 0.1);
  const double high = FinalAlpha1(c, 0.9);
  ScenarioConfig cheap = c, dear = c;
  cheap.sbs_weight = {1e-3};
  dear.sbs_weight = {1.0};
  const double a_cheap = FinalAlpha1(cheap, 0.5);
  const double a_dear = FinalAlpha1(dear, 0.5);
  const bool agree = std::abs(low - high) <= kAlphaAgreement;
  const bool order = a_cheap > a_dear;
  return {agree && order,
          fmt::format("alpha_1 from 0.1 -> {:.4f}, from 0.9 -> {:.4f} (agree within {}: {}); "
                      "alpha_1 w=1e-3 -> {:.4f}, w=1 -> {:.4f} (strictly greater: {})",
                      low, high, kAlphaAgreement, agree ? "yes" : "no", a_cheap, a_dear,
                      order ? "yes" : "no")};
}

Outcome Criterion9() {
  ExperimentSpec spec = StandardExperiment("ablation");
  spec.seeds = {1, 2, 3};
  const std::vector<ExperimentRow> rows = RunExperiment(spec);
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed : spec.seeds) {
    double full = NAN;
    std::vector<std::pair<std::string, double>> others;
    for (const ExperimentRow& r : rows) {
      if (r.seed != seed) continue;
      ok = ok && r.status == "ok";
      if (r.scheme == "fd_virt") full = r.metrics.total_mvno_utility;
      else others.emplace_back(r.scheme, r.metrics.total_mvno_utility);
    }
    detail += fmt::format("seed {}: fd_virt {:.6g}", seed, full);
    for (const auto& [name, v] : others) {
      detail += fmt::format(", {} {:.6g}", name, v);
      if (!(full >= v - kOrderingRelTol * std::abs(v))) ok = false;
    }
    detail += "; ";
  }
  const std::vector<std::string> subset = CheckSubsetOrdering(rows);
  ok = ok && subset.empty();
  detail += fmt::format("subset violations: {}", subset.size());
  return {ok, detail};
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Criterion10() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "vrm_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::string> commands = {
      "generate --seed 3",
      "solve --seed 3 --fixed-alpha --dump-rates",
      "solve --config {cfg} --seed 4",
      "sweep --experiment desk --seeds 1,2 --ablation",
      "oracle --seed 5 --alpha-steps 16",
      "compare --seeds 1,2",
  };
  // A small config exercising the config-file path.
  fs::create_directories(root);
  const fs::path cfg = root / "small.cfg";
  std::ofstream(cfg) << "num_inps = 2\nsbs_per_inp = 1\nusers_per_mvno = 3\n";
  int compared = 0, differing = 0, failed = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string cmd = commands[i];
    const auto pos = cmd.find("{cfg}");
    if (pos != std::string::npos) cmd.replace(pos, 5, cfg.string());
    for (const char* run : {"a", "b"}) {
      const fs::path out = root / std::to_string(i) / run;
      const std::string line = fmt::format("\"{}\" {} --out \"{}\" > /dev/null 2>&1",
                                           VRM_CLI_PATH, cmd, out.string());
      if (std::system(line.c_str()) != 0) ++failed;
    }
    const fs::path a = root / std::to_string(i) / "a";
    const fs::path b = root / std::to_string(i) / "b";
    if (!fs::exists(a)) continue;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++compared;
      const fs::path other = b / entry.path().filename();
      if (!fs::exists(other) || ReadAll(entry.path()) != ReadAll(other)) ++differing;
    }
  }
  return {failed == 0 && differing == 0 && compared > 0,
          fmt::format("{} commands run twice, {} CSV files compared, {} differ, {} runs failed",
                      commands.size(), compared, differing, failed)};
}

}  // namespace
}  // namespace vrm

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string_view(argv[1]) == "--strict";
  const std::vector<std::pair<std::string, std::function<vrm::Outcome()>>> criteria = {
      {"gradient correctness", vrm::Criterion1},
      {"concavity suite", vrm::Criterion2},
      {"backhaul tightness", vrm::Criterion3},
      {"oracle equivalence", vrm::Criterion4},
      {"consensus vs centralized", vrm::Criterion5},
      {"rho sensitivity", vrm::Criterion6},
      {"self-interference trends", vrm::Criterion7},
      {"outer-loop robustness", vrm::Criterion8},
      {"ablation dominance", vrm::Criterion9},
      {"determinism", vrm::Criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = vrm::Clock::now();
    vrm::Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("{} criterion {}: {} -- {} [{:.1f} s]", o.pass ? "PASS" : "FAIL",
                             i + 1, criteria[i].first, o.detail, vrm::Seconds(t0))
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failures,
                           criteria.size())
            << std::endl;
  return strict && failures > 0 ? 1 : 0;
}
