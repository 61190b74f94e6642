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
#include <string>

#include "vrm/csv.h"
#include "vrm/relaxed_problem.h"
#include "vrm/utility.h"

namespace vrm {
namespace {

constexpr double kAlphaTol = 1e-8;
// Relative slack when testing the fixed allocation against backhaul capacity.
constexpr double kCapacitySlack = 1e-9;

}  // namespace

AlphaSubproblem::AlphaSubproblem(const Scenario& s, const RateTable& full,
                                 const AllocationPoint& p, const SchemeOptions& options,
                                 int inp) {
  const ScenarioConfig& c = s.config();
  const double band = c.BandwidthHz(inp);
  for (int b : s.bs_of(inp)) {
    const bool macro = s.bs(b).is_macro();
    double full_load = 0.0;
    for (int u = 0; u < s.num_users(); ++u) {
      if (p.x(u, b) < 0.5) continue;
      const double delta = s.payment(u);
      const double rate = full.access(u, b);
      log_terms_ += delta * std::log(p.y(u, b) * rate);
      full_load += p.ytilde(u, b) * rate;
      if (macro) {
        macro_payment_ += delta;
        macro_price_ += c.Price(inp) * band * c.MacroPowerW(inp) * p.ytilde(u, b);
      } else {
        sbs_payment_ += delta;
        sbs_price_ += c.Price(inp) * c.SbsWeight(inp) * band * c.SbsPowerW(inp) *
                      p.ytilde(u, b);
      }
    }
    if (macro || full_load <= 0.0) continue;
    if (!options.self_backhaul) {
      leased_ += c.external_backhaul_price * full_load;
      continue;
    }
    // Both sides of the throughput constraint scale with (1 - alpha), so the
    // allocation is either feasible for every split or for none.
    const double capacity = p.z(b) * full.backhaul(b);
    if (full_load > capacity * (1.0 + kCapacitySlack)) {
      lower_ = 1.0;
      upper_ = 0.0;
    }
    backhaul_quad_ += c.MacroPowerW(inp) * p.z(b) * full_load;
  }
}

double AlphaSubproblem::Value(double alpha) const {
  double v = log_terms_ - alpha * macro_price_ - (1.0 - alpha) * sbs_price_ -
             (1.0 - alpha) * (1.0 - alpha) * backhaul_quad_ - (1.0 - alpha) * leased_;
  if (macro_payment_ > 0.0) v += macro_payment_ * std::log(alpha);
  if (sbs_payment_ > 0.0) v += sbs_payment_ * std::log(1.0 - alpha);
  return v;
}

double AlphaSubproblem::Derivative(double alpha) const {
  double d = -macro_price_ + sbs_price_ + 2.0 * (1.0 - alpha) * backhaul_quad_ + leased_;
  if (macro_payment_ > 0.0) d += macro_payment_ / alpha;
  if (sbs_payment_ > 0.0) d -= sbs_payment_ / (1.0 - alpha);
  return d;
}

AlphaSolution SolveAlpha(const Scenario& scenario, const AllocationPoint& recovered,
                         const SchemeOptions& options, int inp, double previous_alpha) {
  const AlphaSubproblem f(scenario, FullBandRates(scenario), recovered, options, inp);
  if (f.lower() > f.upper()) return {previous_alpha, true};
  if (!f.has_users()) return {previous_alpha, false};
  double lo = f.lower();
  double hi = f.upper();
  if (f.Derivative(hi) >= 0.0) return {hi, false};
  if (f.Derivative(lo) <= 0.0) return {lo, false};
  while (hi - lo > kAlphaTol) {
    const double mid = 0.5 * (lo + hi);
    (f.Derivative(mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

OuterResult RunAlgorithm2(const Scenario& s, const OuterConfig& config,
                          const SchemeOptions& options) {
  OuterResult out;
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(s.num_inps(), config.alpha0);
  SolveReport report = RunAdmm(RelaxedProblem(s, alpha, options), config.admm);
  out.history.push_back({1, alpha, report.recovered_objective, false, report.iterations});
  out.termination = "round cap";
  if (s.num_users() == 0) out.termination = "converged";

  for (int round = 2; round <= config.max_rounds && out.termination != "converged";
       ++round) {
    Eigen::VectorXd next = alpha;
    bool degenerate = false;
    for (int m = 0; m < s.num_inps(); ++m) {
      const AlphaSolution a = SolveAlpha(s, report.recovered, options, m, alpha(m));
      next(m) = a.alpha;
      degenerate = degenerate || a.degenerate;
    }
    const RelaxedProblem problem(s, next, options);
    SolveReport fresh = RunAdmm(problem, config.admm);
    // The previous association with shares re-optimized at the new split can
    // only be better than the previous round, which keeps the rounds monotone.
    SolveReport kept = fresh;
    kept.recovered = problem.Recover(report.recovered.x);
    kept.recovered_objective = problem.Objective(kept.recovered);
    kept.utilities =
        ReportUtilities(kept.recovered, s, problem.rates(), problem.options());

    const double previous = report.recovered_objective;
    report = kept.recovered_objective > fresh.recovered_objective ? std::move(kept)
                                                                  : std::move(fresh);
    alpha = next;
    out.history.push_back(
        {round, alpha, report.recovered_objective, degenerate, report.iterations});
    const double change = report.recovered_objective - previous;
    if (change * change <= config.xi1) out.termination = "converged";
  }
  out.report = std::move(report);
  return out;
}

void WriteOuterTraceCsv(const std::vector<OuterRow>& history, std::ostream& out) {
  std::vector<std::string> columns = {"round"};
  const int m = history.empty() ? 0 : static_cast<int>(history.front().alpha.size());
  for (int i = 1; i <= m; ++i) columns.push_back("alpha_" + std::to_string(i));
  for (const char* c : {"objective", "degenerate", "admm_iterations"}) columns.push_back(c);
  CsvWriter csv(out, "outer_trace", 1, columns);
  for (const OuterRow& r : history) {
    out << r.round;
    for (int i = 0; i < m; ++i) out << ',' << FormatNumber(r.alpha(i));
    out << ',' << FormatNumber(r.objective) << ',' << (r.degenerate ? 1 : 0) << ','
        << r.admm_iterations << '\n';
  }
}

}  // namespace vrm
