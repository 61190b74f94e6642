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

#include <algorithm>
#include <cmath>
#include <limits>

#include "vrm/csv.h"

namespace vrm {
namespace {

Matrix UniformAssociation(const BoolMatrix& candidates) {
  Matrix x = Matrix::Zero(candidates.rows(), candidates.cols());
  for (int u = 0; u < x.rows(); ++u) {
    const auto n = candidates.row(u).count();
    for (int b = 0; b < x.cols(); ++b) {
      if (candidates(u, b)) x(u, b) = 1.0 / static_cast<double>(n);
    }
  }
  return x;
}

}  // namespace

LocalUpdateResult LocalUpdate(const InpLocalData& data, const BoolMatrix& candidates,
                              const Matrix& global_x, const Matrix& lambda, double rho,
                              const Matrix& warm_start, const AscentOptions& options) {
  AssociationProblem p;
  p.inps = {&data};
  p.candidate = candidates;
  p.rho = rho;
  p.anchor = &global_x;
  p.lambda = &lambda;
  AscentResult r = MaximizeAssociation(p, warm_start, options);
  return {std::move(r.x), std::move(r.ytilde), std::move(r.gradient), r.utility,
          r.converged};
}

Matrix GlobalUpdate(std::span<const Matrix> local_x, std::span<const Matrix> lambda,
                    double rho) {
  const double m = static_cast<double>(local_x.size());
  Matrix x = Matrix::Zero(local_x.front().rows(), local_x.front().cols());
  for (const Matrix& xm : local_x) x += xm;
  Matrix dual = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& l : lambda) dual += l;
  return x / m + dual / (m * rho);
}

Matrix DualUpdate(const Matrix& lambda, const Matrix& local_x, const Matrix& global_x,
                  double rho) {
  return lambda + rho * (local_x - global_x);
}

Matrix MarginalBenefit(const Matrix& x, const RelaxedProblem& problem) {
  return problem.AtAssociation(x).gradient;
}

Matrix RecoverAssociation(const AllocationPoint& relaxed, const RelaxedProblem& problem) {
  const Scenario& s = problem.scenario();
  const BoolMatrix& cand = problem.candidates();
  const Matrix d = MarginalBenefit(relaxed.x, problem);
  Matrix out = Matrix::Zero(relaxed.x.rows(), relaxed.x.cols());
  for (int u = 0; u < out.rows(); ++u) {
    const double tie = 1e-3 * s.payment(u);
    int best = -1;
    for (int b = 0; b < out.cols(); ++b) {
      if (!cand(u, b)) continue;
      if (best < 0 || d(u, b) > d(u, best) + tie ||
          (d(u, b) >= d(u, best) - tie && relaxed.x(u, b) > relaxed.x(u, best))) {
        best = b;
      }
    }
    if (best < 0) continue;
    if (d(u, best) < 0.0) {
      for (int b = 0; b < out.cols(); ++b) {
        if (cand(u, b) && relaxed.x(u, b) > relaxed.x(u, best)) best = b;
      }
    }
    out(u, best) = 1.0;
  }
  return out;
}

AllocationPoint RecoverResources(const Matrix& binary_x, const RelaxedProblem& problem) {
  return problem.Recover(binary_x);
}

void CompleteReport(const RelaxedProblem& problem, SolveReport& report) {
  report.alpha = problem.alpha();
  report.relaxed_objective = problem.Objective(report.relaxed);
  report.recovered =
      RecoverResources(RecoverAssociation(report.relaxed, problem), problem);
  report.recovered_objective = problem.Objective(report.recovered);
  report.utilities = ReportUtilities(report.recovered, problem.scenario(), problem.rates(),
                                     problem.options());
}

SolveReport RunAdmm(const RelaxedProblem& problem, const AdmmConfig& config) {
  const Scenario& s = problem.scenario();
  const int nm = s.num_inps();
  const BoolMatrix& cand = problem.candidates();
  SolveReport report;
  if (s.num_users() == 0) {
    report.relaxed = AllocationPoint::Zero(0, s.num_bs());
    report.termination = "empty";
    CompleteReport(problem, report);
    return report;
  }

  AdmmState state;
  state.rho = config.rho;
  state.global_x = UniformAssociation(cand);
  state.local_x.assign(nm, state.global_x);
  state.local_ytilde.assign(nm, Matrix::Zero(s.num_users(), s.num_bs()));
  state.lambda.assign(nm, Matrix::Zero(s.num_users(), s.num_bs()));

  Matrix best_x = state.global_x;
  double best = -std::numeric_limits<double>::infinity();
  report.termination = "iteration cap";
  while (state.iteration < config.max_iter) {
    ++state.iteration;
    for (int m = 0; m < nm; ++m) {
      LocalUpdateResult r = LocalUpdate(problem.local(m), cand, state.global_x,
                                        state.lambda[m], state.rho, state.local_x[m],
                                        config.inner);
      if (!r.converged) ++report.inner_warnings;
      state.local_x[m] = std::move(r.x);
      state.local_ytilde[m] = std::move(r.ytilde);
    }
    const Matrix next = GlobalUpdate(state.local_x, state.lambda, state.rho);
    for (int m = 0; m < nm; ++m) {
      state.lambda[m] = DualUpdate(state.lambda[m], state.local_x[m], next, state.rho);
    }
    const double change = (next - state.global_x).norm();
    state.global_x = next;

    TraceRow row;
    row.iter = state.iteration;
    row.objective =
        problem.AtAssociation(ProjectRowsToSimplex(state.global_x, cand)).utility;
    double primal2 = 0.0;
    for (int m = 0; m < nm; ++m) {
      const Matrix diff = state.local_x[m] - state.global_x;
      primal2 += diff.squaredNorm();
      row.consensus_gap = std::max(row.consensus_gap, diff.cwiseAbs().maxCoeff());
    }
    row.primal_residual = std::sqrt(primal2);
    row.dual_residual = state.rho * change;
    if (row.objective > best) {
      best = row.objective;
      best_x = state.global_x;
    }
    row.best_objective = best;
    report.trace.push_back(row);

    if (change <= config.xi2 && row.consensus_gap <= config.xi2) {
      report.termination = "converged";
      break;
    }
  }
  report.iterations = state.iteration;

  const Matrix final_x = ProjectRowsToSimplex(
      report.termination == "converged" ? state.global_x : best_x, cand);
  report.relaxed = AllocationPoint::Zero(s.num_users(), s.num_bs());
  report.relaxed.x = final_x;
  report.relaxed.ytilde = problem.AtAssociation(final_x).ytilde;
  CompleteReport(problem, report);
  return report;
}

AllocationPoint SolveCentralized(const RelaxedProblem& problem,
                                 const AscentOptions& options) {
  const Scenario& s = problem.scenario();
  AllocationPoint p = AllocationPoint::Zero(s.num_users(), s.num_bs());
  if (s.num_users() == 0) return p;
  const AscentResult r = MaximizeAssociation(
      problem.Centralized(), UniformAssociation(problem.candidates()), options);
  p.x = r.x;
  p.ytilde = r.ytilde;
  return p;
}

void WriteTraceCsv(const std::vector<TraceRow>& trace, std::ostream& out) {
  CsvWriter csv(out, "admm_trace", 1,
                {"iter", "objective", "primal_residual", "dual_residual", "consensus_gap",
                 "best_objective"});
  for (const TraceRow& r : trace) {
    csv.Row(r.iter, r.objective, r.primal_residual, r.dual_residual, r.consensus_gap,
            r.best_objective);
  }
}

}  // namespace vrm
