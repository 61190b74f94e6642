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

#ifndef VRM_ADMM_H_
#define VRM_ADMM_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrm/allocation.h"
#include "vrm/descent.h"
#include "vrm/local_problem.h"
#include "vrm/relaxed_problem.h"
#include "vrm/utility.h"

namespace vrm {

struct AdmmConfig {
  double rho = 5e7;
  double xi2 = 1e-2;  // on |X^{t+1} - X^t|_F and on the consensus gap
  int max_iter = 200;
  AscentOptions inner;  // tolerance and cap of each local solve
};

struct TraceRow {
  int iter = 0;
  double objective = 0.0;       // relaxed objective at the global association
  double primal_residual = 0.0; // sqrt(sum_m |X_m - X|^2)
  double dual_residual = 0.0;   // rho |X^{t+1} - X^t|
  double consensus_gap = 0.0;   // max_m |X_m - X|_inf
  double best_objective = 0.0;  // running maximum of `objective`
};

struct SolveReport {
  Eigen::VectorXd alpha;
  AllocationPoint relaxed;
  AllocationPoint recovered;
  UtilityBreakdown utilities;
  double relaxed_objective = 0.0;
  double recovered_objective = 0.0;
  std::vector<TraceRow> trace;
  int iterations = 0;
  std::string termination;  // "converged", "iteration cap" or "empty"
  int inner_warnings = 0;   // local solves that hit their cap
};

// Coordinator-side state of the consensus iteration.
struct AdmmState {
  int iteration = 0;
  std::vector<Matrix> local_x;       // X_m^z, one users x BSs copy per InP
  std::vector<Matrix> local_ytilde;  // shares of each InP on its own BSs
  Matrix global_x;
  std::vector<Matrix> lambda;
  double rho = 0.0;
};

struct LocalUpdateResult {
  Matrix x;
  Matrix ytilde;
  Matrix gradient;  // ascent gradient of the local augmented objective
  double utility = 0.0;
  bool converged = false;
};

// One InP's subproblem. It receives only its own data, the broadcast global
// association, its multipliers and rho; `candidates` only says which BSs each
// user may attach to.
LocalUpdateResult LocalUpdate(const InpLocalData& data, const BoolMatrix& candidates,
                              const Matrix& global_x, const Matrix& lambda, double rho,
                              const Matrix& warm_start, const AscentOptions& options = {});

Matrix GlobalUpdate(std::span<const Matrix> local_x, std::span<const Matrix> lambda,
                    double rho);

Matrix DualUpdate(const Matrix& lambda, const Matrix& local_x, const Matrix& global_x,
                  double rho);

// Marginal benefit used to round a relaxed association: the ascent gradient of
// the relaxed objective w.r.t. x with the shares re-optimized at x.
Matrix MarginalBenefit(const Matrix& x, const RelaxedProblem& problem);

// One association per user: the candidate with the largest marginal benefit
// (ties within 1e-3 * delta_u go to the larger relaxed x, then the lower
// index). When every benefit of a user is negative, its largest relaxed x wins.
Matrix RecoverAssociation(const AllocationPoint& relaxed, const RelaxedProblem& problem);

AllocationPoint RecoverResources(const Matrix& binary_x, const RelaxedProblem& problem);

SolveReport RunAdmm(const RelaxedProblem& problem, const AdmmConfig& config = {});

// Reference solve of the full relaxed problem without decomposition.
AllocationPoint SolveCentralized(const RelaxedProblem& problem,
                                 const AscentOptions& options = {1e-9, 20000});

// Rounds a relaxed point and fills in the recovered fields of a report.
void CompleteReport(const RelaxedProblem& problem, SolveReport& report);

// Rows: iter,objective,primal_residual,dual_residual,consensus_gap,best_objective.
void WriteTraceCsv(const std::vector<TraceRow>& trace, std::ostream& out);

}  // namespace vrm

#endif  // VRM_ADMM_H_
