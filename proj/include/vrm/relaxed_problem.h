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

#ifndef VRM_RELAXED_PROBLEM_H_
#define VRM_RELAXED_PROBLEM_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrm/allocation.h"
#include "vrm/descent.h"
#include "vrm/local_problem.h"
#include "vrm/rates.h"
#include "vrm/scenario.h"

namespace vrm {

struct Violation {
  std::string constraint;  // C1..C7, or "candidate" for a forbidden pair
  int index = 0;           // user, base station or InP, depending on the constraint
  double magnitude = 0.0;
};

struct PointGradient {
  Matrix x;
  Matrix ytilde;
};

struct ProjectionResult {
  AllocationPoint point;
  int iterations = 0;
  bool converged = false;
};

// The time-sharing relaxation at a fixed spectrum split.
class RelaxedProblem {
 public:
  RelaxedProblem(const Scenario& scenario, Eigen::VectorXd alpha,
                 SchemeOptions options = {});

  const Scenario& scenario() const { return *scenario_; }
  const Eigen::VectorXd& alpha() const { return rates_.alpha; }
  const RateTable& rates() const { return rates_; }
  const SchemeOptions& options() const { return options_; }
  const InpLocalData& local(int inp) const { return locals_[inp]; }
  // Pairs (u, b) a user may be associated with.
  const BoolMatrix& candidates() const { return candidates_; }

  double Objective(const AllocationPoint& point) const;
  double Objective(const Matrix& x, const Matrix& ytilde) const;

  // Requires x > 0 and ytilde > 0 on every candidate pair.
  //   d/dx     = delta (ln(ytilde R / x) - 1)
  //   d/dytilde = delta x / ytilde - c - 2 kappa R load
  // where c is the linear price of the pair and kappa the quadratic backhaul
  // price of its base station.
  PointGradient Gradient(const Matrix& x, const Matrix& ytilde) const;

  // Euclidean projection onto the feasible set by Dykstra's algorithm.
  ProjectionResult Project(const AllocationPoint& point, double tol = 1e-9,
                           int max_iter = 100000) const;

  std::vector<Violation> CheckFeasible(const AllocationPoint& point,
                                       double tol = 1e-7) const;

  // Uniform association over candidates with small interior shares.
  AllocationPoint InitialPoint() const;

  // Problem over all InPs with no consensus terms.
  AssociationProblem Centralized() const;

  // Best shares for a fixed association, with the value-function gradient.
  AscentResult AtAssociation(const Matrix& x) const;

  // Binary association plus optimal shares, y and z (recover_resources).
  AllocationPoint Recover(const Matrix& binary_x) const;

 private:
  const Scenario* scenario_;
  SchemeOptions options_;
  RateTable rates_;
  std::vector<InpLocalData> locals_;
  BoolMatrix candidates_;
};

// Rows: user,inp,bs,x,ytilde,y (y empty for relaxed points).
void WriteAllocationCsv(const Scenario& scenario, const AllocationPoint& point,
                        std::ostream& out);

}  // namespace vrm

#endif  // VRM_RELAXED_PROBLEM_H_
