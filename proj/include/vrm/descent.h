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

#ifndef VRM_DESCENT_H_
#define VRM_DESCENT_H_

#include <vector>

#include <Eigen/Dense>

#include "vrm/local_problem.h"

namespace vrm {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Projects each row of `v` onto the probability simplex restricted to the
// columns where `mask` is true; all other entries become 0. Rows without any
// allowed column become all-zero.
Matrix ProjectRowsToSimplex(const Matrix& v, const BoolMatrix& mask);

// Same projection in the metric sum (x - v)^2 / d with positive weights `d`:
// x = max(v - tau_u d, 0) with tau_u chosen so that each row sums to 1.
Matrix ProjectRowsToSimplex(const Matrix& v, const Matrix& d, const BoolMatrix& mask);

// maximize  sum_{m in inps} max_ytilde U_m(x, ytilde)
//           - <lambda, x - anchor> - rho/2 |x - anchor|^2
// over the user simplices. With rho = 0 and every InP included this is the
// full relaxed problem; with one InP it is that InP's consensus subproblem.
struct AssociationProblem {
  std::vector<const InpLocalData*> inps;
  BoolMatrix candidate;  // users x base stations
  double rho = 0.0;
  const Matrix* anchor = nullptr;  // required when rho > 0 or lambda is set
  const Matrix* lambda = nullptr;
};

struct AscentOptions {
  double tol = 1e-6;  // on the Frank-Wolfe gap, relative to 1 + |value|
  int max_iter = 500;
};

struct AscentResult {
  Matrix x;
  Matrix ytilde;    // users x base stations, 0 outside the included InPs
  Matrix gradient;  // ascent gradient of the whole objective w.r.t. x
  Matrix curvature;  // per-entry curvature bound of the backhaul and penalty terms
  double value = 0.0;    // objective including the consensus terms
  double utility = 0.0;  // sum of the included InP utilities only
  double gap = 0.0;      // certified bound on (optimum - value)
  int iterations = 0;
  bool converged = false;
};

// Objective, gradient and optimal shares at a fixed x.
AscentResult EvaluateAssociation(const AssociationProblem& problem, const Matrix& x);

// Projected steepest ascent with Armijo backtracking on x; the shares are
// maximized exactly for every trial x. Each step is scaled per entry by the
// curvature of the backhaul and penalty terms, which keeps nearly-empty
// small cells with weak backhaul from throttling the whole step.
AscentResult MaximizeAssociation(const AssociationProblem& problem, const Matrix& x0,
                                 const AscentOptions& options = {});

}  // namespace vrm

#endif  // VRM_DESCENT_H_
