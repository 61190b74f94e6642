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


#ifndef VRM_ORACLE_H_
#define VRM_ORACLE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>

#include <Eigen/Dense>

#include "vrm/allocation.h"
#include "vrm/scenario.h"

namespace vrm {

struct OracleConfig {
  // Spectrum splits tried per InP: k / alpha_steps for k = 0..alpha_steps.
  int alpha_steps = 128;
  // When set, only this split is evaluated.
  std::optional<Eigen::VectorXd> fixed_alpha;
  int max_users = 6;
  std::int64_t max_work = 100000000;  // associations x splits x InPs
};

struct OracleResult {
  AllocationPoint best;  // binary association with optimal y and z
  Eigen::VectorXd alpha;
  double objective = 0.0;
  std::int64_t enumerated = 0;  // associations visited
};

// Exhaustive search over binary associations and the split grid. For each
// association and split the shares are optimized exactly (the problem is
// concave in y once x is fixed) and the backhaul share is set to the smallest
// value that carries the SBS load. Throws std::invalid_argument when the
// instance exceeds the size guard.
OracleResult BruteForce(const Scenario& scenario, const OracleConfig& config = {},
                        const SchemeOptions& options = {});

// Utility of InP `inp` for a fixed binary association and split, maximized
// over the time shares. Also returns the shares through `y` (users x BSs).
double OracleInpValue(const Scenario& scenario, const Matrix& binary_x, int inp,
                      double alpha, const SchemeOptions& options, Matrix* y = nullptr);

// Rows: field,index,value with field in {objective, enumerated, alpha, bs, y, z}.
void WriteOracleCsv(const OracleResult& result, std::ostream& out);

}  // namespace vrm

#endif  // VRM_ORACLE_H_
