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

#ifndef VRM_ALLOCATION_H_
#define VRM_ALLOCATION_H_

#include <Eigen/Dense>

#include "vrm/scenario.h"

namespace vrm {

// Which network model is optimized.
struct SchemeOptions {
  // When false every user may only attach to the BSs of its MVNO's home InP
  // (MVNO i is homed at InP i mod M).
  bool virtualization = true;
  // When false SBS backhaul is leased at a flat per-bit price instead of being
  // carried by the MBS over the shared band.
  bool self_backhaul = true;
};

inline int HomeInp(const Scenario& s, int u) { return s.mvno_of(u) % s.num_inps(); }

// Decision variables on a users x base stations grid.
struct AllocationPoint {
  Matrix x;       // association weight in [0, 1]
  Matrix ytilde;  // x * y, resource share in [0, x]
  bool recovered = false;
  // Only meaningful when `recovered`.
  Matrix y;           // per-user time share at the serving BS
  Eigen::VectorXd z;  // per-BS backhaul time share (0 for MBSs)

  static AllocationPoint Zero(int users, int bss) {
    AllocationPoint p;
    p.x = Matrix::Zero(users, bss);
    p.ytilde = Matrix::Zero(users, bss);
    p.y = Matrix::Zero(users, bss);
    p.z = Eigen::VectorXd::Zero(bss);
    return p;
  }
};

}  // namespace vrm

#endif  // VRM_ALLOCATION_H_
