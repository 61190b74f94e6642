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

#ifndef VRM_RANDOM_H_
#define VRM_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace vrm {

// SplitMix64 step; used to derive independent seeds for named substreams.
std::uint64_t SplitMix64(std::uint64_t& state);

// Seeded generator whose draws are bit-identical across standard libraries.
// std::uniform_real_distribution and std::normal_distribution are
// implementation-defined, so the conversions are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent child stream. The same (seed, name) pair always yields the
  // same stream regardless of how many draws the parent has made.
  Rng Split(std::string_view name) const;

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal(double mean, double stddev);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vrm

#endif  // VRM_RANDOM_H_
