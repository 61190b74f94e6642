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

#ifndef VRM_SCENARIO_H_
#define VRM_SCENARIO_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vrm {

using Matrix = Eigen::MatrixXd;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Parameters of a network instance. Per-InP quantities are vectors; a vector
// with a single entry applies to every InP.
struct ScenarioConfig {
  double area_side_m = 1000.0;
  int num_inps = 2;
  int num_mvnos = 2;
  int sbs_per_inp = 4;
  int users_per_mvno = 20;

  std::vector<double> bandwidth_hz = {10e6};
  std::vector<double> macro_power_dbm = {46.0};
  std::vector<double> sbs_power_dbm = {20.0};
  std::vector<double> residual_si_gain_db = {-90.0};
  std::vector<double> price = {5.0};       // gamma^m, per Hz*W
  std::vector<double> sbs_weight = {1e-3};  // w_m

  double noise_psd = 3.981071705534972e-21;  // W/Hz (-174 dBm/Hz)
  double user_payment = 1e6;                 // delta_u
  double pathloss_exponent = 3.76;
  double shadowing_sigma_db = 8.0;
  double min_distance_m = 1.0;
  // Per-bit price of a leased (non self-backhauled) SBS backhaul.
  double external_backhaul_price = 40.0;
  std::uint64_t rng_seed = 1;

  double BandwidthHz(int inp) const;
  double MacroPowerW(int inp) const;
  double SbsPowerW(int inp) const;
  double ResidualSiGain(int inp) const;  // linear
  double Price(int inp) const;
  double SbsWeight(int inp) const;

  // Throws std::invalid_argument when an invariant is violated.
  void Validate() const;
};

double DbmToWatts(double dbm);
double DbToLinear(double db);

// Reads `key = value` lines; `#` starts a comment; lists are comma separated.
// Unknown keys and malformed values throw std::invalid_argument.
ScenarioConfig ParseConfig(std::istream& in);
ScenarioConfig LoadConfig(const std::string& path);
void WriteConfig(const ScenarioConfig& config, std::ostream& out);

struct BaseStation {
  int inp = 0;
  int local_index = 0;  // 0 is the MBS, 1.. the SBSs
  Point position;
  bool is_macro() const { return local_index == 0; }
};

struct User {
  int mvno = 0;
  Point position;
};

// Large-scale gain: max(d, min_distance)^-exponent * 10^(shadowing_db / 10).
double PathGain(Point tx, Point rx, double pathloss_exponent,
                double shadowing_db, double min_distance_m = 1.0);

// Immutable network instance. Base stations are ordered by InP; within an InP
// the MBS comes first.
class Scenario {
 public:
  // `user_gain` is users x base stations; `backhaul_gain` has one entry per
  // base station (ignored for MBSs); `sbs_cross_gain` is bs x bs and only the
  // entries between SBSs of one InP are used.
  Scenario(ScenarioConfig config, std::vector<BaseStation> base_stations,
           std::vector<User> users, Matrix user_gain,
           Eigen::VectorXd backhaul_gain, Matrix sbs_cross_gain);

  const ScenarioConfig& config() const { return config_; }
  int num_inps() const { return config_.num_inps; }
  int num_mvnos() const { return config_.num_mvnos; }
  int num_users() const { return static_cast<int>(users_.size()); }
  int num_bs() const { return static_cast<int>(base_stations_.size()); }

  const BaseStation& bs(int b) const { return base_stations_[b]; }
  const User& user(int u) const { return users_[u]; }
  int mvno_of(int u) const { return users_[u].mvno; }
  int macro_of(int inp) const { return macro_index_[inp]; }
  std::span<const int> bs_of(int inp) const { return bs_by_inp_[inp]; }
  std::span<const int> sbs_of(int inp) const {
    return std::span<const int>(bs_by_inp_[inp]).subspan(1);
  }

  double user_gain(int u, int b) const { return user_gain_(u, b); }
  double backhaul_gain(int b) const { return backhaul_gain_(b); }
  double sbs_cross_gain(int b, int k) const { return sbs_cross_gain_(b, k); }

  // Power spectral densities: total power spread over the InP band.
  double MacroPsd(int inp) const;
  double SbsPsd(int inp) const;
  double payment(int /*u*/) const { return config_.user_payment; }

  // Rows: kind,from,to,gain.
  void WriteGainsCsv(std::ostream& out) const;

 private:
  ScenarioConfig config_;
  std::vector<BaseStation> base_stations_;
  std::vector<User> users_;
  Matrix user_gain_;
  Eigen::VectorXd backhaul_gain_;
  Matrix sbs_cross_gain_;
  std::vector<int> macro_index_;
  std::vector<std::vector<int>> bs_by_inp_;
};

Scenario GenerateScenario(const ScenarioConfig& config);

}  // namespace vrm

#endif  // VRM_SCENARIO_H_
