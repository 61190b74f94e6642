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

#include "vrm/rates.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vrm/csv.h"

namespace vrm {
namespace {

double Log2OnePlus(double sinr) { return std::log1p(sinr) / std::numbers::ln2; }

double Sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

// Gains from the other SBSs of `b`'s InP, as seen by user `u` (or by SBS `b`
// itself when `u` < 0).
std::vector<double> OtherSbsGains(const Scenario& s, int u, int b) {
  std::vector<double> gains;
  for (int k : s.sbs_of(s.bs(b).inp)) {
    if (k == b) continue;
    gains.push_back(u >= 0 ? s.user_gain(u, k) : s.sbs_cross_gain(b, k));
  }
  return gains;
}

}  // namespace

double MacroAccessRate(double alpha, double bandwidth_hz, double psd, double gain,
                       double noise_psd) {
  if (alpha <= 0.0) return 0.0;
  return alpha * bandwidth_hz * Log2OnePlus(psd * gain / noise_psd);
}

double SmallAccessRate(double alpha, double bandwidth_hz, double sbs_psd, double gain,
                       std::span<const double> cochannel_gains, double noise_psd) {
  if (alpha >= 1.0) return 0.0;
  const double interference = sbs_psd * Sum(cochannel_gains);
  return (1.0 - alpha) * bandwidth_hz *
         Log2OnePlus(sbs_psd * gain / (interference + noise_psd));
}

double BackhaulRate(double alpha, double bandwidth_hz, double macro_psd, double gain,
                    double si_gain, double sbs_psd, std::span<const double> cross_gains,
                    double noise_psd) {
  if (alpha >= 1.0) return 0.0;
  const double interference = si_gain * sbs_psd + sbs_psd * Sum(cross_gains) + noise_psd;
  return (1.0 - alpha) * bandwidth_hz * Log2OnePlus(macro_psd * gain / interference);
}

RateTable BuildRateTable(const Scenario& s, const Eigen::VectorXd& alpha) {
  if (alpha.size() != s.num_inps()) {
    throw std::invalid_argument("alpha needs one entry per InP");
  }
  for (int m = 0; m < s.num_inps(); ++m) {
    if (!(alpha(m) >= 0.0 && alpha(m) <= 1.0)) {
      throw std::invalid_argument("alpha entries must lie in [0, 1]");
    }
  }
  const ScenarioConfig& c = s.config();
  RateTable t;
  t.alpha = alpha;
  t.access = Matrix::Zero(s.num_users(), s.num_bs());
  t.backhaul = Eigen::VectorXd::Zero(s.num_bs());
  for (int b = 0; b < s.num_bs(); ++b) {
    const int m = s.bs(b).inp;
    const double band = c.BandwidthHz(m);
    if (s.bs(b).is_macro()) {
      for (int u = 0; u < s.num_users(); ++u) {
        t.access(u, b) =
            MacroAccessRate(alpha(m), band, s.MacroPsd(m), s.user_gain(u, b), c.noise_psd);
      }
      continue;
    }
    for (int u = 0; u < s.num_users(); ++u) {
      const std::vector<double> others = OtherSbsGains(s, u, b);
      t.access(u, b) = SmallAccessRate(alpha(m), band, s.SbsPsd(m), s.user_gain(u, b),
                                       others, c.noise_psd);
    }
    const std::vector<double> cross = OtherSbsGains(s, -1, b);
    t.backhaul(b) = BackhaulRate(alpha(m), band, s.MacroPsd(m), s.backhaul_gain(b),
                                 c.ResidualSiGain(m), s.SbsPsd(m), cross, c.noise_psd);
  }
  return t;
}

RateTable FullBandRates(const Scenario& s) {
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(s.num_inps(), 0.5);
  RateTable t = BuildRateTable(s, half);
  t.access *= 2.0;
  t.backhaul *= 2.0;
  t.alpha = Eigen::VectorXd::Constant(s.num_inps(), std::nan(""));
  return t;
}

double SpectrumShare(const Scenario& s, const Eigen::VectorXd& alpha, int b) {
  const double a = alpha(s.bs(b).inp);
  return s.bs(b).is_macro() ? a : 1.0 - a;
}

void WriteRatesCsv(const Scenario& s, const RateTable& t, std::ostream& out) {
  CsvWriter csv(out, "rates", 1, {"kind", "user", "inp", "bs", "rate"});
  for (int u = 0; u < s.num_users(); ++u) {
    for (int b = 0; b < s.num_bs(); ++b) csv.Row("access", u, s.bs(b).inp, b, t.access(u, b));
  }
  for (int b = 0; b < s.num_bs(); ++b) {
    if (!s.bs(b).is_macro()) csv.Row("backhaul", -1, s.bs(b).inp, b, t.backhaul(b));
  }
}

}  // namespace vrm
