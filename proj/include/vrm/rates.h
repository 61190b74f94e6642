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

#ifndef VRM_RATES_H_
#define VRM_RATES_H_

#include <iosfwd>
#include <span>

#include <Eigen/Dense>

#include "vrm/scenario.h"

namespace vrm {

// Shannon rates in bit/s. `psd` values are transmit power spectral densities
// (W/Hz) and `noise_psd` is in W/Hz, so every ratio below is a per-Hz SINR.

double MacroAccessRate(double alpha, double bandwidth_hz, double psd,
                       double gain, double noise_psd);

// `cochannel_gains` are the gains from the other SBSs of the same InP to the
// user; SBSs of other InPs transmit on disjoint spectrum.
double SmallAccessRate(double alpha, double bandwidth_hz, double sbs_psd,
                       double gain, std::span<const double> cochannel_gains,
                       double noise_psd);

// Full-duplex self-backhaul link MBS -> SBS. `si_gain` is the linear residual
// self-interference gain and `cross_gains` the gains from the other SBSs.
double BackhaulRate(double alpha, double bandwidth_hz, double macro_psd,
                    double gain, double si_gain, double sbs_psd,
                    std::span<const double> cross_gains, double noise_psd);

struct RateTable {
  Eigen::VectorXd alpha;     // per InP
  Matrix access;             // users x base stations
  Eigen::VectorXd backhaul;  // per base station, 0 for MBSs
};

RateTable BuildRateTable(const Scenario& scenario, const Eigen::VectorXd& alpha);

// Rates as if each link had the whole InP band (alpha = 1 for macro access,
// alpha = 0 for small-cell access and backhaul). Every entry of
// BuildRateTable(s, a) is this table times a_m or 1 - a_m.
RateTable FullBandRates(const Scenario& scenario);

// Spectrum share that multiplies the full-band rate of base station `b`.
double SpectrumShare(const Scenario& scenario, const Eigen::VectorXd& alpha, int b);

// Rows: kind,user,inp,bs,rate (kind is access or backhaul).
void WriteRatesCsv(const Scenario& scenario, const RateTable& rates,
                   std::ostream& out);

}  // namespace vrm

#endif  // VRM_RATES_H_
