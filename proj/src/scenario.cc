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

#include "vrm/scenario.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vrm/csv.h"
#include "vrm/random.h"

namespace vrm {
namespace {

double PerInp(const std::vector<double>& values, int inp) {
  return values.size() == 1 ? values.front() : values.at(inp);
}

void Require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ParseDouble(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == text.size() && !text.empty(),
          "config: bad number for '" + key + "': '" + text + "'");
  return value;
}

std::vector<double> ParseList(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(ParseDouble(key, Trim(item)));
  Require(!values.empty(), "config: empty list for '" + key + "'");
  return values;
}

int ParseInt(const std::string& key, const std::string& text) {
  const double v = ParseDouble(key, text);
  Require(v == std::floor(v) && std::abs(v) < 1e9,
          "config: '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::string JoinList(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? ", " : "") + FormatNumber(values[i]);
  }
  return out;
}

}  // namespace

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double ScenarioConfig::BandwidthHz(int inp) const { return PerInp(bandwidth_hz, inp); }
double ScenarioConfig::MacroPowerW(int inp) const {
  return DbmToWatts(PerInp(macro_power_dbm, inp));
}
double ScenarioConfig::SbsPowerW(int inp) const {
  return DbmToWatts(PerInp(sbs_power_dbm, inp));
}
double ScenarioConfig::ResidualSiGain(int inp) const {
  return DbToLinear(PerInp(residual_si_gain_db, inp));
}
double ScenarioConfig::Price(int inp) const { return PerInp(price, inp); }
double ScenarioConfig::SbsWeight(int inp) const { return PerInp(sbs_weight, inp); }

void ScenarioConfig::Validate() const {
  Require(std::isfinite(area_side_m) && area_side_m > 0, "area_side_m must be positive");
  Require(num_inps >= 1, "num_inps must be >= 1");
  Require(num_mvnos >= 1, "num_mvnos must be >= 1");
  Require(sbs_per_inp >= 0, "sbs_per_inp must be >= 0");
  Require(users_per_mvno >= 0, "users_per_mvno must be >= 0");
  const auto check_sizes = [&](const std::vector<double>& v, const char* name) {
    Require(v.size() == 1 || v.size() == static_cast<std::size_t>(num_inps),
            std::string(name) + " needs 1 or num_inps entries");
  };
  check_sizes(bandwidth_hz, "bandwidth_hz");
  check_sizes(macro_power_dbm, "macro_power_dbm");
  check_sizes(sbs_power_dbm, "sbs_power_dbm");
  check_sizes(residual_si_gain_db, "residual_si_gain_db");
  check_sizes(price, "price");
  check_sizes(sbs_weight, "sbs_weight");
  for (int m = 0; m < num_inps; ++m) {
    Require(std::isfinite(BandwidthHz(m)) && BandwidthHz(m) > 0,
            "bandwidth_hz must be positive");
    Require(std::isfinite(PerInp(macro_power_dbm, m)), "macro_power_dbm must be finite");
    Require(std::isfinite(PerInp(sbs_power_dbm, m)), "sbs_power_dbm must be finite");
    Require(std::isfinite(PerInp(residual_si_gain_db, m)),
            "residual_si_gain_db must be finite");
    Require(std::isfinite(Price(m)) && Price(m) >= 0, "price must be >= 0");
    Require(SbsWeight(m) > 0 && SbsWeight(m) <= 1, "sbs_weight must lie in (0, 1]");
  }
  Require(std::isfinite(noise_psd) && noise_psd > 0, "noise_psd must be positive");
  Require(std::isfinite(user_payment) && user_payment > 0, "user_payment must be positive");
  Require(std::isfinite(pathloss_exponent) && pathloss_exponent > 0,
          "pathloss_exponent must be positive");
  Require(std::isfinite(shadowing_sigma_db) && shadowing_sigma_db >= 0,
          "shadowing_sigma_db must be >= 0");
  Require(min_distance_m > 0, "min_distance_m must be positive");
  Require(std::isfinite(external_backhaul_price) && external_backhaul_price >= 0,
          "external_backhaul_price must be >= 0");
}

ScenarioConfig ParseConfig(std::istream& in) {
  ScenarioConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"area_side_m", [&](auto& k, auto& v) { c.area_side_m = ParseDouble(k, v); }},
      {"num_inps", [&](auto& k, auto& v) { c.num_inps = ParseInt(k, v); }},
      {"num_mvnos", [&](auto& k, auto& v) { c.num_mvnos = ParseInt(k, v); }},
      {"sbs_per_inp", [&](auto& k, auto& v) { c.sbs_per_inp = ParseInt(k, v); }},
      {"users_per_mvno", [&](auto& k, auto& v) { c.users_per_mvno = ParseInt(k, v); }},
      {"bandwidth_hz", [&](auto& k, auto& v) { c.bandwidth_hz = ParseList(k, v); }},
      {"macro_power_dbm", [&](auto& k, auto& v) { c.macro_power_dbm = ParseList(k, v); }},
      {"sbs_power_dbm", [&](auto& k, auto& v) { c.sbs_power_dbm = ParseList(k, v); }},
      {"residual_si_gain_db",
       [&](auto& k, auto& v) { c.residual_si_gain_db = ParseList(k, v); }},
      {"price", [&](auto& k, auto& v) { c.price = ParseList(k, v); }},
      {"sbs_weight", [&](auto& k, auto& v) { c.sbs_weight = ParseList(k, v); }},
      {"noise_psd", [&](auto& k, auto& v) { c.noise_psd = ParseDouble(k, v); }},
      {"user_payment", [&](auto& k, auto& v) { c.user_payment = ParseDouble(k, v); }},
      {"pathloss_exponent",
       [&](auto& k, auto& v) { c.pathloss_exponent = ParseDouble(k, v); }},
      {"shadowing_sigma_db",
       [&](auto& k, auto& v) { c.shadowing_sigma_db = ParseDouble(k, v); }},
      {"min_distance_m", [&](auto& k, auto& v) { c.min_distance_m = ParseDouble(k, v); }},
      {"external_backhaul_price",
       [&](auto& k, auto& v) { c.external_backhaul_price = ParseDouble(k, v); }},
      {"rng_seed",
       [&](auto& k, auto& v) {
         const double s = ParseDouble(k, v);
         Require(s >= 0 && s == std::floor(s), "rng_seed must be a non-negative integer");
         c.rng_seed = static_cast<std::uint64_t>(s);
       }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    Require(eq != std::string::npos,
            "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    Require(it != setters.end(), "config: unknown key '" + key + "'");
    it->second(key, value);
  }
  c.Validate();
  return c;
}

ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return ParseConfig(in);
}

void WriteConfig(const ScenarioConfig& c, std::ostream& out) {
  out << "area_side_m = " << FormatNumber(c.area_side_m) << '\n'
      << "num_inps = " << c.num_inps << '\n'
      << "num_mvnos = " << c.num_mvnos << '\n'
      << "sbs_per_inp = " << c.sbs_per_inp << '\n'
      << "users_per_mvno = " << c.users_per_mvno << '\n'
      << "bandwidth_hz = " << JoinList(c.bandwidth_hz) << '\n'
      << "macro_power_dbm = " << JoinList(c.macro_power_dbm) << '\n'
      << "sbs_power_dbm = " << JoinList(c.sbs_power_dbm) << '\n'
      << "residual_si_gain_db = " << JoinList(c.residual_si_gain_db) << '\n'
      << "price = " << JoinList(c.price) << '\n'
      << "sbs_weight = " << JoinList(c.sbs_weight) << '\n'
      << "noise_psd = " << FormatNumber(c.noise_psd) << '\n'
      << "user_payment = " << FormatNumber(c.user_payment) << '\n'
      << "pathloss_exponent = " << FormatNumber(c.pathloss_exponent) << '\n'
      << "shadowing_sigma_db = " << FormatNumber(c.shadowing_sigma_db) << '\n'
      << "min_distance_m = " << FormatNumber(c.min_distance_m) << '\n'
      << "external_backhaul_price = " << FormatNumber(c.external_backhaul_price) << '\n'
      << "rng_seed = " << c.rng_seed << '\n';
}

double PathGain(Point tx, Point rx, double pathloss_exponent, double shadowing_db,
                double min_distance_m) {
  const double d = std::max(std::hypot(tx.x - rx.x, tx.y - rx.y), min_distance_m);
  return std::pow(d, -pathloss_exponent) * std::pow(10.0, shadowing_db / 10.0);
}

Scenario::Scenario(ScenarioConfig config, std::vector<BaseStation> base_stations,
                   std::vector<User> users, Matrix user_gain,
                   Eigen::VectorXd backhaul_gain, Matrix sbs_cross_gain)
    : config_(std::move(config)),
      base_stations_(std::move(base_stations)),
      users_(std::move(users)),
      user_gain_(std::move(user_gain)),
      backhaul_gain_(std::move(backhaul_gain)),
      sbs_cross_gain_(std::move(sbs_cross_gain)) {
  config_.Validate();
  const int nb = num_bs();
  const int nu = num_users();
  Require(user_gain_.rows() == nu && user_gain_.cols() == nb, "user_gain shape mismatch");
  Require(backhaul_gain_.size() == nb, "backhaul_gain shape mismatch");
  Require(sbs_cross_gain_.rows() == nb && sbs_cross_gain_.cols() == nb,
          "sbs_cross_gain shape mismatch");

  macro_index_.assign(config_.num_inps, -1);
  bs_by_inp_.assign(config_.num_inps, {});
  for (int b = 0; b < nb; ++b) {
    const BaseStation& s = base_stations_[b];
    Require(s.inp >= 0 && s.inp < config_.num_inps, "base station InP out of range");
    auto& list = bs_by_inp_[s.inp];
    Require(static_cast<int>(list.size()) == s.local_index,
            "base stations must be ordered MBS first, then SBSs");
    if (s.is_macro()) macro_index_[s.inp] = b;
    list.push_back(b);
  }
  for (int m = 0; m < config_.num_inps; ++m) {
    Require(macro_index_[m] >= 0, "every InP needs an MBS");
  }
  for (const User& u : users_) {
    Require(u.mvno >= 0 && u.mvno < config_.num_mvnos, "user MVNO out of range");
  }
  const auto positive = [](double g) { return std::isfinite(g) && g > 0; };
  for (int u = 0; u < nu; ++u) {
    for (int b = 0; b < nb; ++b) Require(positive(user_gain_(u, b)), "user gains must be > 0");
  }
  for (int b = 0; b < nb; ++b) {
    if (base_stations_[b].is_macro()) continue;
    Require(positive(backhaul_gain_(b)), "backhaul gains must be > 0");
    for (int k : sbs_of(base_stations_[b].inp)) {
      if (k != b) Require(positive(sbs_cross_gain_(b, k)), "SBS cross gains must be > 0");
    }
  }
}

double Scenario::MacroPsd(int inp) const {
  return config_.MacroPowerW(inp) / config_.BandwidthHz(inp);
}

double Scenario::SbsPsd(int inp) const {
  return config_.SbsPowerW(inp) / config_.BandwidthHz(inp);
}

void Scenario::WriteGainsCsv(std::ostream& out) const {
  CsvWriter csv(out, "scenario_gains", 1, {"kind", "from", "to", "gain"});
  for (int u = 0; u < num_users(); ++u) {
    for (int b = 0; b < num_bs(); ++b) csv.Row("user_bs", u, b, user_gain_(u, b));
  }
  for (int b = 0; b < num_bs(); ++b) {
    const BaseStation& s = base_stations_[b];
    if (s.is_macro()) continue;
    csv.Row("mbs_sbs", macro_of(s.inp), b, backhaul_gain_(b));
  }
  for (int b = 0; b < num_bs(); ++b) {
    if (base_stations_[b].is_macro()) continue;
    for (int k : sbs_of(base_stations_[b].inp)) {
      if (k != b) csv.Row("sbs_sbs", b, k, sbs_cross_gain_(b, k));
    }
  }
}

Scenario GenerateScenario(const ScenarioConfig& config) {
  config.Validate();
  const Rng root(config.rng_seed);
  Rng geometry = root.Split("geometry");
  Rng shadowing = root.Split("shadowing");
  const double side = config.area_side_m;
  const int m_count = config.num_inps;

  std::vector<BaseStation> bss;
  for (int m = 0; m < m_count; ++m) {
    // MBS m sits at the center of the m-th vertical strip of the area.
    bss.push_back({m, 0, {(m + 0.5) * side / m_count, 0.5 * side}});
    for (int j = 1; j <= config.sbs_per_inp; ++j) {
      const double x = geometry.Uniform(0.0, side);
      const double y = geometry.Uniform(0.0, side);
      bss.push_back({m, j, {x, y}});
    }
  }
  std::vector<User> users;
  for (int i = 0; i < config.num_mvnos; ++i) {
    for (int k = 0; k < config.users_per_mvno; ++k) {
      const double x = geometry.Uniform(0.0, side);
      const double y = geometry.Uniform(0.0, side);
      users.push_back({i, {x, y}});
    }
  }

  const int nb = static_cast<int>(bss.size());
  const int nu = static_cast<int>(users.size());
  const double e = config.pathloss_exponent;
  const double sigma = config.shadowing_sigma_db;
  const double dmin = config.min_distance_m;
  const auto shadow = [&] { return sigma > 0 ? shadowing.Normal(0.0, sigma) : 0.0; };

  Matrix user_gain(nu, nb);
  for (int u = 0; u < nu; ++u) {
    for (int b = 0; b < nb; ++b) {
      user_gain(u, b) = PathGain(bss[b].position, users[u].position, e, shadow(), dmin);
    }
  }
  Eigen::VectorXd backhaul_gain = Eigen::VectorXd::Zero(nb);
  Matrix cross = Matrix::Zero(nb, nb);
  for (int b = 0; b < nb; ++b) {
    if (bss[b].is_macro()) continue;
    const int mbs = b - bss[b].local_index;
    backhaul_gain(b) = PathGain(bss[mbs].position, bss[b].position, e, shadow(), dmin);
  }
  for (int b = 0; b < nb; ++b) {
    if (bss[b].is_macro()) continue;
    for (int k = b + 1; k < nb && bss[k].inp == bss[b].inp; ++k) {
      const double g = PathGain(bss[k].position, bss[b].position, e, shadow(), dmin);
      cross(b, k) = g;
      cross(k, b) = g;
    }
  }
  return Scenario(config, std::move(bss), std::move(users), std::move(user_gain),
                  std::move(backhaul_gain), std::move(cross));
}

}  // namespace vrm
