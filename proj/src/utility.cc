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

#include "vrm/utility.h"

#include <cmath>
#include <limits>

#include "vrm/csv.h"

namespace vrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Load(std::span<const double> shares, std::span<const double> rates) {
  double load = 0.0;
  for (std::size_t k = 0; k < shares.size(); ++k) load += shares[k] * rates[k];
  return load;
}

// Shares and rates of the users in `users` at base station `b`.
struct Column {
  std::vector<double> shares;
  std::vector<double> rates;
};

Column Gather(const Matrix& ytilde, const RateTable& rates, int b,
              const std::vector<int>& users) {
  Column c;
  for (int u : users) {
    c.shares.push_back(ytilde(u, b));
    c.rates.push_back(rates.access(u, b));
  }
  return c;
}

std::vector<std::vector<int>> UsersByMvno(const Scenario& s) {
  std::vector<std::vector<int>> out(s.num_mvnos());
  for (int u = 0; u < s.num_users(); ++u) out[s.mvno_of(u)].push_back(u);
  return out;
}

std::vector<int> AllUsers(const Scenario& s) {
  std::vector<int> out(s.num_users());
  for (int u = 0; u < s.num_users(); ++u) out[u] = u;
  return out;
}

double MvnoResourceCost(const Scenario& s, const Matrix& ytilde, const RateTable& rates,
                        int m, const std::vector<int>& users) {
  const ScenarioConfig& c = s.config();
  const Column macro = Gather(ytilde, rates, s.macro_of(m), users);
  std::vector<double> sbs;
  for (int b : s.sbs_of(m)) {
    for (int u : users) sbs.push_back(ytilde(u, b));
  }
  return c.Price(m) * ResourceCost(macro.shares, sbs, rates.alpha(m), c.BandwidthHz(m),
                                   c.MacroPowerW(m), c.SbsPowerW(m), c.SbsWeight(m));
}

}  // namespace

double FairnessTerm(double x, double ytilde, double rate) {
  if (x <= 0.0) return 0.0;
  const double served = ytilde * rate;
  if (served <= 0.0) return -kInf;
  return x * std::log(served / x);
}

double ResourceCost(std::span<const double> macro_shares,
                    std::span<const double> sbs_shares, double alpha, double bandwidth_hz,
                    double macro_power_w, double sbs_power_w, double sbs_weight) {
  double macro = 0.0;
  for (double y : macro_shares) macro += y;
  double small = 0.0;
  for (double y : sbs_shares) small += y;
  return macro * alpha * bandwidth_hz * macro_power_w +
         sbs_weight * small * (1.0 - alpha) * bandwidth_hz * sbs_power_w;
}

double BackhaulCost(std::span<const double> shares, std::span<const double> access_rates,
                    double backhaul_rate, double alpha, double macro_power_w) {
  const double load = Load(shares, access_rates);
  if (load <= 0.0) return 0.0;
  if (backhaul_rate <= 0.0) return kInf;
  return (1.0 - alpha) * macro_power_w * load * load / backhaul_rate;
}

double LeasedBackhaulCost(std::span<const double> shares,
                          std::span<const double> access_rates, double price_per_bit) {
  return price_per_bit * Load(shares, access_rates);
}

double VrmObjective(const Matrix& x, const Matrix& ytilde, const Scenario& s,
                    const RateTable& rates, const SchemeOptions& options) {
  const ScenarioConfig& c = s.config();
  double fairness = 0.0;
  for (int u = 0; u < s.num_users(); ++u) {
    double term = 0.0;
    for (int b = 0; b < s.num_bs(); ++b) {
      term += FairnessTerm(x(u, b), ytilde(u, b), rates.access(u, b));
    }
    fairness += s.payment(u) * term;
  }

  double resource = 0.0;
  for (const std::vector<int>& users : UsersByMvno(s)) {
    for (int m = 0; m < s.num_inps(); ++m) {
      resource += MvnoResourceCost(s, ytilde, rates, m, users);
    }
  }

  double backhaul = 0.0;
  const std::vector<int> everyone = AllUsers(s);
  for (int m = 0; m < s.num_inps(); ++m) {
    for (int b : s.sbs_of(m)) {
      const Column col = Gather(ytilde, rates, b, everyone);
      backhaul += options.self_backhaul
                      ? BackhaulCost(col.shares, col.rates, rates.backhaul(b),
                                     rates.alpha(m), c.MacroPowerW(m))
                      : LeasedBackhaulCost(col.shares, col.rates,
                                           c.external_backhaul_price);
    }
  }
  return fairness - resource - backhaul;
}

UtilityBreakdown ReportUtilities(const AllocationPoint& p, const Scenario& s,
                                 const RateTable& rates, const SchemeOptions& options) {
  const ScenarioConfig& c = s.config();
  const int nu = s.num_users();
  const int nm = s.num_mvnos();
  UtilityBreakdown r;
  r.user_rate.assign(nu, 0.0);
  r.user_utility.assign(nu, 0.0);
  for (auto* v : {&r.mvno_income, &r.mvno_fairness_income, &r.mvno_resource_cost,
                  &r.mvno_backhaul_cost, &r.mvno_raw, &r.mvno_net}) {
    v->assign(nm, 0.0);
  }
  r.inp_utility.assign(s.num_inps(), 0.0);

  for (int u = 0; u < nu; ++u) {
    double rate = 0.0;
    double fairness = 0.0;
    for (int b = 0; b < s.num_bs(); ++b) {
      rate += p.ytilde(u, b) * rates.access(u, b);
      fairness += FairnessTerm(p.x(u, b), p.ytilde(u, b), rates.access(u, b));
    }
    r.user_rate[u] = rate;
    r.user_utility[u] = rate - s.payment(u);  // unit profit per bit
    const int i = s.mvno_of(u);
    r.mvno_income[i] += s.payment(u) * rate;
    r.mvno_fairness_income[i] += s.payment(u) * fairness;
  }

  const std::vector<std::vector<int>> by_mvno = UsersByMvno(s);
  const std::vector<int> everyone = AllUsers(s);
  for (int m = 0; m < s.num_inps(); ++m) {
    double revenue = 0.0;
    double backhaul_income = 0.0;
    for (int i = 0; i < nm; ++i) {
      const double t = MvnoResourceCost(s, p.ytilde, rates, m, by_mvno[i]);
      r.mvno_resource_cost[i] += t;
      revenue += t;
    }
    for (int b : s.sbs_of(m)) {
      const Column all = Gather(p.ytilde, rates, b, everyone);
      const double load = Load(all.shares, all.rates);
      // Per-bit backhaul price; for self-backhaul it is (1 - alpha) P_m z.
      double price = c.external_backhaul_price;
      if (options.self_backhaul) {
        const double z = load > 0.0 ? load / rates.backhaul(b) : 0.0;
        price = (1.0 - rates.alpha(m)) * c.MacroPowerW(m) * z;
      }
      for (int i = 0; i < nm; ++i) {
        const Column mine = Gather(p.ytilde, rates, b, by_mvno[i]);
        const double q = price * Load(mine.shares, mine.rates);
        r.mvno_backhaul_cost[i] += q;
        backhaul_income += q;
      }
    }
    // Leased backhaul passes its income on to the infrastructure owner.
    const double infrastructure = options.self_backhaul ? 0.0 : backhaul_income;
    r.inp_utility[m] = revenue + backhaul_income - infrastructure;
    r.total_inp += r.inp_utility[m];
  }

  for (int i = 0; i < nm; ++i) {
    const double costs = r.mvno_resource_cost[i] + r.mvno_backhaul_cost[i];
    r.mvno_raw[i] = r.mvno_income[i] - costs;
    r.mvno_net[i] = r.mvno_fairness_income[i] - costs;
    r.total_raw += r.mvno_raw[i];
    r.total_vrm += r.mvno_net[i];
  }
  return r;
}

void WriteUtilitiesCsv(const UtilityBreakdown& r, std::ostream& out) {
  CsvWriter csv(out, "utilities", 1, {"entity", "index", "metric", "value"});
  for (std::size_t u = 0; u < r.user_rate.size(); ++u) {
    csv.Row("user", u, "rate", r.user_rate[u]);
    csv.Row("user", u, "utility", r.user_utility[u]);
  }
  for (std::size_t i = 0; i < r.mvno_net.size(); ++i) {
    csv.Row("mvno", i, "income", r.mvno_income[i]);
    csv.Row("mvno", i, "fairness_income", r.mvno_fairness_income[i]);
    csv.Row("mvno", i, "resource_cost", r.mvno_resource_cost[i]);
    csv.Row("mvno", i, "backhaul_cost", r.mvno_backhaul_cost[i]);
    csv.Row("mvno", i, "raw_utility", r.mvno_raw[i]);
    csv.Row("mvno", i, "utility", r.mvno_net[i]);
  }
  for (std::size_t m = 0; m < r.inp_utility.size(); ++m) {
    csv.Row("inp", m, "utility", r.inp_utility[m]);
  }
  csv.Row("total", 0, "mvno_utility", r.total_vrm);
  csv.Row("total", 0, "mvno_raw_utility", r.total_raw);
  csv.Row("total", 0, "inp_utility", r.total_inp);
}

}  // namespace vrm
