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

#include "vrm/oracle.h"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "vrm/csv.h"
#include "vrm/rates.h"

namespace vrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// maximize  sum_u delta_u ln(y_u r_u) - c^T y - sum_j kappa_j (sum_{u on j} r_u y_u)^2
// s.t.      sum_{u on b} y_u <= 1 for every BS and, optionally, a^T y <= 1,
// solved by a log-barrier interior-point method with damped Newton steps.
struct ShareProgram {
  Eigen::VectorXd payment;
  Eigen::VectorXd rate;
  Eigen::VectorXd price;
  std::vector<int> group;           // BS slot of every user
  int num_groups = 0;
  Eigen::VectorXd kappa;            // per group
  std::optional<Eigen::VectorXd> budget;  // coefficients a

  int size() const { return static_cast<int>(payment.size()); }

  double Utility(const Eigen::VectorXd& y) const {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(num_groups);
    double v = 0.0;
    for (int i = 0; i < size(); ++i) {
      v += payment(i) * std::log(y(i) * rate(i)) - price(i) * y(i);
      load(group[i]) += rate(i) * y(i);
    }
    for (int g = 0; g < num_groups; ++g) v -= kappa(g) * load(g) * load(g);
    return v;
  }

  // Slacks of every inequality; empty optional when y leaves the domain.
  std::optional<Eigen::VectorXd> Slacks(const Eigen::VectorXd& y) const {
    if ((y.array() <= 0.0).any()) return std::nullopt;
    Eigen::VectorXd s = Eigen::VectorXd::Ones(num_groups + (budget ? 1 : 0));
    for (int i = 0; i < size(); ++i) s(group[i]) -= y(i);
    if (budget) s(num_groups) -= budget->dot(y);
    if ((s.array() <= 0.0).any()) return std::nullopt;
    return s;
  }

  double Barrier(const Eigen::VectorXd& y, double t, double scale) const {
    const auto s = Slacks(y);
    if (!s) return kInf;
    return -t * Utility(y) / scale - s->array().log().sum();
  }

  Eigen::VectorXd Solve() const {
    const int n = size();
    Eigen::VectorXd y(n);
    std::vector<int> count(num_groups, 0);
    for (int i = 0; i < n; ++i) ++count[group[i]];
    for (int i = 0; i < n; ++i) y(i) = 0.5 / count[group[i]];
    if (budget) {
      const double used = budget->dot(y);
      if (used > 0.5) y *= 0.5 / used;
    }
    const double scale = payment.sum();
    const int constraints = num_groups + (budget ? 1 : 0);
    for (double t = 1.0; constraints / t > 1e-13; t *= 10.0) {
      for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd s = *Slacks(y);
        Eigen::VectorXd load = Eigen::VectorXd::Zero(num_groups);
        for (int i = 0; i < n; ++i) load(group[i]) += rate(i) * y(i);
        Eigen::VectorXd grad(n);
        Matrix hess = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
          const int g = group[i];
          grad(i) = -t / scale *
                        (payment(i) / y(i) - price(i) - 2.0 * kappa(g) * load(g) * rate(i)) +
                    1.0 / s(g);
          hess(i, i) += t / scale * payment(i) / (y(i) * y(i));
          for (int k = 0; k < n; ++k) {
            if (group[k] != g) continue;
            hess(i, k) += t / scale * 2.0 * kappa(g) * rate(i) * rate(k) +
                          1.0 / (s(g) * s(g));
          }
        }
        if (budget) {
          const double sb = s(num_groups);
          grad += *budget / sb;
          hess += *budget * budget->transpose() / (sb * sb);
        }
        const Eigen::VectorXd step = -hess.ldlt().solve(grad);
        const double decrement = -grad.dot(step);
        if (decrement < 1e-18) break;
        const double f0 = Barrier(y, t, scale);
        double eta = 1.0;
        while (eta > 1e-20 && Barrier(y + eta * step, t, scale) > f0 - 0.25 * eta * decrement) {
          eta *= 0.5;
        }
        if (eta <= 1e-20) break;
        y += eta * step;
      }
    }
    return y;
  }
};

double InpValue(const Scenario& s, const RateTable& rates, const Matrix& x, int inp,
                double alpha, const SchemeOptions& options, Matrix* y_out) {
  const ScenarioConfig& c = s.config();
  const double band = c.BandwidthHz(inp);
  const double pm = c.MacroPowerW(inp);
  const double ps = c.SbsPowerW(inp);
  const double gamma = c.Price(inp);
  const double w = c.SbsWeight(inp);
  const auto bss = s.bs_of(inp);

  ShareProgram p;
  p.num_groups = static_cast<int>(bss.size());
  p.kappa = Eigen::VectorXd::Zero(p.num_groups);
  Eigen::VectorXd per_load = Eigen::VectorXd::Zero(p.num_groups);  // budget weight
  std::vector<int> users, cols;
  std::vector<double> pay, rate, price;
  for (int g = 0; g < p.num_groups; ++g) {
    const int b = bss[g];
    const bool macro = s.bs(b).is_macro();
    const double rbh = rates.backhaul(b);
    bool loaded = false;
    for (int u = 0; u < s.num_users(); ++u) {
      if (x(u, b) < 0.5) continue;
      const double r = rates.access(u, b);
      if (r <= 0.0) return -kInf;
      loaded = true;
      users.push_back(u);
      cols.push_back(b);
      p.group.push_back(g);
      pay.push_back(s.payment(u));
      rate.push_back(r);
      double unit = macro ? gamma * alpha * band * pm : gamma * w * (1.0 - alpha) * band * ps;
      if (!macro && !options.self_backhaul) unit += c.external_backhaul_price * r;
      price.push_back(unit);
    }
    if (macro || !loaded || !options.self_backhaul) continue;
    if (rbh <= 0.0) return -kInf;
    // Q_j = (1 - alpha) P_m z_j L_j with the tight share z_j = L_j / R_bh.
    p.kappa(g) = (1.0 - alpha) * pm / rbh;
    per_load(g) = 1.0 / rbh;
  }
  const int n = static_cast<int>(users.size());
  if (y_out) y_out->setZero(s.num_users(), s.num_bs());
  if (n == 0) return 0.0;
  p.payment = Eigen::Map<Eigen::VectorXd>(pay.data(), n);
  p.rate = Eigen::Map<Eigen::VectorXd>(rate.data(), n);
  p.price = Eigen::Map<Eigen::VectorXd>(price.data(), n);
  if (options.self_backhaul && (per_load.array() > 0.0).any()) {
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = per_load(p.group[i]) * p.rate(i);
    p.budget = a;
  }
  const Eigen::VectorXd y = p.Solve();
  if (y_out) {
    for (int i = 0; i < n; ++i) (*y_out)(users[i], cols[i]) = y(i);
  }
  return p.Utility(y);
}

std::vector<std::vector<int>> Choices(const Scenario& s, const SchemeOptions& options) {
  std::vector<std::vector<int>> choices(s.num_users());
  for (int u = 0; u < s.num_users(); ++u) {
    for (int b = 0; b < s.num_bs(); ++b) {
      if (options.virtualization || s.bs(b).inp == HomeInp(s, u)) choices[u].push_back(b);
    }
  }
  return choices;
}

}  // namespace

double OracleInpValue(const Scenario& scenario, const Matrix& binary_x, int inp,
                      double alpha, const SchemeOptions& options, Matrix* y) {
  const Eigen::VectorXd split = Eigen::VectorXd::Constant(scenario.num_inps(), alpha);
  return InpValue(scenario, BuildRateTable(scenario, split), binary_x, inp, alpha, options,
                  y);
}

OracleResult BruteForce(const Scenario& s, const OracleConfig& config,
                        const SchemeOptions& options) {
  const int users = s.num_users();
  const int bss = s.num_bs();
  const int inps = s.num_inps();
  if (users > config.max_users) {
    throw std::invalid_argument("oracle: too many users");
  }
  std::vector<double> grid;
  if (config.fixed_alpha) {
    if (config.fixed_alpha->size() != inps) {
      throw std::invalid_argument("oracle: fixed_alpha has the wrong size");
    }
  } else {
    if (config.alpha_steps < 1) throw std::invalid_argument("oracle: alpha_steps < 1");
    for (int k = 0; k <= config.alpha_steps; ++k) {
      grid.push_back(static_cast<double>(k) / config.alpha_steps);
    }
  }
  const auto choices = Choices(s, options);
  std::int64_t associations = 1;
  for (const auto& c : choices) associations *= static_cast<std::int64_t>(c.size());
  const std::int64_t splits = config.fixed_alpha ? 1 : static_cast<std::int64_t>(grid.size());
  if (associations * splits * inps > config.max_work) {
    throw std::invalid_argument("oracle: instance exceeds the enumeration budget");
  }

  std::vector<RateTable> tables;
  if (config.fixed_alpha) {
    tables.push_back(BuildRateTable(s, *config.fixed_alpha));
  } else {
    for (double a : grid) tables.push_back(BuildRateTable(s, Eigen::VectorXd::Constant(inps, a)));
  }

  // Best value of one InP given which of its BSs each user is on (-1: none).
  struct InpBest {
    double value = -kInf;
    int split = 0;
  };
  std::vector<std::map<std::vector<int>, InpBest>> cache(inps);
  auto inp_best = [&](int m, const std::vector<int>& choice) -> const InpBest& {
    std::vector<int> key(users, -1);
    for (int u = 0; u < users; ++u) {
      if (s.bs(choice[u]).inp == m) key[u] = choice[u];
    }
    auto it = cache[m].find(key);
    if (it != cache[m].end()) return it->second;
    Matrix x = Matrix::Zero(users, bss);
    for (int u = 0; u < users; ++u) {
      if (key[u] >= 0) x(u, key[u]) = 1.0;
    }
    InpBest best;
    for (int k = 0; k < static_cast<int>(tables.size()); ++k) {
      const double a = config.fixed_alpha ? (*config.fixed_alpha)(m) : grid[k];
      const double v = InpValue(s, tables[k], x, m, a, options, nullptr);
      if (v > best.value) best = {v, k};
    }
    return cache[m].emplace(key, best).first->second;
  };

  OracleResult result;
  result.best = AllocationPoint::Zero(users, bss);
  result.best.recovered = true;
  result.objective = -kInf;
  std::vector<int> best_choice;
  std::vector<int> best_split(inps, 0);
  std::vector<int> index(users, 0);
  std::vector<int> choice(users);
  while (true) {
    for (int u = 0; u < users; ++u) choice[u] = choices[u][index[u]];
    ++result.enumerated;
    double total = 0.0;
    std::vector<int> split(inps);
    for (int m = 0; m < inps; ++m) {
      const InpBest& b = inp_best(m, choice);
      total += b.value;
      split[m] = b.split;
    }
    if (total > result.objective) {
      result.objective = total;
      best_choice = choice;
      best_split = split;
    }
    int u = 0;
    while (u < users && ++index[u] == static_cast<int>(choices[u].size())) index[u++] = 0;
    if (u == users) break;
  }

  result.alpha.resize(inps);
  for (int m = 0; m < inps; ++m) {
    result.alpha(m) = config.fixed_alpha ? (*config.fixed_alpha)(m) : grid[best_split[m]];
  }
  if (!std::isfinite(result.objective)) return result;
  AllocationPoint& p = result.best;
  for (int u = 0; u < users; ++u) p.x(u, best_choice[u]) = 1.0;
  const RateTable final_rates = BuildRateTable(s, result.alpha);
  for (int m = 0; m < inps; ++m) {
    Matrix y;
    InpValue(s, final_rates, p.x, m, result.alpha(m), options, &y);
    for (int b : s.bs_of(m)) p.y.col(b) = y.col(b);
  }
  p.ytilde = p.y;
  if (options.self_backhaul) {
    for (int b = 0; b < bss; ++b) {
      if (s.bs(b).is_macro() || final_rates.backhaul(b) <= 0.0) continue;
      p.z(b) = p.y.col(b).dot(final_rates.access.col(b)) / final_rates.backhaul(b);
    }
  }
  return result;
}

void WriteOracleCsv(const OracleResult& r, std::ostream& out) {
  CsvWriter csv(out, "oracle_result", 1, {"field", "index", "value"});
  out << "objective,0," << FormatNumber(r.objective) << '\n';
  out << "enumerated,0," << r.enumerated << '\n';
  for (int m = 0; m < r.alpha.size(); ++m) {
    out << "alpha," << m << ',' << FormatNumber(r.alpha(m)) << '\n';
  }
  const Matrix& x = r.best.x;
  for (int u = 0; u < x.rows(); ++u) {
    int bs = -1;
    for (int b = 0; b < x.cols(); ++b) {
      if (x(u, b) > 0.5) bs = b;
    }
    out << "bs," << u << ',' << bs << '\n';
    out << "y," << u << ',' << FormatNumber(bs >= 0 ? r.best.y(u, bs) : 0.0) << '\n';
  }
  for (int b = 0; b < r.best.z.size(); ++b) {
    out << "z," << b << ',' << FormatNumber(r.best.z(b)) << '\n';
  }
}

}  // namespace vrm
