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

#include "vrm/local_problem.h"

#include <cmath>

#include "vrm/utility.h"

namespace vrm {
namespace {

constexpr int kMaxBisection = 200;
constexpr double kRelativeWidth = 1e-15;

// Budget constraints count as met once they hold to this relative slack.
constexpr double kBudgetTol = 1e-12;

bool Narrow(double lo, double hi) { return hi - lo <= kRelativeWidth * hi; }

// Smallest multiplier t in [lo, hi] with excess(t) <= 0, for a decreasing
// `excess` with excess(lo) > 0 >= excess(hi). Illinois-type regula falsi with
// bisection whenever the bracket fails to halve; stops once the constraint is
// met to kBudgetTol.
template <typename Excess>
double DecreasingRoot(const Excess& excess, double lo, double hi, double f_lo, double f_hi) {
  int side = 0;
  for (int it = 0; it < kMaxBisection && !Narrow(lo, hi); ++it) {
    if (f_hi > -kBudgetTol) break;
    const double width = hi - lo;
    double t = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double f = excess(t);
    if (f > 0.0) {
      lo = t;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = t;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double fm = excess(mid);
      (fm > 0.0 ? lo : hi) = mid;
      (fm > 0.0 ? f_lo : f_hi) = fm;
      side = 0;
    }
  }
  return hi;
}

// Solution of one column at fixed multipliers.
struct ColumnState {
  Eigen::VectorXd ratio;
  double load = 0.0;    // sum_u x R ratio
  double shares = 0.0;  // sum_u x ratio
};

class ColumnSolver {
 public:
  ColumnSolver(const InpLocalData& d, const Matrix& x, int k, double capacity_price)
      : d_(d), x_(x), k_(k), base_(d.num_users()) {
    const double rbh = d.backhaul_rate(k);
    for (int u = 0; u < d.num_users(); ++u) {
      base_(u) = d.cost(u, k);
      if (d.backhaul_budget && rbh > 0.0) base_(u) += capacity_price * d.rate(u, k) / rbh;
    }
  }

  // Optimal column state at budget multiplier `nu`, with the per-BS budget
  // sum_u ytilde <= 1 enforced by raising `nu` when needed.
  ColumnState Solve(double* nu_out) const {
    ColumnState state = AtBudgetPrice(0.0);
    double nu = 0.0;
    if (state.shares > 1.0) {
      double hi = 0.0;
      for (int u = 0; u < d_.num_users(); ++u) {
        if (Candidate(u)) hi += d_.payment(u) * x_(u, k_);
      }
      const auto excess = [&](double t) { return AtBudgetPrice(t).shares - 1.0; };
      nu = DecreasingRoot(excess, 0.0, hi, state.shares - 1.0, excess(hi));
      state = AtBudgetPrice(nu);
    }
    *nu_out = nu;
    return state;
  }

  double EffectiveCost(int u, double nu, double load) const {
    return base_(u) + nu + 2.0 * d_.kappa(k_) * d_.rate(u, k_) * load;
  }

  double Ratio(int u, double nu, double load) const {
    const double c = EffectiveCost(u, nu, load);
    return c <= d_.payment(u) ? 1.0 : d_.payment(u) / c;
  }

 private:
  bool Candidate(int u) const { return d_.rate(u, k_) > 0.0; }

  ColumnState Evaluate(double nu, double load) const {
    ColumnState s;
    s.ratio = Eigen::VectorXd::Zero(d_.num_users());
    for (int u = 0; u < d_.num_users(); ++u) {
      if (!Candidate(u)) continue;
      s.ratio(u) = Ratio(u, nu, load);
      s.load += x_(u, k_) * d_.rate(u, k_) * s.ratio(u);
      s.shares += x_(u, k_) * s.ratio(u);
    }
    return s;
  }

  // Fixed point load = sum_u x R ratio(load); the right side decreases in
  // the load, so the root is unique. Newton steps safeguarded by bisection.
  ColumnState AtBudgetPrice(double nu) const {
    if (d_.kappa(k_) <= 0.0) return Evaluate(nu, 0.0);
    double lo = 0.0;
    double hi = 0.0;
    for (int u = 0; u < d_.num_users(); ++u) {
      if (Candidate(u)) hi += x_(u, k_) * d_.rate(u, k_);
    }
    if (hi <= 0.0) return Evaluate(nu, 0.0);
    double load = 0.5 * hi;
    for (int it = 0; it < kMaxBisection && !Narrow(lo, hi); ++it) {
      double excess = -load;  // sum_u x R ratio - load
      double slope = -1.0;
      for (int u = 0; u < d_.num_users(); ++u) {
        if (!Candidate(u)) continue;
        const double c = EffectiveCost(u, nu, load);
        const double xr = x_(u, k_) * d_.rate(u, k_);
        if (c <= d_.payment(u)) {
          excess += xr;
        } else {
          excess += xr * d_.payment(u) / c;
          slope -= xr * d_.payment(u) * 2.0 * d_.kappa(k_) * d_.rate(u, k_) / (c * c);
        }
      }
      if (excess == 0.0) {
        lo = hi = load;
        break;
      }
      (excess > 0.0 ? lo : hi) = load;
      const double next = load - excess / slope;
      const bool inside = next > lo && next < hi;
      const double step = std::abs(next - load);
      load = inside ? next : 0.5 * (lo + hi);
      if (inside && step <= kRelativeWidth * load) break;
    }
    return Evaluate(nu, Narrow(lo, hi) ? hi : load);
  }

  const InpLocalData& d_;
  const Matrix& x_;
  int k_;
  Eigen::VectorXd base_;
};

struct InpState {
  std::vector<ColumnState> columns;
  std::vector<double> nu;
  double budget_use = 0.0;  // sum_j load_j / R_bh_j
};

InpState SolveAll(const InpLocalData& d, const Matrix& x, double capacity_price) {
  InpState s;
  s.columns.resize(d.num_columns());
  s.nu.assign(d.num_columns(), 0.0);
  for (int k = 0; k < d.num_columns(); ++k) {
    s.columns[k] = ColumnSolver(d, x, k, capacity_price).Solve(&s.nu[k]);
    if (d.backhaul_rate(k) > 0.0) s.budget_use += s.columns[k].load / d.backhaul_rate(k);
  }
  return s;
}

}  // namespace

InpLocalData BuildInpLocalData(const Scenario& s, const RateTable& rates,
                               const SchemeOptions& options, int inp) {
  const ScenarioConfig& c = s.config();
  const std::span<const int> bss = s.bs_of(inp);
  const int nu = s.num_users();
  const int nk = static_cast<int>(bss.size());
  const double alpha = rates.alpha(inp);
  const double band = c.BandwidthHz(inp);

  InpLocalData d;
  d.inp = inp;
  d.columns.assign(bss.begin(), bss.end());
  d.rate = Matrix::Zero(nu, nk);
  d.cost = Matrix::Zero(nu, nk);
  d.kappa = Eigen::VectorXd::Zero(nk);
  d.backhaul_rate = Eigen::VectorXd::Zero(nk);
  d.backhaul_budget = options.self_backhaul;
  d.payment = Eigen::VectorXd::Zero(nu);
  for (int u = 0; u < nu; ++u) d.payment(u) = s.payment(u);

  for (int k = 0; k < nk; ++k) {
    const int b = bss[k];
    const bool macro = s.bs(b).is_macro();
    if (!macro && options.self_backhaul) {
      d.backhaul_rate(k) = rates.backhaul(b);
      if (rates.backhaul(b) > 0.0) {
        d.kappa(k) = (1.0 - alpha) * c.MacroPowerW(inp) / rates.backhaul(b);
      }
    }
    for (int u = 0; u < nu; ++u) {
      const double r = rates.access(u, b);
      const bool reachable = options.virtualization || HomeInp(s, u) == inp;
      const bool backhauled = macro || !options.self_backhaul || rates.backhaul(b) > 0.0;
      if (!(r > 0.0 && reachable && backhauled)) continue;
      d.rate(u, k) = r;
      d.cost(u, k) = macro ? c.Price(inp) * alpha * band * c.MacroPowerW(inp)
                           : c.Price(inp) * c.SbsWeight(inp) * (1.0 - alpha) * band *
                                 c.SbsPowerW(inp);
      if (!macro && !options.self_backhaul) d.cost(u, k) += c.external_backhaul_price * r;
    }
  }
  return d;
}

ShareSolution SolveShares(const InpLocalData& d, const Matrix& x) {
  double mu = 0.0;
  InpState state = SolveAll(d, x, 0.0);
  if (d.backhaul_budget && state.budget_use > 1.0) {
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 0; k < d.num_columns(); ++k) {
      if (d.backhaul_rate(k) <= 0.0) continue;
      for (int u = 0; u < d.num_users(); ++u) {
        if (d.rate(u, k) > 0.0) hi += d.payment(u) * x(u, k);
      }
    }
    const auto excess = [&](double t) { return SolveAll(d, x, t).budget_use - 1.0; };
    mu = DecreasingRoot(excess, lo, hi, state.budget_use - 1.0, excess(hi));
    state = SolveAll(d, x, mu);
  }

  ShareSolution out;
  const int nu = d.num_users();
  const int nk = d.num_columns();
  out.ytilde = Matrix::Zero(nu, nk);
  out.ratio = Matrix::Zero(nu, nk);
  out.marginal = Matrix::Zero(nu, nk);
  out.load = Eigen::VectorXd::Zero(nk);
  out.capacity_price = mu;
  for (int k = 0; k < nk; ++k) {
    const ColumnSolver solver(d, x, k, mu);
    const ColumnState& col = state.columns[k];
    double load = 0.0;
    for (int u = 0; u < nu; ++u) {
      const double r = d.rate(u, k);
      if (r <= 0.0) continue;
      const double ratio = col.ratio(u);
      const double y = x(u, k) * ratio;
      out.ratio(u, k) = ratio;
      out.ytilde(u, k) = y;
      load += y * r;
      // Envelope derivative of max_ytilde of x*delta*log(ytilde R / x) - c_eff*ytilde
      // along the ray ytilde = ratio * x.
      const double c_eff = solver.EffectiveCost(u, state.nu[k], col.load);
      out.marginal(u, k) = d.payment(u) * std::log(ratio * r) - c_eff * ratio;
      if (x(u, k) > 0.0) {
        out.value += d.payment(u) * x(u, k) * std::log(ratio * r) - d.cost(u, k) * y;
      }
    }
    out.load(k) = load;
    out.value -= d.kappa(k) * load * load;
  }
  return out;
}

double LocalUtility(const InpLocalData& d, const Matrix& x, const Matrix& ytilde) {
  double value = 0.0;
  for (int k = 0; k < d.num_columns(); ++k) {
    double load = 0.0;
    for (int u = 0; u < d.num_users(); ++u) {
      const double r = d.rate(u, k);
      if (r <= 0.0) continue;
      value += d.payment(u) * FairnessTerm(x(u, k), ytilde(u, k), r) -
               d.cost(u, k) * ytilde(u, k);
      load += ytilde(u, k) * r;
    }
    value -= d.kappa(k) * load * load;
  }
  return value;
}

}  // namespace vrm
