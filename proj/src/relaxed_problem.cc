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

#include "vrm/relaxed_problem.h"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <stdexcept>

#include "vrm/csv.h"
#include "vrm/utility.h"

namespace vrm {
namespace {

// Euclidean projection of (x, y) onto {0 <= y <= x}.
void ProjectCone(double& x, double& y) {
  if (y >= 0.0 && y <= x) return;
  const double x1 = std::max(x, 0.0);  // onto the edge y = 0
  const double d1 = (x - x1) * (x - x1) + y * y;
  const double t = std::max(0.5 * (x + y), 0.0);  // onto the edge y = x
  const double d2 = (x - t) * (x - t) + (y - t) * (y - t);
  if (d1 <= d2) {
    x = x1;
    y = 0.0;
  } else {
    x = t;
    y = t;
  }
}

}  // namespace

RelaxedProblem::RelaxedProblem(const Scenario& scenario, Eigen::VectorXd alpha,
                               SchemeOptions options)
    : scenario_(&scenario),
      options_(options),
      rates_(BuildRateTable(scenario, alpha)),
      candidates_(BoolMatrix::Constant(scenario.num_users(), scenario.num_bs(), false)) {
  for (int m = 0; m < scenario.num_inps(); ++m) {
    locals_.push_back(BuildInpLocalData(scenario, rates_, options_, m));
    const InpLocalData& d = locals_.back();
    for (int k = 0; k < d.num_columns(); ++k) {
      candidates_.col(d.columns[k]) = d.rate.col(k).array() > 0.0;
    }
  }
}

double RelaxedProblem::Objective(const AllocationPoint& p) const {
  return Objective(p.x, p.ytilde);
}

double RelaxedProblem::Objective(const Matrix& x, const Matrix& ytilde) const {
  return VrmObjective(x, ytilde, *scenario_, rates_, options_);
}

PointGradient RelaxedProblem::Gradient(const Matrix& x, const Matrix& ytilde) const {
  PointGradient g{Matrix::Zero(x.rows(), x.cols()), Matrix::Zero(x.rows(), x.cols())};
  for (const InpLocalData& d : locals_) {
    for (int k = 0; k < d.num_columns(); ++k) {
      const int b = d.columns[k];
      double load = 0.0;
      for (int u = 0; u < d.num_users(); ++u) load += ytilde(u, b) * d.rate(u, k);
      for (int u = 0; u < d.num_users(); ++u) {
        const double r = d.rate(u, k);
        if (r <= 0.0) continue;
        const double delta = d.payment(u);
        g.x(u, b) = delta * (std::log(ytilde(u, b) * r / x(u, b)) - 1.0);
        g.ytilde(u, b) = delta * x(u, b) / ytilde(u, b) - d.cost(u, k) -
                         2.0 * d.kappa(k) * r * load;
      }
    }
  }
  return g;
}

ProjectionResult RelaxedProblem::Project(const AllocationPoint& point, double tol,
                                         int max_iter) const {
  const int nu = scenario_->num_users();
  const int nb = scenario_->num_bs();
  Matrix x = point.x;
  Matrix y = point.ytilde;
  // Dykstra correction terms, one pair per constraint family.
  constexpr int kSets = 4;
  std::vector<Matrix> px(kSets, Matrix::Zero(nu, nb));
  std::vector<Matrix> py(kSets, Matrix::Zero(nu, nb));

  const auto simplex = [&](Matrix& a, Matrix&) { a = ProjectRowsToSimplex(a, candidates_); };
  const auto cone = [&](Matrix& a, Matrix& c) {
    for (int u = 0; u < nu; ++u) {
      for (int b = 0; b < nb; ++b) {
        if (candidates_(u, b)) {
          ProjectCone(a(u, b), c(u, b));
        } else {
          c(u, b) = 0.0;
        }
      }
    }
  };
  const auto capacity = [&](Matrix&, Matrix& c) {
    for (int b = 0; b < nb; ++b) {
      double sum = 0.0;
      int count = 0;
      for (int u = 0; u < nu; ++u) {
        if (candidates_(u, b)) {
          sum += c(u, b);
          ++count;
        }
      }
      if (sum <= 1.0 || count == 0) continue;
      const double shift = (sum - 1.0) / count;
      for (int u = 0; u < nu; ++u) {
        if (candidates_(u, b)) c(u, b) -= shift;
      }
    }
  };
  const auto backhaul = [&](Matrix&, Matrix& c) {
    if (!options_.self_backhaul) return;
    for (const InpLocalData& d : locals_) {
      double use = 0.0;
      double norm2 = 0.0;
      for (int k = 0; k < d.num_columns(); ++k) {
        if (d.backhaul_rate(k) <= 0.0) continue;
        for (int u = 0; u < nu; ++u) {
          const double a = d.rate(u, k) / d.backhaul_rate(k);
          use += a * c(u, d.columns[k]);
          norm2 += a * a;
        }
      }
      if (use <= 1.0 || norm2 <= 0.0) continue;
      const double t = (use - 1.0) / norm2;
      for (int k = 0; k < d.num_columns(); ++k) {
        if (d.backhaul_rate(k) <= 0.0) continue;
        for (int u = 0; u < nu; ++u) {
          c(u, d.columns[k]) -= t * d.rate(u, k) / d.backhaul_rate(k);
        }
      }
    }
  };
  const std::array<std::function<void(Matrix&, Matrix&)>, kSets> sets = {
      simplex, cone, capacity, backhaul};

  ProjectionResult result;
  AllocationPoint probe = AllocationPoint::Zero(nu, nb);
  for (result.iterations = 0; result.iterations < max_iter;) {
    ++result.iterations;
    for (int i = 0; i < kSets; ++i) {
      Matrix ax = x + px[i];
      Matrix ay = y + py[i];
      sets[i](ax, ay);
      px[i] = x + px[i] - ax;
      py[i] = y + py[i] - ay;
      x = std::move(ax);
      y = std::move(ay);
    }
    probe.x = x;
    probe.ytilde = y;
    double worst = 0.0;
    for (const Violation& v : CheckFeasible(probe, 0.0)) {
      // C6 reports absolute bit/s; the other families are dimensionless.
      if (v.constraint != "C6") worst = std::max(worst, v.magnitude);
    }
    if (worst <= tol) {
      result.converged = true;
      break;
    }
  }
  result.point = AllocationPoint::Zero(nu, nb);
  result.point.x = x;
  result.point.ytilde = y;
  return result;
}

std::vector<Violation> RelaxedProblem::CheckFeasible(const AllocationPoint& p,
                                                     double tol) const {
  std::vector<Violation> out;
  const int nu = scenario_->num_users();
  const int nb = scenario_->num_bs();
  const auto report = [&](const char* id, int index, double magnitude) {
    if (magnitude > tol) out.push_back({id, index, magnitude});
  };

  for (int u = 0; u < nu; ++u) {
    double row = 0.0;
    bool any = false;
    for (int b = 0; b < nb; ++b) {
      const double x = p.x(u, b);
      const double yt = p.ytilde(u, b);
      if (!candidates_(u, b)) {
        report("candidate", u, std::max(std::abs(x), std::abs(yt)));
        continue;
      }
      any = true;
      row += x;
      report("C2", u, std::max(-x, x - 1.0));
      if (p.recovered) report("C2", u, std::min(std::abs(x), std::abs(x - 1.0)));
      report("C4", u, std::max(-yt, yt - x));
      if (p.recovered) report("C4", u, std::max(-p.y(u, b), p.y(u, b) - 1.0));
    }
    if (any) report("C3", u, std::abs(row - 1.0));
  }

  for (int b = 0; b < nb; ++b) {
    double sum = 0.0;
    for (int u = 0; u < nu; ++u) sum += p.ytilde(u, b);
    report("C5", b, sum - 1.0);
  }

  if (options_.self_backhaul) {
    for (const InpLocalData& d : locals_) {
      double use = 0.0;
      double z_sum = 0.0;
      for (int k = 0; k < d.num_columns(); ++k) {
        const double rbh = d.backhaul_rate(k);
        if (rbh <= 0.0) continue;
        const int b = d.columns[k];
        double load = 0.0;
        for (int u = 0; u < nu; ++u) load += p.ytilde(u, b) * d.rate(u, k);
        use += load / rbh;
        if (load - rbh > tol * rbh) out.push_back({"C6", b, load - rbh});
        if (p.recovered) {
          const double z = p.z(b);
          report("C6", b, std::max(-z, z - 1.0));
          report("C1", b, (load - z * rbh) / rbh);
          z_sum += z;
        }
      }
      report("C7", d.inp, use - 1.0);
      if (p.recovered) report("C7", d.inp, z_sum - 1.0);
    }
  }
  return out;
}

AllocationPoint RelaxedProblem::InitialPoint() const {
  const int nu = scenario_->num_users();
  const int nb = scenario_->num_bs();
  AllocationPoint p = AllocationPoint::Zero(nu, nb);
  const Eigen::VectorXd per_bs = candidates_.cast<double>().colwise().sum().transpose();
  for (int u = 0; u < nu; ++u) {
    const int n = static_cast<int>(candidates_.row(u).count());
    for (int b = 0; b < nb; ++b) {
      if (!candidates_(u, b)) continue;
      p.x(u, b) = 1.0 / n;
      p.ytilde(u, b) = p.x(u, b) / per_bs(b);
    }
  }
  return Project(p).point;
}

AssociationProblem RelaxedProblem::Centralized() const {
  AssociationProblem problem;
  for (const InpLocalData& d : locals_) problem.inps.push_back(&d);
  problem.candidate = candidates_;
  return problem;
}

AscentResult RelaxedProblem::AtAssociation(const Matrix& x) const {
  return EvaluateAssociation(Centralized(), x);
}

AllocationPoint RelaxedProblem::Recover(const Matrix& binary_x) const {
  const int nu = scenario_->num_users();
  const int nb = scenario_->num_bs();
  AllocationPoint p = AllocationPoint::Zero(nu, nb);
  p.recovered = true;
  p.x = binary_x;
  p.ytilde = AtAssociation(binary_x).ytilde;
  for (int u = 0; u < nu; ++u) {
    for (int b = 0; b < nb; ++b) {
      if (p.x(u, b) > 0.0) p.y(u, b) = p.ytilde(u, b) / p.x(u, b);
    }
  }
  if (options_.self_backhaul) {
    for (int b = 0; b < nb; ++b) {
      if (scenario_->bs(b).is_macro() || rates_.backhaul(b) <= 0.0) continue;
      double load = 0.0;
      for (int u = 0; u < nu; ++u) load += p.x(u, b) * p.y(u, b) * rates_.access(u, b);
      p.z(b) = load / rates_.backhaul(b);
    }
  }
  return p;
}

void WriteAllocationCsv(const Scenario& s, const AllocationPoint& p, std::ostream& out) {
  CsvWriter csv(out, "allocation", 1, {"user", "inp", "bs", "x", "ytilde", "y"});
  for (int u = 0; u < s.num_users(); ++u) {
    for (int b = 0; b < s.num_bs(); ++b) {
      const std::string y = p.recovered ? FormatNumber(p.y(u, b)) : std::string();
      csv.Row(u, s.bs(b).inp, b, p.x(u, b), p.ytilde(u, b), y);
    }
  }
}

}  // namespace vrm
