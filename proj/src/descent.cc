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

#include "vrm/descent.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vrm {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double FrankWolfeGap(const Matrix& x, const Matrix& g, const BoolMatrix& mask) {
  double gap = 0.0;
  for (int u = 0; u < x.rows(); ++u) {
    double best = -std::numeric_limits<double>::infinity();
    double current = 0.0;
    for (int b = 0; b < x.cols(); ++b) {
      if (!mask(u, b)) continue;
      best = std::max(best, g(u, b));
      current += g(u, b) * x(u, b);
    }
    if (std::isfinite(best)) gap += best - current;
  }
  return std::max(gap, 0.0);
}

}  // namespace

Matrix ProjectRowsToSimplex(const Matrix& v, const BoolMatrix& mask) {
  Matrix out = Matrix::Zero(v.rows(), v.cols());
  std::vector<double> values;
  for (int u = 0; u < v.rows(); ++u) {
    values.clear();
    for (int b = 0; b < v.cols(); ++b) {
      if (mask(u, b)) values.push_back(v(u, b));
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      cumulative += values[k];
      const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
      if (values[k] - candidate > 0.0) tau = candidate;
    }
    for (int b = 0; b < v.cols(); ++b) {
      if (mask(u, b)) out(u, b) = std::max(v(u, b) - tau, 0.0);
    }
  }
  return out;
}

Matrix ProjectRowsToSimplex(const Matrix& v, const Matrix& d, const BoolMatrix& mask) {
  Matrix out = Matrix::Zero(v.rows(), v.cols());
  std::vector<int> order;
  for (int u = 0; u < v.rows(); ++u) {
    order.clear();
    for (int b = 0; b < v.cols(); ++b) {
      if (mask(u, b)) order.push_back(b);
    }
    if (order.empty()) continue;
    // Breakpoints v / d in decreasing order; tau solves sum max(v - tau d, 0) = 1.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return v(u, a) / d(u, a) > v(u, b) / d(u, b);
    });
    double sum_v = 0.0, sum_d = 0.0;
    double tau = 0.0;
    for (int b : order) {
      sum_v += v(u, b);
      sum_d += d(u, b);
      const double candidate = (sum_v - 1.0) / sum_d;
      if (v(u, b) - candidate * d(u, b) > 0.0) tau = candidate;
    }
    for (int b : order) out(u, b) = std::max(v(u, b) - tau * d(u, b), 0.0);
  }
  return out;
}

AscentResult EvaluateAssociation(const AssociationProblem& p, const Matrix& x) {
  AscentResult r;
  r.x = x;
  r.ytilde = Matrix::Zero(x.rows(), x.cols());
  r.gradient = Matrix::Zero(x.rows(), x.cols());
  r.curvature = Matrix::Constant(x.rows(), x.cols(), p.rho);
  for (const InpLocalData* d : p.inps) {
    Matrix local(x.rows(), d->num_columns());
    for (int k = 0; k < d->num_columns(); ++k) local.col(k) = x.col(d->columns[k]);
    const ShareSolution s = SolveShares(*d, local);
    for (int k = 0; k < d->num_columns(); ++k) {
      r.ytilde.col(d->columns[k]) = s.ytilde.col(k);
      r.gradient.col(d->columns[k]) = s.marginal.col(k);
      if (d->kappa(k) > 0.0) {
        r.curvature.col(d->columns[k]).array() +=
            2.0 * d->kappa(k) * (s.ratio.col(k).array() * d->rate.col(k).array()).square();
      }
    }
    r.utility += s.value;
  }
  r.value = r.utility;
  if (p.lambda != nullptr) {
    r.value -= (p.lambda->array() * (x - *p.anchor).array()).sum();
    r.gradient -= *p.lambda;
  }
  if (p.rho > 0.0) {
    const Matrix diff = x - *p.anchor;
    r.value -= 0.5 * p.rho * diff.squaredNorm();
    r.gradient -= p.rho * diff;
  }
  r.gradient = p.candidate.select(r.gradient, 0.0);
  r.gap = FrankWolfeGap(x, r.gradient, p.candidate);
  return r;
}

AscentResult MaximizeAssociation(const AssociationProblem& p, const Matrix& x0,
                                 const AscentOptions& options) {
  AscentResult current = EvaluateAssociation(p, ProjectRowsToSimplex(x0, p.candidate));
  // Scaled projected ascent: entry (u, b) moves by (g - tau_u) / (h_ub + theta)
  // where h is the known curvature and theta a scalar adapted to the line
  // search, with a nonmonotone Armijo test over recent values.
  constexpr int kMemory = 8;
  std::vector<double> recent = {current.value};
  double theta = std::max(current.gradient.cwiseAbs().maxCoeff(), 1e-300);
  int it = 0;
  for (; it < options.max_iter; ++it) {
    if (current.gap <= options.tol * (1.0 + std::abs(current.value))) {
      current.converged = true;
      break;
    }
    // Bounding theta below keeps every move finite and well resolved.
    theta = std::max(theta, 1e-6 * current.gradient.cwiseAbs().maxCoeff());
    const Matrix metric = (current.curvature.array() + theta).inverse().matrix();
    const Matrix direction =
        ProjectRowsToSimplex(current.x + metric.cwiseProduct(current.gradient), metric,
                             p.candidate) -
        current.x;
    if (!direction.allFinite()) break;
    const double slope = (current.gradient.array() * direction.array()).sum();
    if (slope <= 0.0) break;  // stationary at machine precision
    const double reference = *std::min_element(recent.begin(), recent.end());
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, lambda *= 0.5) {
      AscentResult trial = EvaluateAssociation(p, current.x + lambda * direction);
      if (trial.value >= reference + kArmijo * lambda * slope &&
          trial.value >= current.value - 1e-12 * std::abs(current.value)) {
        // Spectral estimate of the curvature the metric does not capture.
        const Matrix s = trial.x - current.x;
        const double sy = -(s.array() * (trial.gradient - current.gradient).array()).sum() -
                          (current.curvature.array() * s.array().square()).sum();
        const double ss = s.squaredNorm();
        theta = sy > 0.0 ? std::clamp(sy / ss, 1e-300, 1e300) : theta * 0.25;
        current = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    recent.push_back(current.value);
    if (static_cast<int>(recent.size()) > kMemory) recent.erase(recent.begin());
  }
  current.converged = current.gap <= options.tol * (1.0 + std::abs(current.value));
  current.iterations = it;
  return current;
}

}  // namespace vrm
