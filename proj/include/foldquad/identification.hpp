// Copyright 2026 The foldquad Authors
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

// Identification of the arm spring-damper coefficients from a measured
// deflection trace.
//
// The trace is assumed to start at the impact instant, l(t0) = 0. The model
// is the closed-form free response of the linear arm equation with unknowns
// (b_s, k_s, v0); v0 is seeded from the first samples and refined together
// with the coefficients by Levenberg-Marquardt. The coefficients are fitted
// in log space so they stay positive.

#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "foldquad/arm_spring.hpp"

namespace foldquad {

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-12;
  double cost_tolerance = 1e-16;
  double initial_lambda = 1e-3;
};

struct FitResult {
  SpringParams params;
  double impact_speed = 0.0;   // fitted l'(t0) [m/s]
  double residual_norm = 0.0;  // sqrt(sum of squared residuals) [m]
  int iterations = 0;
  bool converged = false;
};

/// Free response from l(0) = 0, l'(0) = v0 for any damping regime.
inline double free_response(double v0, double damping, double stiffness, double t) {
  const double sigma = 0.5 * damping;
  const double disc = stiffness - sigma * sigma;
  const double decay = std::exp(-sigma * t);
  const double scale = std::sqrt(std::abs(disc));
  if (scale * t < 1e-8) {
    return v0 * t * decay;  // critically damped (or t ~ 0)
  }
  if (disc > 0.0) return v0 / scale * decay * std::sin(scale * t);
  return v0 / scale * decay * std::sinh(scale * t);
}

namespace detail {

inline void require_oscillation(const DisplacementTrace& trace) {
  const auto& l = trace.l;
  const auto n = static_cast<std::ptrdiff_t>(l.size());
  const auto i_max = std::distance(l.begin(), std::max_element(l.begin(), l.end()));
  if (i_max == 0 || i_max == n - 1 || !(l[i_max] > l.front())) {
    throw std::invalid_argument("fit_spring_params: degenerate trace (no interior peak)");
  }
  const auto i_min =
      std::distance(l.begin(), std::min_element(l.begin() + i_max + 1, l.end()));
  if (i_min == n - 1 || !(l[i_min] < l[i_max])) {
    throw std::invalid_argument(
        "fit_spring_params: degenerate trace (no local minimum after the peak)");
  }
}

}  // namespace detail

inline FitResult fit_spring_params(const DisplacementTrace& trace, const SpringParams& guess,
                                   const FitOptions& options = {}) {
  trace.validate(10);
  detail::require_oscillation(trace);
  if (!(guess.damping > 0.0 && guess.stiffness > 0.0)) {
    throw std::invalid_argument("fit_spring_params: initial guess must be positive");
  }

  const std::size_t n = trace.size();
  const double t0 = trace.t.front();

  auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
    const double b = std::exp(q(0));
    const double k = std::exp(q(1));
    for (std::size_t i = 0; i < n; ++i) {
      r(static_cast<Eigen::Index>(i)) = free_response(q(2), b, k, trace.t[i] - t0) - trace.l[i];
    }
  };

  // Seed v0 from the first interval.
  const double v0_seed = (trace.l[1] - trace.l[0]) / (trace.t[1] - trace.t[0]);
  Eigen::Vector3d q(std::log(guess.damping), std::log(guess.stiffness),
                    v0_seed != 0.0 ? v0_seed : 1.0);

  Eigen::VectorXd r(n), r_trial(n), r_plus(n), r_minus(n);
  Eigen::MatrixXd jac(n, 3);
  residuals(q, r);
  double cost = r.squaredNorm();
  double lambda = options.initial_lambda;

  FitResult out;
  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(q(j)));
      Eigen::Vector3d qp = q, qm = q;
      qp(j) += h;
      qm(j) -= h;
      residuals(qp, r_plus);
      residuals(qm, r_minus);
      jac.col(j) = (r_plus - r_minus) / (2.0 * h);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;

    bool accepted = false;
    Eigen::Vector3d delta = Eigen::Vector3d::Zero();
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      delta = a.ldlt().solve(-jtr);
      const Eigen::Vector3d q_trial = q + delta;
      residuals(q_trial, r_trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        const double improvement = cost - trial_cost;
        q = q_trial;
        r = r_trial;
        cost = trial_cost;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (delta.norm() <= options.step_tolerance * (1.0 + q.norm()) ||
            improvement <= options.cost_tolerance * std::max(cost, 1e-300)) {
          out.converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) {
      // No descent direction left; the gradient test decides convergence.
      out.converged = jtr.norm() <= 1e-8 * std::max(1.0, std::sqrt(cost));
      break;
    }
    if (out.converged) break;
  }

  out.params = guess;
  out.params.damping = std::exp(q(0));
  out.params.stiffness = std::exp(q(1));
  out.impact_speed = q(2);
  out.residual_norm = std::sqrt(cost);
  return out;
}

}  // namespace foldquad
