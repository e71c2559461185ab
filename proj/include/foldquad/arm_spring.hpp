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

// Folding-arm spring-damper model.
//
// The arm deflection l (positive = compressed toward the hub) obeys
//
//   l'' = -b_s l' - k_s l + a_n
//
// with mass-normalized damping b_s and stiffness k_s. a_n is an optional
// external specific force along the contact normal (thrust and gravity
// pushing the vehicle into the wall); it is zero for the bare arm model.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "foldquad/dynamics.hpp"

namespace foldquad {

struct SpringParams {
  double damping = 30.0;          // b_s [1/s]
  double stiffness = 500.0;       // k_s [1/s^2]
  double travel_limit = 0.03;     // l_max [m]
  double exit_threshold = 0.002;  // delta_l [m]

  void validate() const {
    if (!(damping >= 0.0)) throw std::invalid_argument("spring: damping must be >= 0");
    if (!(stiffness > 0.0)) throw std::invalid_argument("spring: stiffness must be > 0");
    if (!(exit_threshold > 0.0 && exit_threshold < travel_limit)) {
      throw std::invalid_argument("spring: require 0 < exit_threshold < travel_limit");
    }
  }

  double natural_frequency() const { return std::sqrt(stiffness); }
  double damping_ratio() const { return damping / (2.0 * std::sqrt(stiffness)); }
  bool underdamped() const { return damping * damping < 4.0 * stiffness; }
};

struct ArmState {
  double l = 0.0;      // inward deflection [m]
  double l_dot = 0.0;  // [m/s]
};

struct ArmRate {
  double l_dot = 0.0;
  double l_ddot = 0.0;
};

inline ArmRate spring_derivative(const ArmState& a, const SpringParams& p,
                                 double forcing = 0.0) {
  return {a.l_dot, -p.damping * a.l_dot - p.stiffness * a.l + forcing};
}

/// Mechanical energy per unit mass, 0.5 l'^2 + 0.5 k_s l^2.
inline double spring_energy(const ArmState& a, const SpringParams& p) {
  return 0.5 * a.l_dot * a.l_dot + 0.5 * p.stiffness * a.l * a.l;
}

/// Closed-form free response from l(0) = 0, l'(0) = v0 (underdamped only,
/// travel limit ignored).
inline ArmState analytic_response(double v0, const SpringParams& p, double t) {
  if (!p.underdamped()) {
    throw std::invalid_argument("analytic_response: parameters are not underdamped");
  }
  const double wn = p.natural_frequency();
  const double zeta = p.damping_ratio();
  const double sigma = zeta * wn;
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  const double decay = std::exp(-sigma * t);
  const double s = std::sin(wd * t);
  const double c = std::cos(wd * t);
  return {(v0 / wd) * decay * s, v0 * decay * (c - (sigma / wd) * s)};
}

/// Time of the first deflection peak of analytic_response.
inline double analytic_peak_time(const SpringParams& p) {
  const double wn = p.natural_frequency();
  const double zeta = p.damping_ratio();
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  return std::atan2(wd, zeta * wn) / wd;
}

/// Time at which analytic_response returns to l = 0.
inline double analytic_return_time(const SpringParams& p) {
  const double wn = p.natural_frequency();
  const double zeta = p.damping_ratio();
  return std::numbers::pi / (wn * std::sqrt(1.0 - zeta * zeta));
}

inline ArmState spring_rk4_step(const ArmState& a, const SpringParams& p, double forcing,
                                double h) {
  auto at = [&](const ArmRate& k, double w) {
    return ArmState{a.l + w * k.l_dot, a.l_dot + w * k.l_ddot};
  };
  const ArmRate k1 = spring_derivative(a, p, forcing);
  const ArmRate k2 = spring_derivative(at(k1, 0.5 * h), p, forcing);
  const ArmRate k3 = spring_derivative(at(k2, 0.5 * h), p, forcing);
  const ArmRate k4 = spring_derivative(at(k3, h), p, forcing);
  return {a.l + h / 6.0 * (k1.l_dot + 2.0 * k2.l_dot + 2.0 * k3.l_dot + k4.l_dot),
          a.l_dot + h / 6.0 * (k1.l_ddot + 2.0 * k2.l_ddot + 2.0 * k3.l_ddot + k4.l_ddot)};
}

/// Contact lasting longer than this is treated as a parameter pathology.
inline constexpr double kMaxContactTime = 1.0;

/// Arm state plus the bookkeeping needed for the contact exit rule.
struct ContactPhase {
  ArmState arm;
  double elapsed = 0.0;
  double peak_l = 0.0;
  bool past_peak = false;
  bool saturated = false;

  static ContactPhase from_impact(double normal_speed) {
    ContactPhase c;
    c.arm = {0.0, normal_speed};
    return c;
  }
};

struct ContactStep {
  bool exited = false;
  double exit_offset = 0.0;  // time into the step at which the arm left [s]
};

namespace detail {

// Smallest h in (0, dt] with pred(spring_rk4_step(from, h)) true, given
// pred is false at 0 and true at dt.
template <typename Pred>
double bisect_step(const ArmState& from, const SpringParams& p, double forcing, double dt,
                   Pred pred) {
  double lo = 0.0;
  double hi = dt;
  for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(spring_rk4_step(from, p, forcing, mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace detail

/// Advances a contact phase by dt. The arm is stopped inelastically at the
/// travel limit. Contact ends the first time l <= exit_threshold with
/// l' < 0 after the first peak; the exit instant is located inside the
/// step and `phase.arm` then holds the state at that instant.
inline ContactStep advance_contact(ContactPhase& phase, const SpringParams& p, double forcing,
                                   double dt) {
  const ArmState prev = phase.arm;
  ArmState next = spring_rk4_step(prev, p, forcing, dt);
  ContactStep result;

  if (!phase.past_peak) {
    if (next.l >= p.travel_limit) {
      next = {p.travel_limit, 0.0};
      phase.saturated = true;
      phase.past_peak = true;
      phase.peak_l = p.travel_limit;
      phase.arm = next;
      phase.elapsed += dt;
      return result;
    }
    if (next.l_dot <= 0.0) {
      phase.past_peak = true;
      const double h = prev.l_dot > 0.0
                           ? detail::bisect_step(prev, p, forcing, dt,
                                                 [](const ArmState& a) { return a.l_dot <= 0.0; })
                           : 0.0;
      const double at_peak = h > 0.0 ? spring_rk4_step(prev, p, forcing, h).l : prev.l;
      phase.peak_l = std::max({phase.peak_l, at_peak, next.l});
    } else {
      phase.peak_l = std::max(phase.peak_l, next.l);
    }
  } else if (phase.saturated && next.l > p.travel_limit) {
    // Held against the stop by the external force.
    next = {p.travel_limit, 0.0};
  }

  if (phase.past_peak && next.l <= p.exit_threshold && next.l_dot < 0.0) {
    result.exited = true;
    if (prev.l > p.exit_threshold) {
      const double threshold = p.exit_threshold;
      result.exit_offset = detail::bisect_step(
          prev, p, forcing, dt, [threshold](const ArmState& a) { return a.l <= threshold; });
      next = spring_rk4_step(prev, p, forcing, result.exit_offset);
    } else {
      result.exit_offset = dt;
    }
    phase.arm = next;
    phase.elapsed += result.exit_offset;
    return result;
  }

  phase.arm = next;
  phase.elapsed += dt;
  if (phase.elapsed > kMaxContactTime) {
    throw SimulationError("contact did not terminate within 1 s of simulated time");
  }
  return result;
}

struct DisplacementTrace {
  std::vector<double> t;
  std::vector<double> l;

  std::size_t size() const { return t.size(); }

  void push_back(double time, double deflection) {
    t.push_back(time);
    l.push_back(deflection);
  }

  void validate(std::size_t min_samples = 2) const {
    if (t.size() != l.size()) throw std::invalid_argument("trace: column length mismatch");
    if (t.size() < min_samples) throw std::invalid_argument("trace: too few samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || !std::isfinite(l[i])) {
        throw std::invalid_argument("trace: non-finite sample");
      }
      if (i > 0 && !(t[i] > t[i - 1])) {
        throw std::invalid_argument("trace: timestamps must be strictly increasing");
      }
    }
  }
};

struct ContactResult {
  double rebound_speed = 0.0;  // v_rb, along the outward normal [m/s]
  double duration = 0.0;       // [s]
  double peak_l = 0.0;         // [m]
  bool saturated = false;
  DisplacementTrace trace;
};

/// Integrates the bare arm model from (l = 0, l' = v_impact) until contact
/// exit and reports the rebound speed |l'| at that instant.
inline ContactResult simulate_contact(double v_impact, const SpringParams& p, double dt) {
  p.validate();
  if (!(v_impact > 0.0)) throw std::invalid_argument("simulate_contact: v_impact must be > 0");
  if (!(dt > 0.0 && dt <= 1e-3)) {
    throw std::invalid_argument("simulate_contact: dt must be in (0, 1 ms]");
  }
  ContactPhase phase = ContactPhase::from_impact(v_impact);
  ContactResult out;
  out.trace.push_back(0.0, 0.0);
  while (true) {
    const ContactStep step = advance_contact(phase, p, 0.0, dt);
    out.trace.push_back(phase.elapsed, phase.arm.l);
    if (step.exited) break;
  }
  out.rebound_speed = std::abs(phase.arm.l_dot);
  out.duration = phase.elapsed;
  out.peak_l = phase.peak_l;
  out.saturated = phase.saturated;
  return out;
}

}  // namespace foldquad
