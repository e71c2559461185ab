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

// Rigid-body quadrotor model on SO(3) and its fixed-step integrator.
//
// Frames: the inertial third axis points down. Thrust f acts along -R*e3,
// so a level vehicle with f = m*g hovers.

#pragma once

#include <stdexcept>
#include <string>

#include "foldquad/so3.hpp"

namespace foldquad {

/// Raised when the simulation state stops being finite or otherwise valid.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BodyState {
  Vec3 x = Vec3::Zero();      // position, inertial [m]
  Vec3 v = Vec3::Zero();      // velocity, inertial [m/s]
  Mat3 R = Mat3::Identity();  // body -> inertial
  Vec3 omega = Vec3::Zero();  // body angular rate [rad/s]

  bool finite() const {
    return is_finite(x) && is_finite(v) && is_finite(R) && is_finite(omega);
  }
};

struct BodyStateDerivative {
  Vec3 x_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Mat3 R_dot = Mat3::Zero();
  Vec3 omega_dot = Vec3::Zero();
};

struct VehicleParams {
  double mass = 1.112;                                  // [kg]
  Mat3 inertia = Vec3(0.0034, 0.0034, 0.0053).asDiagonal();  // [kg m^2]
  double gravity = 9.81;                                // [m/s^2]
  double arm_length = 0.11;                             // nominal arm [m]
  double arm_travel = 0.03;                             // max inward travel [m]
  double contact_radius = 0.145;                        // guard envelope [m]

  void validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("vehicle: mass must be > 0");
    if (!is_finite(inertia) || (inertia - inertia.transpose()).norm() > 1e-12) {
      throw std::invalid_argument("vehicle: inertia must be finite and symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw std::invalid_argument("vehicle: inertia must be positive-definite");
    }
    if (!(gravity >= 0.0)) throw std::invalid_argument("vehicle: gravity must be >= 0");
    if (!(arm_travel > 0.0 && arm_travel < arm_length && arm_length < contact_radius)) {
      throw std::invalid_argument(
          "vehicle: require 0 < arm_travel < arm_length < contact_radius");
    }
  }
};

struct ControlInput {
  double thrust = 0.0;            // total thrust along -b3 [N]
  Vec3 moment = Vec3::Zero();     // body moment [N m]
};

inline BodyStateDerivative dynamics_derivative(const BodyState& s, const ControlInput& u,
                                               const VehicleParams& p) {
  BodyStateDerivative d;
  d.x_dot = s.v;
  d.v_dot = p.gravity * kE3 - (u.thrust / p.mass) * (s.R * kE3);
  d.R_dot = s.R * hat(s.omega);
  d.omega_dot = p.inertia.ldlt().solve(u.moment - s.omega.cross(p.inertia * s.omega));
  return d;
}

namespace detail {

inline BodyState advance(const BodyState& s, const BodyStateDerivative& d, double h) {
  BodyState out;
  out.x = s.x + h * d.x_dot;
  out.v = s.v + h * d.v_dot;
  out.R = s.R + h * d.R_dot;
  out.omega = s.omega + h * d.omega_dot;
  return out;
}

}  // namespace detail

inline constexpr double kMaxPhysicsStep = 0.01;

/// Classical RK4 over dynamics_derivative with the input held constant,
/// followed by projection of R back onto SO(3).
inline BodyState integrate_step(const BodyState& s, const ControlInput& u,
                                const VehicleParams& p, double dt) {
  if (!(dt > 0.0 && dt <= kMaxPhysicsStep)) {
    throw std::invalid_argument("integrate_step: dt must be in (0, 0.01]");
  }
  const BodyStateDerivative k1 = dynamics_derivative(s, u, p);
  const BodyStateDerivative k2 = dynamics_derivative(detail::advance(s, k1, 0.5 * dt), u, p);
  const BodyStateDerivative k3 = dynamics_derivative(detail::advance(s, k2, 0.5 * dt), u, p);
  const BodyStateDerivative k4 = dynamics_derivative(detail::advance(s, k3, dt), u, p);

  const double w = dt / 6.0;
  BodyState out;
  out.x = s.x + w * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
  out.v = s.v + w * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  out.R = s.R + w * (k1.R_dot + 2.0 * k2.R_dot + 2.0 * k3.R_dot + k4.R_dot);
  out.omega = s.omega + w * (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot +
                             k4.omega_dot);
  if (!out.finite()) {
    throw SimulationError("integrate_step: non-finite state (blow-up)");
  }
  out.R = renormalize_rotation(out.R);
  return out;
}

}  // namespace foldquad
