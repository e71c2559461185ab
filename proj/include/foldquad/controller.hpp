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

// Flight controller: post-collision recovery setpoint, a cascaded P-PID
// position loop and a geometric attitude loop on SO(3).
//
//   e_x = x_d - x,  v_d = k_p e_x,  e_v = v_d - v
//   a_cmd = k_v e_v + k_vI int(e_v) + k_vD d(e_v)/dt
//   e_R = 1/2 vee(R_d^T R - R^T R_d),  e_W = W - R^T R_d W_d
//   tau = -k_R e_R - k_W e_W + W x J W + J alpha_d
//
// a_cmd is the desired inertial acceleration. The thrust direction follows
// from m a_cmd = m g e3 - f R e3; yaw is decoupled.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "foldquad/collision.hpp"
#include "foldquad/dynamics.hpp"

namespace foldquad {

using Vec2 = Eigen::Vector2d;

struct ControllerConfig {
  double kp = 1.5;
  double kv = 4.0;
  double kv_i = 0.1;
  double kv_d = 0.05;
  double kR = 1.5;
  double kOmega = 0.2;
  double gamma1 = 0.5;
  double gamma2 = 0.5;
  double attitude_rate = 150.0;  // [Hz]
  double position_rate = 100.0;  // [Hz]
  double max_thrust = 16.0;      // [N]
  double integral_limit = 1.0;   // per axis, on int(e_v) [m]
  bool differentiate_attitude_setpoint = false;

  void validate() const {
    for (double g : {kp, kv, kv_i, kv_d, kR, kOmega, gamma1, gamma2}) {
      if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("controller: gains and gammas must be positive");
      }
    }
    if (!(position_rate > 0.0 && attitude_rate >= position_rate)) {
      throw std::invalid_argument("controller: require attitude_rate >= position_rate > 0");
    }
    if (!(max_thrust > 0.0)) throw std::invalid_argument("controller: max_thrust must be > 0");
    if (!(integral_limit >= 0.0)) {
      throw std::invalid_argument("controller: integral_limit must be >= 0");
    }
  }
};

struct Setpoint {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
};

struct AttitudeSetpoint {
  Mat3 R_d = Mat3::Identity();
  Vec3 omega_d = Vec3::Zero();
  Vec3 alpha_d = Vec3::Zero();
};

struct PositionCommand {
  double thrust = 0.0;
  AttitudeSetpoint attitude;
};

struct ControllerState {
  Vec3 integral = Vec3::Zero();
  Vec3 prev_velocity_error = Vec3::Zero();
  bool has_prev_velocity_error = false;

  // Attitude-setpoint history for the degenerate-thrust fallback and the
  // optional numerical differentiation.
  Mat3 last_R_d = Mat3::Identity();
  Vec3 last_omega_d = Vec3::Zero();
  bool has_last_R_d = false;

  // Position-loop schedule: output is held between ticks.
  PositionCommand held;
  long position_ticks = 0;
  long position_updates = 0;

  bool recovery_latched = false;
  std::optional<double> last_recovery_time;
};

/// Recovery target placed opposite the horizontal approach direction, at a
/// distance gamma_i |v_ci| per axis. Altitude is kept.
inline Setpoint recovery_setpoint(const Vec3& x_tc, const Vec2& v_c, const ControllerConfig& cfg,
                                  double yaw = 0.0) {
  auto sgn = [](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); };
  Setpoint sp;
  sp.position = Vec3(x_tc.x() - sgn(v_c.x()) * (cfg.gamma1 * std::abs(v_c.x())),
                     x_tc.y() - sgn(v_c.y()) * (cfg.gamma2 * std::abs(v_c.y())),
                     x_tc.z());
  sp.yaw = yaw;
  return sp;
}

/// Issues the recovery setpoint for `ev` unless one was already issued for
/// the current contact. release_recovery() re-arms the latch. The velocity
/// integrator restarts with the new target.
inline std::optional<Setpoint> trigger_recovery(ControllerState& cs, const CollisionEvent& ev,
                                                const ControllerConfig& cfg, double yaw) {
  if (cs.recovery_latched) return std::nullopt;
  cs.recovery_latched = true;
  cs.last_recovery_time = ev.t_c;
  cs.integral.setZero();
  return recovery_setpoint(ev.x_c, Vec2(ev.v_c.x(), ev.v_c.y()), cfg, yaw);
}

inline void release_recovery(ControllerState& cs) { cs.recovery_latched = false; }

/// Rotation whose third column is `b3` and whose first column lies in the
/// plane spanned by b3 and the heading direction. Empty if they are parallel.
inline std::optional<Mat3> attitude_from_thrust_axis(const Vec3& b3, double yaw) {
  const Vec3 heading(std::cos(yaw), std::sin(yaw), 0.0);
  const Vec3 b2_raw = b3.cross(heading);
  if (b2_raw.norm() < 1e-6) return std::nullopt;
  const Vec3 b2 = b2_raw.normalized();
  Mat3 r;
  r.col(0) = b2.cross(b3);
  r.col(1) = b2;
  r.col(2) = b3;
  return r;
}

struct PositionLoopOutput {
  PositionCommand command;
  ControllerState state;
  Vec3 accel_command = Vec3::Zero();
};

inline PositionLoopOutput position_loop(const BodyState& s, const Setpoint& sp,
                                        const ControllerState& cs, const ControllerConfig& cfg,
                                        const VehicleParams& p, double dt) {
  PositionLoopOutput out;
  out.state = cs;
  ControllerState& st = out.state;

  const Vec3 e_x = sp.position - s.x;
  const Vec3 v_d = cfg.kp * e_x;
  const Vec3 e_v = v_d - s.v;

  st.integral = (st.integral + e_v * dt)
                    .cwiseMax(-cfg.integral_limit)
                    .cwiseMin(cfg.integral_limit);
  const Vec3 e_v_rate =
      st.has_prev_velocity_error ? Vec3((e_v - st.prev_velocity_error) / dt) : Vec3::Zero();
  st.prev_velocity_error = e_v;
  st.has_prev_velocity_error = true;

  const Vec3 a_cmd = cfg.kv * e_v + cfg.kv_i * st.integral + cfg.kv_d * e_v_rate;
  out.accel_command = a_cmd;

  // f R e3 = m (g e3 - a_cmd)
  const Vec3 thrust_axis = p.gravity * kE3 - a_cmd;
  const double magnitude = thrust_axis.norm();

  AttitudeSetpoint& att = out.command.attitude;
  std::optional<Mat3> R_d;
  if (magnitude > 1e-6) R_d = attitude_from_thrust_axis(thrust_axis / magnitude, sp.yaw);
  att.R_d = R_d ? *R_d : (st.has_last_R_d ? st.last_R_d : yaw_rotation(sp.yaw));

  if (cfg.differentiate_attitude_setpoint && st.has_last_R_d) {
    const Mat3 delta = st.last_R_d.transpose() * att.R_d;
    att.omega_d = vee(0.5 * (delta - delta.transpose()), 1.0) / dt;
    att.alpha_d = (att.omega_d - st.last_omega_d) / dt;
  }
  st.last_R_d = att.R_d;
  st.last_omega_d = att.omega_d;
  st.has_last_R_d = true;

  const double projected = p.mass * thrust_axis.dot(s.R * kE3);
  out.command.thrust = std::clamp(projected, 0.0, cfg.max_thrust);
  return out;
}

struct AttitudeErrors {
  Vec3 e_R = Vec3::Zero();
  Vec3 e_omega = Vec3::Zero();
};

inline AttitudeErrors attitude_errors(const Mat3& R, const Vec3& omega,
                                      const AttitudeSetpoint& asp) {
  AttitudeErrors e;
  const Mat3 skew = asp.R_d.transpose() * R - R.transpose() * asp.R_d;
  e.e_R = 0.5 * Vec3(skew(2, 1), skew(0, 2), skew(1, 0));
  e.e_omega = omega - R.transpose() * asp.R_d * asp.omega_d;
  return e;
}

inline Vec3 attitude_moment(const AttitudeErrors& e, const Vec3& omega,
                            const AttitudeSetpoint& asp, const VehicleParams& p,
                            const ControllerConfig& cfg) {
  return -cfg.kR * e.e_R - cfg.kOmega * e.e_omega + omega.cross(p.inertia * omega) +
         p.inertia * asp.alpha_d;
}

struct ControllerOutput {
  ControlInput input;
  ControllerState state;
  bool position_updated = false;
};

/// One attitude-rate tick at time t. The position loop runs when its own
/// tick is due (ticks at k / position_rate) and its output is held otherwise.
inline ControllerOutput step_controller(const BodyState& s, const Setpoint& sp,
                                        const ControllerState& cs, const ControllerConfig& cfg,
                                        const VehicleParams& p, double t) {
  ControllerOutput out;
  out.state = cs;
  const double period = 1.0 / cfg.position_rate;
  if (t + 1e-9 >= static_cast<double>(cs.position_ticks) * period) {
    PositionLoopOutput pos = position_loop(s, sp, cs, cfg, p, period);
    out.state = pos.state;
    out.state.held = pos.command;
    out.state.position_ticks = cs.position_ticks + 1;
    while (static_cast<double>(out.state.position_ticks) * period <= t + 1e-9) {
      ++out.state.position_ticks;
    }
    ++out.state.position_updates;
    out.position_updated = true;
  }
  const PositionCommand& cmd = out.state.held;
  const AttitudeErrors err = attitude_errors(s.R, s.omega, cmd.attitude);
  out.input.thrust = cmd.thrust;
  out.input.moment = attitude_moment(err, s.omega, cmd.attitude, p, cfg);
  return out;
}

}  // namespace foldquad
