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

// Closed-loop scenario runner.
//
// Each physics step: detect contact against the wall (issuing the recovery
// setpoint once per contact), tick the controller if its attitude-rate slot
// is due, then advance either the free dynamics or the constrained contact
// dynamics. Rows are logged every log_interval; a row's contact flag is set
// if contact was active at any physics step since the previous row.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldquad/arm_spring.hpp"
#include "foldquad/collision.hpp"
#include "foldquad/controller.hpp"
#include "foldquad/dynamics.hpp"
#include "foldquad/harness/config.hpp"

namespace foldquad {

struct LogRow {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Eigen::Vector4d q = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);  // w, x, y, z
  Vec3 omega = Vec3::Zero();
  double l = 0.0;
  double thrust = 0.0;
  Vec3 moment = Vec3::Zero();
  bool contact = false;
  Vec3 x_d = Vec3::Zero();
};

/// One contact episode at physics-step resolution.
struct ContactEpisode {
  double t_start = 0.0;
  double t_end = 0.0;
  Vec3 x_c = Vec3::Zero();
  Vec3 v_c = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();  // into the wall
  double approach_speed = 0.0;
  double rebound_speed = 0.0;
  double peak_l = 0.0;
  bool saturated = false;

  double duration() const { return t_end - t_start; }
};

struct SimLog {
  std::vector<LogRow> rows;
  std::vector<ContactEpisode> episodes;
  bool aborted = false;
  std::string diagnostic;
};

struct RunOptions {
  // Stop at the first physics step that detects contact (approach calibration).
  bool stop_at_first_contact = false;
};

inline SimLog run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {}) {
  cfg.validate();
  const std::optional<Wall> wall = cfg.active_wall();
  const bool foldable = cfg.contact == ContactKind::kFoldable;
  const double dt = cfg.dt;
  const long steps = cfg.physics_steps();
  const long stride = cfg.log_stride();
  const double attitude_period = 1.0 / cfg.controller.attitude_rate;

  SimLog log;
  log.rows.reserve(static_cast<std::size_t>(steps / stride + 2));

  BodyState state = cfg.start;
  Setpoint setpoint = cfg.setpoint;
  ControllerState cs;
  ControlInput input;
  std::optional<ContactPhase> phase;
  long attitude_ticks = 0;
  bool contact_since_row = false;

  auto record = [&](double t) {
    LogRow row;
    row.t = t;
    row.x = state.x;
    row.v = state.v;
    row.q = to_quaternion(state.R);
    row.omega = state.omega;
    row.l = phase ? phase->arm.l : 0.0;
    row.thrust = input.thrust;
    row.moment = input.moment;
    row.contact = contact_since_row || phase.has_value();
    row.x_d = setpoint.position;
    log.rows.push_back(row);
    contact_since_row = false;
  };

  record(0.0);
  try {
    for (long i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) * dt;
      bool rigid_bounce = false;

      if (wall && !phase) {
        if (const auto ev = detect_contact(state, *wall, cfg.vehicle, t)) {
          if (auto rec = trigger_recovery(cs, *ev, cfg.controller, setpoint.yaw)) {
            setpoint = *rec;
          }
          ContactEpisode ep;
          ep.t_start = t;
          ep.x_c = ev->x_c;
          ep.v_c = ev->v_c;
          ep.normal = ev->normal;
          ep.approach_speed = ev->normal_speed();
          if (foldable) {
            state.x -= ev->penetration * ev->normal;
            phase = ContactPhase::from_impact(ev->normal_speed());
          } else {
            state = resolve_rigid(state, *ev, cfg.restitution);
            ep.t_end = t + dt;
            ep.rebound_speed = -state.v.dot(ev->normal);
            rigid_bounce = true;
          }
          log.episodes.push_back(ep);
          contact_since_row = true;
          if (options.stop_at_first_contact) return log;
        }
      }

      if (t + 1e-9 >= static_cast<double>(attitude_ticks) * attitude_period) {
        const ControllerOutput out =
            step_controller(state, setpoint, cs, cfg.controller, cfg.vehicle, t);
        cs = out.state;
        input = out.input;
        while (static_cast<double>(attitude_ticks) * attitude_period <= t + 1e-9) {
          ++attitude_ticks;
        }
      }

      if (phase) {
        contact_since_row = true;
        const ConstrainedStep cstep =
            contact_constrained_step(state, *phase, *wall, input, cfg.vehicle, cfg.spring, dt);
        state = cstep.state;
        phase = cstep.phase;
        if (cstep.exited) {
          ContactEpisode& ep = log.episodes.back();
          ep.t_end = ep.t_start + phase->elapsed;
          ep.rebound_speed = -phase->arm.l_dot;
          ep.peak_l = phase->peak_l;
          ep.saturated = phase->saturated;
          phase.reset();
          release_recovery(cs);
        }
      } else {
        state = integrate_step(state, input, cfg.vehicle, dt);
      }
      if (rigid_bounce) release_recovery(cs);

      if ((i + 1) % stride == 0) record(static_cast<double>(i + 1) * dt);
    }
  } catch (const std::exception& e) {
    log.aborted = true;
    log.diagnostic = e.what();
  }
  return log;
}

}  // namespace foldquad
