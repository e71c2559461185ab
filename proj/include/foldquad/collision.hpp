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

// Planar wall, contact detection and the two contact resolvers.
//
// The vehicle's contact envelope is a sphere of radius contact_radius about
// the centroid (the propeller guards). A rigid frame bounces impulsively with
// a restitution coefficient; a foldable frame pins the guard to the wall and
// lets the arm spring absorb the normal motion until it releases.

#pragma once

#include <optional>
#include <stdexcept>
#include <variant>

#include "foldquad/arm_spring.hpp"
#include "foldquad/dynamics.hpp"

namespace foldquad {

/// Plane {p : normal.p + offset = 0}. `normal` points out of the wall into
/// free space, so distance() is positive on the flyable side.
struct Wall {
  Vec3 normal = -Vec3::UnitX();
  double offset = 0.3;

  static Wall facing(const Vec3& normal, double offset) {
    if (!is_finite(normal) || normal.norm() < 1e-12) {
      throw std::invalid_argument("wall: normal must be finite and non-zero");
    }
    return Wall{normal.normalized(), offset};
  }

  double distance(const Vec3& p) const { return normal.dot(p) + offset; }

  void validate() const {
    if (std::abs(normal.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("wall: normal must be a unit vector");
    }
  }
};

struct Foldable {
  SpringParams spring;
};

struct Rigid {
  double restitution = 0.9;
};

using ContactMode = std::variant<Foldable, Rigid>;

inline bool is_foldable(const ContactMode& mode) {
  return std::holds_alternative<Foldable>(mode);
}

struct CollisionEvent {
  double t_c = 0.0;
  Vec3 x_c = Vec3::Zero();
  Vec3 v_c = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();  // into the wall; v_c.normal > 0
  double penetration = 0.0;     // envelope overlap at detection [m]

  double normal_speed() const { return v_c.dot(normal); }
};

inline std::optional<CollisionEvent> detect_contact(const BodyState& s, const Wall& w,
                                                    const VehicleParams& p, double t = 0.0) {
  const double d = w.distance(s.x);
  const double approach = -w.normal.dot(s.v);
  if (d > p.contact_radius || !(approach > 0.0)) return std::nullopt;
  CollisionEvent ev;
  ev.t_c = t;
  ev.x_c = s.x;
  ev.v_c = s.v;
  ev.normal = -w.normal;
  ev.penetration = p.contact_radius - d;
  return ev;
}

/// Impulsive bounce: v_n+ = -e v_n-, tangential velocity and attitude kept,
/// envelope moved back to touching.
inline BodyState resolve_rigid(const BodyState& s, const CollisionEvent& ev, double restitution) {
  if (!(restitution >= 0.0 && restitution <= 1.0)) {
    throw std::invalid_argument("resolve_rigid: restitution must lie in [0, 1]");
  }
  BodyState out = s;
  const double vn = s.v.dot(ev.normal);
  if (vn > 0.0) out.v = s.v - (1.0 + restitution) * vn * ev.normal;
  out.x = s.x - ev.penetration * ev.normal;
  return out;
}

/// Specific force (thrust + gravity) along `direction`.
inline double specific_force_along(const BodyState& s, const ControlInput& u,
                                   const VehicleParams& p, const Vec3& direction) {
  const Vec3 a = p.gravity * kE3 - (u.thrust / p.mass) * (s.R * kE3);
  return a.dot(direction);
}

struct ConstrainedStep {
  BodyState state;
  ContactPhase phase;
  bool exited = false;
};

/// One physics step of foldable contact. The guard stays on the wall and the
/// centroid's wall distance is r_contact - l; the normal component of thrust
/// and gravity drives the arm. All other motion follows the free dynamics.
/// On exit the body leaves with normal speed -l' and flies freely for the
/// remainder of the step.
inline ConstrainedStep contact_constrained_step(const BodyState& s, const ContactPhase& phase,
                                                const Wall& w, const ControlInput& u,
                                                const VehicleParams& p, const SpringParams& sp,
                                                double dt) {
  const Vec3 inward = -w.normal;
  const double forcing = specific_force_along(s, u, p, inward);

  ConstrainedStep out;
  out.phase = phase;
  const ContactStep arm_step = advance_contact(out.phase, sp, forcing, dt);
  out.exited = arm_step.exited;
  out.state = integrate_step(s, u, p, dt);

  double distance = p.contact_radius - out.phase.arm.l;
  double outward_speed = -out.phase.arm.l_dot;
  if (arm_step.exited) {
    const double rest = dt - arm_step.exit_offset;
    distance += outward_speed * rest - 0.5 * forcing * rest * rest;
    outward_speed -= forcing * rest;
  }
  out.state.x += w.normal * (distance - w.distance(out.state.x));
  out.state.v += w.normal * (outward_speed - w.normal.dot(out.state.v));
  return out;
}

/// Mean impact force m * dv / dt_c.
inline double impact_force_estimate(double mass, double delta_v, double contact_time) {
  if (!(contact_time > 0.0)) {
    throw std::invalid_argument("impact_force_estimate: contact time must be > 0");
  }
  return mass * delta_v / contact_time;
}

}  // namespace foldquad
