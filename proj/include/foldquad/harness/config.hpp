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

// Scenario configuration and its flat `key = value` file format.
//
//   # comment
//   vehicle.mass = 1.112
//   wall.normal  = -1, 0, 0
//
// Vectors are comma separated. Unknown keys are errors. All values in SI.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foldquad/collision.hpp"
#include "foldquad/controller.hpp"
#include "foldquad/dynamics.hpp"

namespace foldquad {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ContactKind { kFoldable, kRigid };

inline const char* to_string(ContactKind k) {
  return k == ContactKind::kFoldable ? "foldable" : "rigid";
}

struct ScenarioConfig {
  VehicleParams vehicle;
  SpringParams spring;
  ContactKind contact = ContactKind::kFoldable;
  double restitution = 0.9;
  ControllerConfig controller;
  bool wall_enabled = true;
  Wall wall;
  BodyState start = [] {
    BodyState s;
    s.x = Vec3(0.0, 0.0, -4.0);
    return s;
  }();
  Setpoint setpoint{Vec3(2.0, 0.0, -4.0), 0.0};
  double duration = 6.0;      // [s]
  double dt = 0.001;          // physics step [s]
  double log_interval = 0.005;  // [s]
  std::uint64_t seed = 0;

  ContactMode mode() const {
    if (contact == ContactKind::kFoldable) return Foldable{spring};
    return Rigid{restitution};
  }

  std::optional<Wall> active_wall() const {
    if (!wall_enabled) return std::nullopt;
    return wall;
  }

  long physics_steps() const { return std::lround(duration / dt); }
  long log_stride() const { return std::max(1L, std::lround(log_interval / dt)); }

  void validate() const {
    vehicle.validate();
    spring.validate();
    controller.validate();
    if (std::abs(spring.travel_limit - vehicle.arm_travel) > 1e-15) {
      throw ConfigError("spring travel limit must equal vehicle.arm_travel");
    }
    if (!(restitution >= 0.0 && restitution <= 1.0)) {
      throw ConfigError("contact.restitution must lie in [0, 1]");
    }
    wall.validate();
    if (!start.finite() || orthonormality_error(start.R) > 1e-9 ||
        std::abs(start.R.determinant() - 1.0) > 1e-9) {
      throw ConfigError("start state must be finite with R in SO(3)");
    }
    if (!is_finite(setpoint.position) || !std::isfinite(setpoint.yaw)) {
      throw ConfigError("setpoint must be finite");
    }
    if (!(duration > 0.0)) throw ConfigError("sim.duration must be > 0");
    if (!(dt > 0.0 && dt <= kMaxPhysicsStep)) throw ConfigError("sim.dt must be in (0, 0.01]");
    if (!(log_interval >= dt)) throw ConfigError("sim.log_interval must be >= sim.dt");
    if (std::abs(log_interval / dt - std::round(log_interval / dt)) > 1e-6) {
      throw ConfigError("sim.log_interval must be a multiple of sim.dt");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return value;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

inline Vec3 parse_vec3(const std::string& key, const std::string& text) {
  const auto v = parse_list(key, text);
  if (v.size() != 3) throw ConfigError("'" + key + "' expects 3 comma-separated values");
  return {v[0], v[1], v[2]};
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

}  // namespace detail

/// Applies one `key = value` assignment to `cfg`.
inline void apply_setting(ScenarioConfig& cfg, const std::string& raw_key,
                          const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_vec3;
  const std::string key = detail::trim(raw_key);

  static const std::map<std::string, std::function<void(ScenarioConfig&, const std::string&,
                                                        const std::string&)>>
      handlers = {
          {"vehicle.mass", [](auto& c, auto& k, auto& v) { c.vehicle.mass = parse_double(k, v); }},
          {"vehicle.inertia",
           [](auto& c, auto& k, auto& v) {
             const auto vals = detail::parse_list(k, v);
             if (vals.size() == 3) {
               c.vehicle.inertia = Vec3(vals[0], vals[1], vals[2]).asDiagonal();
             } else if (vals.size() == 9) {
               c.vehicle.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
                   vals.data());
             } else {
               throw ConfigError("'vehicle.inertia' expects 3 (diagonal) or 9 values");
             }
           }},
          {"vehicle.gravity",
           [](auto& c, auto& k, auto& v) { c.vehicle.gravity = parse_double(k, v); }},
          {"vehicle.arm_length",
           [](auto& c, auto& k, auto& v) { c.vehicle.arm_length = parse_double(k, v); }},
          {"vehicle.arm_travel",
           [](auto& c, auto& k, auto& v) {
             c.vehicle.arm_travel = parse_double(k, v);
             c.spring.travel_limit = c.vehicle.arm_travel;
           }},
          {"vehicle.contact_radius",
           [](auto& c, auto& k, auto& v) { c.vehicle.contact_radius = parse_double(k, v); }},
          {"spring.damping",
           [](auto& c, auto& k, auto& v) { c.spring.damping = parse_double(k, v); }},
          {"spring.stiffness",
           [](auto& c, auto& k, auto& v) { c.spring.stiffness = parse_double(k, v); }},
          {"spring.exit_threshold",
           [](auto& c, auto& k, auto& v) { c.spring.exit_threshold = parse_double(k, v); }},
          {"contact.mode",
           [](auto& c, auto& k, auto& v) {
             const std::string m = detail::trim(v);
             if (m == "foldable") {
               c.contact = ContactKind::kFoldable;
             } else if (m == "rigid") {
               c.contact = ContactKind::kRigid;
             } else {
               throw ConfigError("'" + k + "' must be 'foldable' or 'rigid'");
             }
           }},
          {"contact.restitution",
           [](auto& c, auto& k, auto& v) { c.restitution = parse_double(k, v); }},
          {"wall.enabled", [](auto& c, auto& k, auto& v) { c.wall_enabled = parse_bool(k, v); }},
          {"wall.normal",
           [](auto& c, auto& k, auto& v) {
             const Vec3 n = parse_vec3(k, v);
             if (!(n.norm() > 0.0)) throw ConfigError("'wall.normal' must be non-zero");
             c.wall.normal = n.normalized();
           }},
          {"wall.offset", [](auto& c, auto& k, auto& v) { c.wall.offset = parse_double(k, v); }},
          {"start.position", [](auto& c, auto& k, auto& v) { c.start.x = parse_vec3(k, v); }},
          {"start.velocity", [](auto& c, auto& k, auto& v) { c.start.v = parse_vec3(k, v); }},
          {"start.angular_rate",
           [](auto& c, auto& k, auto& v) { c.start.omega = parse_vec3(k, v); }},
          {"start.attitude",
           [](auto& c, auto& k, auto& v) {
             const auto q = detail::parse_list(k, v);
             if (q.size() != 4) throw ConfigError("'start.attitude' expects qw, qx, qy, qz");
             c.start.R = from_quaternion(q[0], q[1], q[2], q[3]);
           }},
          {"setpoint.position",
           [](auto& c, auto& k, auto& v) { c.setpoint.position = parse_vec3(k, v); }},
          {"setpoint.yaw", [](auto& c, auto& k, auto& v) { c.setpoint.yaw = parse_double(k, v); }},
          {"controller.kp", [](auto& c, auto& k, auto& v) { c.controller.kp = parse_double(k, v); }},
          {"controller.kv", [](auto& c, auto& k, auto& v) { c.controller.kv = parse_double(k, v); }},
          {"controller.kv_i",
           [](auto& c, auto& k, auto& v) { c.controller.kv_i = parse_double(k, v); }},
          {"controller.kv_d",
           [](auto& c, auto& k, auto& v) { c.controller.kv_d = parse_double(k, v); }},
          {"controller.kR", [](auto& c, auto& k, auto& v) { c.controller.kR = parse_double(k, v); }},
          {"controller.kOmega",
           [](auto& c, auto& k, auto& v) { c.controller.kOmega = parse_double(k, v); }},
          {"controller.gamma1",
           [](auto& c, auto& k, auto& v) { c.controller.gamma1 = parse_double(k, v); }},
          {"controller.gamma2",
           [](auto& c, auto& k, auto& v) { c.controller.gamma2 = parse_double(k, v); }},
          {"controller.attitude_rate",
           [](auto& c, auto& k, auto& v) { c.controller.attitude_rate = parse_double(k, v); }},
          {"controller.position_rate",
           [](auto& c, auto& k, auto& v) { c.controller.position_rate = parse_double(k, v); }},
          {"controller.max_thrust",
           [](auto& c, auto& k, auto& v) { c.controller.max_thrust = parse_double(k, v); }},
          {"controller.integral_limit",
           [](auto& c, auto& k, auto& v) { c.controller.integral_limit = parse_double(k, v); }},
          {"controller.differentiate_attitude_setpoint",
           [](auto& c, auto& k, auto& v) {
             c.controller.differentiate_attitude_setpoint = parse_bool(k, v);
           }},
          {"sim.duration", [](auto& c, auto& k, auto& v) { c.duration = parse_double(k, v); }},
          {"sim.dt", [](auto& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
          {"sim.log_interval",
           [](auto& c, auto& k, auto& v) { c.log_interval = parse_double(k, v); }},
          {"sim.seed",
           [](auto& c, auto& k, auto& v) {
             const double s = parse_double(k, v);
             if (s < 0.0 || s != std::floor(s)) throw ConfigError("'sim.seed' must be >= 0");
             c.seed = static_cast<std::uint64_t>(s);
           }},
      };

  const auto it = handlers.find(key);
  if (it == handlers.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

/// Parses `key = value` text on top of the defaults.
inline ScenarioConfig parse_config(std::istream& in, ScenarioConfig cfg = {}) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, content.substr(0, eq), content.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

/// Applies a `key=value` override (as given on the command line).
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace foldquad
