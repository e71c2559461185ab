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

// Scalar outcomes of a run.
//
// Contact metrics come from the episodes recorded by the simulator when they
// are available (physics-step resolution). A log read back from CSV only has
// the per-row contact flag; episodes are then rebuilt from flag rises and
// falls at log-interval resolution:
//   v_c      approach speed in the last row before the rise
//   v_rb     separation speed in the first row after the fall
//   duration t(fall row) - t(rise row)

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "foldquad/collision.hpp"
#include "foldquad/harness/config.hpp"
#include "foldquad/harness/simulation.hpp"

namespace foldquad {

inline constexpr double kSettlingBand = 0.05;  // [m]

struct Metrics {
  std::optional<double> t_c;
  std::optional<double> v_c;
  std::optional<double> v_rb;
  std::optional<double> contact_duration;
  std::optional<double> peak_l;
  std::optional<double> overshoot;
  std::optional<double> settling_time;  // from first contact (or t = 0)
  std::optional<double> altitude_deviation;
  std::optional<double> mean_impact_force;
  int contact_count = 0;
  int re_collision_count = 0;
};

/// What compute_metrics needs beyond the log itself.
struct MetricsContext {
  double mass = VehicleParams{}.mass;
  std::optional<Vec3> wall_normal;  // outward; inferred from the approach if absent

  static MetricsContext from(const ScenarioConfig& cfg) {
    MetricsContext ctx;
    ctx.mass = cfg.vehicle.mass;
    if (cfg.wall_enabled) ctx.wall_normal = cfg.wall.normal;
    return ctx;
  }
};

namespace detail {

inline void validate_log(const SimLog& log) {
  if (log.rows.empty()) throw std::invalid_argument("metrics: empty log");
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const LogRow& r = log.rows[i];
    if (!std::isfinite(r.t) || !is_finite(r.x) || !is_finite(r.v) || !is_finite(r.x_d)) {
      throw std::invalid_argument("metrics: non-finite log row");
    }
    if (i > 0 && !(r.t > log.rows[i - 1].t)) {
      throw std::invalid_argument("metrics: log times must be strictly increasing");
    }
  }
}

inline std::vector<ContactEpisode> episodes_from_flags(const SimLog& log,
                                                       const std::optional<Vec3>& outward) {
  std::vector<ContactEpisode> eps;
  const auto& rows = log.rows;
  std::size_t i = 0;
  while (i < rows.size()) {
    if (!rows[i].contact) {
      ++i;
      continue;
    }
    const std::size_t rise = i;
    while (i < rows.size() && rows[i].contact) ++i;
    const std::size_t before = rise > 0 ? rise - 1 : rise;

    ContactEpisode ep;
    ep.t_start = rows[rise].t;
    ep.x_c = rows[before].x;
    ep.v_c = rows[before].v;
    Vec3 inward;
    if (outward) {
      inward = -*outward;
    } else {
      const Vec3 horizontal(ep.v_c.x(), ep.v_c.y(), 0.0);
      inward = horizontal.norm() > 0.0 ? Vec3(horizontal.normalized()) : Vec3::UnitX();
    }
    ep.normal = inward;
    ep.approach_speed = std::max(0.0, ep.v_c.dot(inward));
    for (std::size_t k = rise; k < i; ++k) ep.peak_l = std::max(ep.peak_l, rows[k].l);
    if (i < rows.size()) {
      ep.t_end = rows[i].t;
      ep.rebound_speed = std::max(0.0, -rows[i].v.dot(inward));
    } else {
      ep.t_end = ep.t_start;  // still in contact at the end of the log
      ep.rebound_speed = std::numeric_limits<double>::quiet_NaN();
    }
    eps.push_back(ep);
  }
  return eps;
}

}  // namespace detail

inline Metrics compute_metrics(const SimLog& log, const MetricsContext& ctx) {
  detail::validate_log(log);
  const auto& rows = log.rows;
  const std::vector<ContactEpisode> eps =
      log.episodes.empty() ? detail::episodes_from_flags(log, ctx.wall_normal) : log.episodes;

  Metrics m;
  m.contact_count = static_cast<int>(eps.size());
  m.re_collision_count = std::max(0, m.contact_count - 1);

  double t_ref = rows.front().t;
  if (!eps.empty()) {
    const ContactEpisode& first = eps.front();
    t_ref = first.t_start;
    m.t_c = first.t_start;
    m.v_c = first.approach_speed;
    m.peak_l = first.peak_l;
    if (std::isfinite(first.rebound_speed) && first.t_end > first.t_start) {
      m.v_rb = std::max(0.0, first.rebound_speed);
      m.contact_duration = first.duration();
      m.mean_impact_force =
          impact_force_estimate(ctx.mass, *m.v_c + *m.v_rb, *m.contact_duration);
    }

    const Vec3 outward = -first.normal;
    double overshoot = 0.0;
    double altitude = 0.0;
    for (const LogRow& r : rows) {
      if (r.t <= first.t_start) continue;  // that row predates the recovery setpoint
      overshoot = std::max(overshoot, outward.dot(r.x - r.x_d));
      altitude = std::max(altitude, std::abs(r.x.z() - first.x_c.z()));
    }
    m.overshoot = overshoot;
    m.altitude_deviation = altitude;
  }

  // Settling: first time after t_ref from which the position stays in band.
  std::optional<std::size_t> last_outside;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].t < t_ref) continue;
    if ((rows[i].x - rows[i].x_d).norm() >= kSettlingBand) last_outside = i;
  }
  if (!last_outside) {
    m.settling_time = 0.0;
  } else if (*last_outside + 1 < rows.size()) {
    m.settling_time = rows[*last_outside + 1].t - t_ref;
  }
  return m;
}

inline Metrics compute_metrics(const SimLog& log, const ScenarioConfig& cfg) {
  return compute_metrics(log, MetricsContext::from(cfg));
}

inline nlohmann::ordered_json to_json(const Metrics& m) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v && std::isfinite(*v)) return *v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["t_c"] = opt(m.t_c);
  j["v_c"] = opt(m.v_c);
  j["v_rb"] = opt(m.v_rb);
  j["contact_duration"] = opt(m.contact_duration);
  j["peak_l"] = opt(m.peak_l);
  j["overshoot"] = opt(m.overshoot);
  j["settling_time"] = opt(m.settling_time);
  j["altitude_deviation"] = opt(m.altitude_deviation);
  j["mean_impact_force"] = opt(m.mean_impact_force);
  j["contact_count"] = m.contact_count;
  j["re_collision_count"] = m.re_collision_count;
  return j;
}

}  // namespace foldquad
