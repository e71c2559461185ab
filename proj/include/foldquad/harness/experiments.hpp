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

// Foldable-vs-rigid comparisons and collision-speed sweeps.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include "json.hpp"

#include "foldquad/harness/config.hpp"
#include "foldquad/harness/log_io.hpp"
#include "foldquad/harness/metrics.hpp"
#include "foldquad/harness/simulation.hpp"

namespace foldquad {

struct ModeRun {
  ContactKind mode = ContactKind::kFoldable;
  SimLog log;
  Metrics metrics;
};

struct ComparisonReport {
  ModeRun foldable;
  ModeRun rigid;
};

inline ModeRun run_mode(ScenarioConfig cfg, ContactKind mode) {
  cfg.contact = mode;
  ModeRun run;
  run.mode = mode;
  run.log = run_scenario(cfg);
  run.metrics = compute_metrics(run.log, cfg);
  return run;
}

/// Runs the identical scenario with the foldable and the rigid frame.
inline ComparisonReport compare_modes(const ScenarioConfig& base) {
  base.validate();
  auto rigid = std::async(std::launch::async, run_mode, base, ContactKind::kRigid);
  ComparisonReport report;
  report.foldable = run_mode(base, ContactKind::kFoldable);
  report.rigid = rigid.get();
  return report;
}

inline nlohmann::ordered_json to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["foldable"] = to_json(r.foldable.metrics);
  j["rigid"] = to_json(r.rigid.metrics);
  return j;
}

/// Writes foldable.csv, rigid.csv, one side-by-side file per axis
/// (axis1.csv .. axis3.csv) and report.json into `dir`.
inline void write_comparison(const ComparisonReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "foldable.csv");
    write_log_csv(r.foldable.log, f);
  }
  {
    std::ofstream f(dir / "rigid.csv");
    write_log_csv(r.rigid.log, f);
  }
  const auto& a = r.foldable.log.rows;
  const auto& b = r.rigid.log.rows;
  const std::size_t n = std::min(a.size(), b.size());
  char buf[256];
  for (int axis = 0; axis < 3; ++axis) {
    std::ofstream f(dir / ("axis" + std::to_string(axis + 1) + ".csv"));
    f << "t,foldable_x,foldable_v,foldable_xd,rigid_x,rigid_v,rigid_xd\n";
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", a[i].t,
                    a[i].x(axis), a[i].v(axis), a[i].x_d(axis), b[i].x(axis), b[i].v(axis),
                    b[i].x_d(axis));
      f << buf;
    }
  }
  std::ofstream f(dir / "report.json");
  f << to_json(r).dump(2) << '\n';
}

struct ApproachSetup {
  ScenarioConfig cfg;
  double start_distance = 0.0;  // envelope-to-wall gap at the start [m]
  double target_depth = 0.0;    // approach target behind the wall [m]
  double achieved_speed = 0.0;
  bool reached = false;
};

inline constexpr double kApproachSpeedTolerance = 0.05;  // [m/s]
inline constexpr double kApproachRunUp = 2.0;             // start gap per unit speed [s]

/// Starts the vehicle at rest kApproachRunUp * speed in front of the wall and
/// bisects how far behind the wall the approach target sits until the
/// wall-normal collision speed is within kApproachSpeedTolerance of `speed`.
/// With a long run-up the vehicle cruises in and is already braking toward
/// the shallow target at impact, as in a pilot-flown approach.
inline ApproachSetup calibrate_approach(const ScenarioConfig& base, double speed) {
  if (!(speed > 0.0)) throw std::invalid_argument("calibrate_approach: speed must be > 0");
  if (!base.wall_enabled) throw std::invalid_argument("calibrate_approach: wall is disabled");
  const Wall& wall = base.wall;
  const Vec3 outward = wall.normal;

  // Foot of the start position on the wall, kept at the base start altitude.
  const Vec3 foot = base.start.x - wall.distance(base.start.x) * outward;
  const double gap = kApproachRunUp * speed;

  auto configure = [&](double depth) {
    ScenarioConfig cfg = base;
    cfg.start = BodyState{};
    cfg.start.x = foot + (base.vehicle.contact_radius + gap) * outward;
    cfg.start.R = yaw_rotation(base.setpoint.yaw);
    cfg.setpoint.position = foot - depth * outward;
    return cfg;
  };
  struct Probe {
    double speed = 0.0;
    double t_c = 0.0;
  };
  auto probe = [&](double depth) {
    ScenarioConfig cfg = configure(depth);
    cfg.duration = 60.0;
    const SimLog log = run_scenario(cfg, RunOptions{.stop_at_first_contact = true});
    if (log.episodes.empty()) return Probe{};
    return Probe{log.episodes.front().approach_speed, log.episodes.front().t_start};
  };

  double lo = 0.0;
  double hi = 0.25;
  while (probe(hi).speed < speed && hi < 64.0) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = probe(mid).speed;
    if (std::abs(v - speed) <= 0.25 * kApproachSpeedTolerance) {
      lo = hi = mid;
      break;
    }
    (v < speed ? lo : hi) = mid;
  }

  ApproachSetup out;
  out.start_distance = gap;
  out.target_depth = 0.5 * (lo + hi);
  const Probe hit = probe(out.target_depth);
  out.achieved_speed = hit.speed;
  out.reached = std::abs(hit.speed - speed) <= kApproachSpeedTolerance;
  out.cfg = configure(out.target_depth);
  // The configured duration is the post-contact observation window.
  out.cfg.duration = base.duration + std::ceil(hit.t_c);
  return out;
}

struct SweepRow {
  double target_speed = 0.0;
  ContactKind mode = ContactKind::kFoldable;
  double start_distance = 0.0;
  double target_depth = 0.0;
  bool reached = false;
  bool aborted = false;
  Metrics metrics;
};

/// One row per (speed, mode), ordered by speed then foldable before rigid.
inline std::vector<SweepRow> sweep_velocities(const ScenarioConfig& base,
                                              const std::vector<double>& speeds) {
  base.validate();
  for (double s : speeds) {
    if (!(s > 0.0)) throw std::invalid_argument("sweep: speeds must be positive");
  }
  std::vector<std::future<std::vector<SweepRow>>> jobs;
  for (double speed : speeds) {
    jobs.push_back(std::async(std::launch::async, [&base, speed] {
      const ApproachSetup setup = calibrate_approach(base, speed);
      std::vector<SweepRow> rows;
      for (ContactKind mode : {ContactKind::kFoldable, ContactKind::kRigid}) {
        SweepRow row;
        row.target_speed = speed;
        row.mode = mode;
        row.start_distance = setup.start_distance;
        row.target_depth = setup.target_depth;
        row.reached = setup.reached;
        const ModeRun run = run_mode(setup.cfg, mode);
        row.aborted = run.log.aborted;
        row.metrics = run.metrics;
        rows.push_back(row);
      }
      return rows;
    }));
  }
  std::vector<SweepRow> table;
  for (auto& job : jobs) {
    for (SweepRow& row : job.get()) table.push_back(std::move(row));
  }
  return table;
}

inline nlohmann::ordered_json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json row;
    row["speed"] = r.target_speed;
    row["mode"] = to_string(r.mode);
    row["start_distance"] = r.start_distance;
    row["target_depth"] = r.target_depth;
    row["reached"] = r.reached;
    row["aborted"] = r.aborted;
    row["metrics"] = to_json(r.metrics);
    j.push_back(row);
  }
  return j;
}

}  // namespace foldquad
