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

// foldquad command-line driver.
//
//   foldquad run <config> [--set key=value]... [--log run.csv]
//   foldquad compare <config> [--out dir]
//   foldquad sweep <config> --speeds 1,1.5,2,2.5
//   foldquad fit <trace.csv>
//   foldquad metrics <log.csv> [--config cfg]
//
// Results go to stdout as JSON. Exit codes: 0 ok, 1 usage, 2 bad config or
// input, 3 simulation blow-up, 4 fit did not converge.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "foldquad/harness/config.hpp"
#include "foldquad/harness/experiments.hpp"
#include "foldquad/harness/log_io.hpp"
#include "foldquad/harness/metrics.hpp"
#include "foldquad/harness/simulation.hpp"
#include "foldquad/identification.hpp"

namespace {

using foldquad::ScenarioConfig;
using json = nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitNoFit = 4;

ScenarioConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  ScenarioConfig cfg = foldquad::load_config(path);
  for (const auto& o : overrides) foldquad::apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int report_abort(const foldquad::SimLog& log, const char* label) {
  if (!log.aborted) return 0;
  std::cerr << "foldquad: " << label << " run aborted: " << log.diagnostic << '\n';
  return kExitBlowUp;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-resilient foldable quadrotor simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Scenario file (key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "Override a setting, key=value (repeatable)");
  };

  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  add_config(run);
  std::string log_path;
  run->add_option("--log", log_path, "Write the SimLog CSV here");

  auto* compare = app.add_subcommand("compare", "Run foldable and rigid side by side");
  add_config(compare);
  std::string out_dir;
  compare->add_option("--out", out_dir, "Directory for per-mode and per-axis CSVs");

  auto* sweep = app.add_subcommand("sweep", "Collision-speed sweep, both frames");
  add_config(sweep);
  std::vector<double> speeds{1.0, 1.5, 2.0, 2.5};
  sweep->add_option("--speeds", speeds, "Collision speeds [m/s]")->delimiter(',');

  auto* fit = app.add_subcommand("fit", "Identify arm spring-damper coefficients");
  std::string trace_path;
  fit->add_option("trace", trace_path, "Two-column t,l CSV")->required()->check(CLI::ExistingFile);
  double guess_b = 20.0;
  double guess_k = 300.0;
  fit->add_option("--damping", guess_b, "Initial damping guess [1/s]");
  fit->add_option("--stiffness", guess_k, "Initial stiffness guess [1/s^2]");

  auto* metrics = app.add_subcommand("metrics", "Compute metrics from a SimLog CSV");
  std::string metrics_log;
  metrics->add_option("log", metrics_log, "SimLog CSV")->required()->check(CLI::ExistingFile);
  std::string metrics_cfg;
  metrics->add_option("--config", metrics_cfg, "Scenario file for mass and wall normal")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ScenarioConfig cfg = load(config_path, overrides);
      const foldquad::SimLog log = foldquad::run_scenario(cfg);
      if (!log_path.empty()) {
        std::ofstream f(log_path);
        if (!f) throw std::runtime_error("cannot write " + log_path);
        foldquad::write_log_csv(log, f);
      }
      print(foldquad::to_json(foldquad::compute_metrics(log, cfg)));
      return report_abort(log, "scenario");
    }

    if (*compare) {
      const ScenarioConfig cfg = load(config_path, overrides);
      const foldquad::ComparisonReport report = foldquad::compare_modes(cfg);
      if (!out_dir.empty()) foldquad::write_comparison(report, out_dir);
      print(foldquad::to_json(report));
      if (int rc = report_abort(report.foldable.log, "foldable")) return rc;
      return report_abort(report.rigid.log, "rigid");
    }

    if (*sweep) {
      const ScenarioConfig cfg = load(config_path, overrides);
      const auto rows = foldquad::sweep_velocities(cfg, speeds);
      print(foldquad::to_json(rows));
      for (const auto& r : rows) {
        if (r.aborted) {
          std::cerr << "foldquad: sweep run at " << r.target_speed << " m/s ("
                    << foldquad::to_string(r.mode) << ") aborted\n";
          return kExitBlowUp;
        }
      }
      return 0;
    }

    if (*fit) {
      std::ifstream f(trace_path);
      const foldquad::DisplacementTrace trace = foldquad::read_trace_csv(f);
      foldquad::SpringParams guess;
      guess.damping = guess_b;
      guess.stiffness = guess_k;
      const foldquad::FitResult r = foldquad::fit_spring_params(trace, guess);
      json j;
      j["damping"] = r.params.damping;
      j["stiffness"] = r.params.stiffness;
      j["impact_speed"] = r.impact_speed;
      j["residual_norm"] = r.residual_norm;
      j["iterations"] = r.iterations;
      j["converged"] = r.converged;
      print(j);
      return r.converged ? 0 : kExitNoFit;
    }

    if (*metrics) {
      std::ifstream f(metrics_log);
      const foldquad::SimLog log = foldquad::read_log_csv(f);
      foldquad::MetricsContext ctx;
      if (!metrics_cfg.empty()) ctx = foldquad::MetricsContext::from(load(metrics_cfg, {}));
      print(foldquad::to_json(foldquad::compute_metrics(log, ctx)));
      return 0;
    }
  } catch (const foldquad::SimulationError& e) {
    std::cerr << "foldquad: " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "foldquad: " << e.what() << '\n';
    return kExitInput;
  }
  return 1;
}
