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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "foldquad/identification.hpp"

namespace foldquad {
namespace {

SpringParams truth() { return SpringParams{}; }  // (30, 500)

SpringParams start_guess() {
  SpringParams g;
  g.damping = 20.0;
  g.stiffness = 300.0;
  return g;
}

// 1 ms samples over 0.3 s of the closed form; noise sigma is a fraction of
// the peak deflection.
DisplacementTrace synthetic(double noise_fraction, unsigned seed, double v0 = 1.0) {
  const SpringParams p = truth();
  const double peak = analytic_response(v0, p, analytic_peak_time(p)).l;
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_fraction * peak);
  DisplacementTrace tr;
  for (int i = 0; i <= 300; ++i) {
    const double t = 1e-3 * i;
    tr.push_back(t, analytic_response(v0, p, t).l + (noise_fraction > 0.0 ? noise(rng) : 0.0));
  }
  return tr;
}

TEST(FreeResponse, AgreesWithUnderdampedClosedForm) {
  const SpringParams p = truth();
  for (double t : {0.0, 0.01, 0.05, 0.2}) {
    EXPECT_NEAR(free_response(1.3, p.damping, p.stiffness, t), analytic_response(1.3, p, t).l,
                1e-15);
  }
}

TEST(FreeResponse, ContinuousAcrossCriticalDamping) {
  const double k = 400.0;
  const double crit = 2.0 * std::sqrt(k);
  for (double t : {0.01, 0.05, 0.1}) {
    const double at = free_response(1.0, crit, k, t);
    EXPECT_NEAR(free_response(1.0, crit * (1 - 1e-9), k, t), at, 1e-10);
    EXPECT_NEAR(free_response(1.0, crit * (1 + 1e-9), k, t), at, 1e-10);
    EXPECT_NEAR(at, t * std::exp(-0.5 * crit * t), 1e-15);
  }
}

TEST(FitSpringParams, NoiseFreeRoundTrip) {
  const FitResult r = fit_spring_params(synthetic(0.0, 0), start_guess());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.params.damping, 30.0, 0.3);
  EXPECT_NEAR(r.params.stiffness, 500.0, 5.0);
  EXPECT_NEAR(r.impact_speed, 1.0, 1e-3);
  EXPECT_LT(r.residual_norm, 1e-8);
}

TEST(FitSpringParams, RobustToOnePercentNoise) {
  int within = 0;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const FitResult r = fit_spring_params(synthetic(0.01, seed), start_guess());
    if (std::abs(r.params.damping / 30.0 - 1.0) <= 0.1 &&
        std::abs(r.params.stiffness / 500.0 - 1.0) <= 0.1) {
      ++within;
    }
  }
  EXPECT_GE(within, 95);
}

TEST(FitSpringParams, RecoversOtherCoefficients) {
  SpringParams p;
  p.damping = 12.0;
  p.stiffness = 900.0;
  DisplacementTrace tr;
  for (int i = 0; i <= 200; ++i) tr.push_back(1e-3 * i, analytic_response(0.6, p, 1e-3 * i).l);
  const FitResult r = fit_spring_params(tr, start_guess());
  EXPECT_NEAR(r.params.damping, 12.0, 0.12);
  EXPECT_NEAR(r.params.stiffness, 900.0, 9.0);
}

TEST(FitSpringParams, HandlesTimeOffsetAndNonUniformSampling) {
  const SpringParams p = truth();
  DisplacementTrace tr;
  double t = 0.0;
  for (int i = 0; t < 0.3; ++i) {
    tr.push_back(5.0 + t, analytic_response(1.0, p, t).l);
    t += (i % 2 == 0) ? 7e-4 : 1.3e-3;
  }
  const FitResult r = fit_spring_params(tr, start_guess());
  EXPECT_NEAR(r.params.damping, 30.0, 0.3);
  EXPECT_NEAR(r.params.stiffness, 500.0, 5.0);
}

TEST(FitSpringParams, RejectsDegenerateTraces) {
  DisplacementTrace flat;
  for (int i = 0; i < 50; ++i) flat.push_back(1e-3 * i, 0.0);
  EXPECT_THROW(fit_spring_params(flat, start_guess()), std::invalid_argument);

  DisplacementTrace rising;
  for (int i = 0; i < 50; ++i) rising.push_back(1e-3 * i, 1e-3 * i);
  EXPECT_THROW(fit_spring_params(rising, start_guess()), std::invalid_argument);

  // Peak but no minimum after it before the end of the record.
  DisplacementTrace half;
  for (int i = 0; i <= 80; ++i) half.push_back(1e-3 * i, analytic_response(1.0, truth(), 1e-3 * i).l);
  EXPECT_THROW(fit_spring_params(half, start_guess()), std::invalid_argument);

  DisplacementTrace short_trace;
  for (int i = 0; i < 5; ++i) short_trace.push_back(1e-3 * i, std::sin(i));
  EXPECT_THROW(fit_spring_params(short_trace, start_guess()), std::invalid_argument);

  EXPECT_THROW(fit_spring_params(synthetic(0.0, 0), SpringParams{0.0, 500.0, 0.03, 0.002}),
               std::invalid_argument);
}

TEST(FitSpringParams, IterationCapReportsBestCandidate) {
  FitOptions opt;
  opt.max_iterations = 1;
  const FitResult r = fit_spring_params(synthetic(0.0, 0), start_guess(), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_GT(r.params.damping, 0.0);
  EXPECT_TRUE(std::isfinite(r.residual_norm));
}

}  // namespace
}  // namespace foldquad
