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

#include <gtest/gtest.h>

#include "foldquad/collision.hpp"

namespace foldquad {
namespace {

const VehicleParams kVehicle;
const Wall kWall;  // x = 0.3, free space on the -x side

BodyState at(double x, double vx) {
  BodyState s;
  s.x = Vec3(x, 0.0, -4.0);
  s.v = Vec3(vx, 0.0, 0.0);
  return s;
}

TEST(Wall, DistanceSign) {
  EXPECT_NEAR(kWall.distance(Vec3::Zero()), 0.3, 1e-15);
  EXPECT_NEAR(kWall.distance(Vec3(0.3, 5, -2)), 0.0, 1e-15);
  EXPECT_LT(kWall.distance(Vec3(0.5, 0, 0)), 0.0);
  const Wall w = Wall::facing(Vec3(0, 2, 0), 1.0);
  EXPECT_DOUBLE_EQ(w.normal.norm(), 1.0);
  EXPECT_THROW(Wall::facing(Vec3::Zero(), 0.0), std::invalid_argument);
  EXPECT_THROW((Wall{Vec3(2, 0, 0), 0.0}.validate()), std::invalid_argument);
}

TEST(DetectContact, FarAwayIsClear) {
  EXPECT_FALSE(detect_contact(at(0.3 - 1.0, 1.0), kWall, kVehicle));
}

TEST(DetectContact, TouchingWhileApproaching) {
  const BodyState s = at(0.3 - kVehicle.contact_radius, 1.4);
  const auto ev = detect_contact(s, kWall, kVehicle, 0.25);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->t_c, 0.25);
  EXPECT_EQ(ev->x_c, s.x);
  EXPECT_EQ(ev->v_c, s.v);
  EXPECT_EQ(ev->normal, Vec3::UnitX());
  EXPECT_GT(ev->normal_speed(), 0.0);
  EXPECT_NEAR(ev->penetration, 0.0, 1e-15);
}

TEST(DetectContact, TouchingWhileSeparatingIsIgnored) {
  EXPECT_FALSE(detect_contact(at(0.3 - kVehicle.contact_radius, -1.4), kWall, kVehicle));
  EXPECT_FALSE(detect_contact(at(0.3 - kVehicle.contact_radius, 0.0), kWall, kVehicle));
}

TEST(DetectContact, ObliqueWall) {
  const Wall w = Wall::facing(Vec3(-1, -1, 0), 0.0);
  BodyState s;
  s.x = 0.1 * Vec3(-1, -1, 0).normalized();
  s.v = Vec3(0.5, 0.2, 0.0);
  const auto ev = detect_contact(s, w, kVehicle);
  ASSERT_TRUE(ev);
  EXPECT_NEAR(ev->normal_speed(), 0.7 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ev->penetration, kVehicle.contact_radius - 0.1, 1e-15);
}

TEST(DetectContact, NoTunnelingAtOneMillisecond) {
  for (double v : {0.5, 1.0, 2.5, 5.0}) {
    BodyState s = at(0.0, v);
    s.x.x() = 0.3 - kVehicle.contact_radius - 0.0123;
    const ControlInput hover{kVehicle.mass * kVehicle.gravity, Vec3::Zero()};
    std::optional<CollisionEvent> ev;
    while (!(ev = detect_contact(s, kWall, kVehicle))) s = integrate_step(s, hover, kVehicle, 1e-3);
    EXPECT_LE(ev->penetration, v * 1e-3 + 1e-12);
    const BodyState out = resolve_rigid(s, *ev, 0.9);
    EXPECT_NEAR(kWall.distance(out.x), kVehicle.contact_radius, 1e-12);
  }
}

TEST(ResolveRigid, ReflectsNormalComponent) {
  const BodyState s = at(0.3 - kVehicle.contact_radius, 1.4);
  const auto ev = detect_contact(s, kWall, kVehicle);
  ASSERT_TRUE(ev);
  EXPECT_LT((resolve_rigid(s, *ev, 0.9).v - Vec3(-1.26, 0, 0)).norm(), 1e-15);
  EXPECT_EQ(resolve_rigid(s, *ev, 0.0).v, Vec3::Zero());
  EXPECT_EQ(resolve_rigid(s, *ev, 0.9).R, s.R);
}

TEST(ResolveRigid, ElasticObliqueKeepsSpeed) {
  BodyState s = at(0.3 - kVehicle.contact_radius, 1.0);
  s.v.y() = 0.5;
  const auto ev = detect_contact(s, kWall, kVehicle);
  ASSERT_TRUE(ev);
  const BodyState out = resolve_rigid(s, *ev, 1.0);
  EXPECT_LT((out.v - Vec3(-1.0, 0.5, 0.0)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(out.v.norm(), s.v.norm());
  EXPECT_THROW(resolve_rigid(s, *ev, 1.5), std::invalid_argument);
}

TEST(ContactConstrainedStep, ExitSpeedEqualsBareArmModel) {
  // Zero thrust: gravity is the only force and it has no wall-normal part.
  const SpringParams sp;
  for (double v : {0.5, 1.4, 2.2}) {
    BodyState s = at(0.3 - kVehicle.contact_radius, v);
    s.v.y() = 0.3;
    const auto ev = detect_contact(s, kWall, kVehicle);
    ASSERT_TRUE(ev);
    ContactPhase phase = ContactPhase::from_impact(ev->normal_speed());
    bool exited = false;
    double prev_n = kWall.distance(s.x);
    bool moved_in_while_compressing = false;
    while (!exited) {
      const ConstrainedStep step =
          contact_constrained_step(s, phase, kWall, ControlInput{}, kVehicle, sp, 1e-3);
      if (!step.exited && step.phase.arm.l_dot > 0.0 && kWall.distance(step.state.x) < prev_n) {
        moved_in_while_compressing = true;
      }
      prev_n = kWall.distance(step.state.x);
      s = step.state;
      phase = step.phase;
      exited = step.exited;
    }
    const ContactResult bare = simulate_contact(v, sp, 1e-3);
    EXPECT_NEAR(-phase.arm.l_dot, bare.rebound_speed, 1e-6);
    EXPECT_NEAR(kWall.normal.dot(s.v), bare.rebound_speed, 1e-6);
    EXPECT_NEAR(s.v.y(), 0.3, 1e-12);  // tangential, force-free
    EXPECT_TRUE(moved_in_while_compressing);
  }
}

TEST(ContactConstrainedStep, CentroidSlavedToArm) {
  const SpringParams sp;
  BodyState s = at(0.3 - kVehicle.contact_radius, 1.4);
  ContactPhase phase = ContactPhase::from_impact(1.4);
  for (int i = 0; i < 20; ++i) {
    const ControlInput hover{kVehicle.mass * kVehicle.gravity, Vec3::Zero()};
    const ConstrainedStep step = contact_constrained_step(s, phase, kWall, hover, kVehicle, sp, 1e-3);
    ASSERT_FALSE(step.exited);
    EXPECT_NEAR(kWall.distance(step.state.x), kVehicle.contact_radius - step.phase.arm.l, 1e-12);
    EXPECT_NEAR(-kWall.normal.dot(step.state.v), step.phase.arm.l_dot, 1e-12);
    s = step.state;
    phase = step.phase;
  }
}

TEST(ContactConstrainedStep, ArmEnergyMonotoneWithoutNormalForce) {
  const SpringParams sp;
  BodyState s = at(0.3 - kVehicle.contact_radius, 1.0);
  ContactPhase phase = ContactPhase::from_impact(1.0);
  double e_prev = spring_energy(phase.arm, sp);
  bool exited = false;
  while (!exited) {
    const ConstrainedStep step =
        contact_constrained_step(s, phase, kWall, ControlInput{}, kVehicle, sp, 1e-3);
    const double e = spring_energy(step.phase.arm, sp);
    EXPECT_LE(e, e_prev * (1.0 + 1e-9));
    e_prev = e;
    s = step.state;
    phase = step.phase;
    exited = step.exited;
  }
}

TEST(Contact, FoldableReboundBelowAnyStiffRigidFrame) {
  for (double v : {0.5, 1.0, 1.4, 2.0, 2.5}) {
    const double fold = simulate_contact(v, SpringParams{}, 1e-3).rebound_speed;
    const BodyState s = at(0.3 - kVehicle.contact_radius, v);
    const auto ev = detect_contact(s, kWall, kVehicle);
    for (double e : {0.3, 0.6, 0.9, 1.0}) {
      EXPECT_LT(fold, -resolve_rigid(s, *ev, e).v.x()) << "v=" << v << " e=" << e;
    }
  }
}

TEST(ImpactForceEstimate, Examples) {
  EXPECT_EQ(impact_force_estimate(1.0, 5.0, 0.05), 100.0);
  EXPECT_EQ(impact_force_estimate(1.112, 0.0, 0.3), 0.0);
  const ContactResult r = simulate_contact(1.4, SpringParams{}, 1e-3);
  EXPECT_DOUBLE_EQ(impact_force_estimate(1.112, 1.4, r.duration), 1.112 * 1.4 / r.duration);
  EXPECT_THROW(impact_force_estimate(1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(impact_force_estimate(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST(ContactMode, Variant) {
  EXPECT_TRUE(is_foldable(ContactMode{Foldable{}}));
  EXPECT_FALSE(is_foldable(ContactMode{Rigid{}}));
  EXPECT_EQ(std::get<Rigid>(ContactMode{Rigid{}}).restitution, 0.9);
}

}  // namespace
}  // namespace foldquad
