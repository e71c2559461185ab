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

// Rotation-group helpers: hat/vee maps, projection back onto SO(3) and
// quaternion conversion for logging.

#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace foldquad {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Inertial third axis. Points down, so altitude is negative.
inline const Vec3 kE3 = Vec3::UnitZ();

inline constexpr double kSkewTolerance = 1e-9;

inline bool is_finite(const Vec3& v) { return v.allFinite(); }
inline bool is_finite(const Mat3& m) { return m.allFinite(); }

/// Cross-product matrix: hat(v) * w == v.cross(w).
inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

/// Inverse of hat(). Throws std::invalid_argument if `m` is not skew
/// within kSkewTolerance.
inline Vec3 vee(const Mat3& m, double tolerance = kSkewTolerance) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > tolerance) {
    throw std::invalid_argument("vee: matrix is not skew-symmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

/// Nearest rotation in the Frobenius sense (polar factor via SVD).
/// Rejects det <= 0, which indicates a corrupted attitude.
inline Mat3 renormalize_rotation(const Mat3& r) {
  if (!is_finite(r)) {
    throw std::invalid_argument("renormalize_rotation: non-finite input");
  }
  if (!(r.determinant() > 0.0)) {
    throw std::invalid_argument("renormalize_rotation: det(R) <= 0");
  }
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

inline double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

inline Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

/// Body->inertial rotation with the given yaw about the (down) third axis.
inline Mat3 yaw_rotation(double yaw) { return axis_angle(kE3, yaw); }

/// Scalar-first quaternion (w, x, y, z) with w >= 0.
inline Eigen::Vector4d to_quaternion(const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return {q.w(), q.x(), q.y(), q.z()};
}

inline Mat3 from_quaternion(double w, double x, double y, double z) {
  return Eigen::Quaterniond(w, x, y, z).normalized().toRotationMatrix();
}

}  // namespace foldquad
