// Copyright 2026 The ambc-mvs Authors
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

#include "ambc/geometry.hpp"

#include <algorithm>
#include <numbers>

#include <Eigen/LU>

#include "ambc/errors.hpp"

namespace ambc {

constexpr double kParallelEpsilon = 1e-12;

PixelRay MakeRay(const CameraView& camera, int x, int y) {
  return {x, y, camera.Ray(x, y)};
}

std::optional<double> TryDepthFromPlane(const PlaneHypothesis& plane,
                                        const Eigen::Vector3d& ray) {
  const double denom = plane.normal.dot(ray);
  if (std::abs(denom) < kParallelEpsilon) return std::nullopt;
  const double depth = -plane.offset / denom;
  if (!(depth > 0.0) || !std::isfinite(depth)) return std::nullopt;
  return depth;
}

double DepthFromPlane(const PlaneHypothesis& plane, const PixelRay& ray) {
  const double denom = plane.normal.dot(ray.direction);
  if (std::abs(denom) < kParallelEpsilon) {
    throw GeometryError(GeometryError::Kind::kDegeneratePlane,
                        "viewing ray is parallel to the plane");
  }
  const double depth = -plane.offset / denom;
  if (!(depth > 0.0)) {
    throw GeometryError(GeometryError::Kind::kBehindCamera,
                        "plane intersection lies behind the camera");
  }
  return depth;
}

PlaneHypothesis PlaneFromDepth(const Eigen::Vector3d& normal, double depth,
                               const Eigen::Vector3d& ray) {
  return {normal, -depth * normal.dot(ray)};
}

RelativePose RelativePoseBetween(const CameraView& from, const CameraView& to) {
  const Eigen::Matrix3d r = to.rotation * from.rotation.transpose();
  return {r, to.translation - r * from.translation};
}

Eigen::Matrix3d PlaneHomography(const PlaneHypothesis& plane, const CameraView& ref,
                                const CameraView& src) {
  if (std::abs(plane.offset) < kParallelEpsilon) {
    throw GeometryError(GeometryError::Kind::kDegeneratePlane,
                        "plane passes through the reference center");
  }
  const RelativePose pose = RelativePoseBetween(ref, src);
  Eigen::Matrix3d h = src.intrinsics *
                      (pose.rotation - pose.translation * plane.normal.transpose() / plane.offset) *
                      ref.intrinsics.inverse();
  if (std::abs(h(2, 2)) > 1e-15) h /= h(2, 2);
  return h;
}

TransformedHypothesis TransformHypothesis(const PlaneHypothesis& plane, int x, int y,
                                          const CameraView& from, const CameraView& to) {
  const double depth = DepthFromPlane(plane, MakeRay(from, x, y));
  const RelativePose pose = RelativePoseBetween(from, to);
  const Eigen::Vector3d point = pose.rotation * (depth * from.Ray(x, y)) + pose.translation;
  if (!(point.z() > 0.0)) {
    throw GeometryError(GeometryError::Kind::kBehindCamera,
                        "point lies behind the target camera");
  }
  TransformedHypothesis out;
  out.pixel = to.ProjectCamera(point);
  out.depth = point.z();
  out.normal = pose.rotation * plane.normal;
  const Eigen::Vector2i rounded = RoundPixel(out.pixel);
  out.in_bounds = rounded.x() >= 0 && rounded.y() >= 0 && rounded.x() < to.width() &&
                  rounded.y() < to.height();
  return out;
}

PlaneHypothesis TransformPlane(const PlaneHypothesis& plane, const RelativePose& pose) {
  const Eigen::Vector3d normal = pose.rotation * plane.normal;
  return {normal, plane.offset - normal.dot(pose.translation)};
}

double AngleDegrees(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace ambc
