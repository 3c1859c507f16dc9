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

#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Core>

#include "ambc/camera.hpp"

namespace ambc {

// Local tangent plane in the owning camera's frame: n^T X + offset = 0.
// Valid hypotheses have a unit, camera-facing normal (n . ray < 0) and a
// positive offset for planes in front of the camera.
struct PlaneHypothesis {
  Eigen::Vector3d normal = Eigen::Vector3d(0.0, 0.0, -1.0);
  double offset = 1.0;
};

struct PixelRay {
  int x = 0;
  int y = 0;
  Eigen::Vector3d direction;  // K^-1 [x, y, 1]^T, z == 1
};

PixelRay MakeRay(const CameraView& camera, int x, int y);

// Depth (camera z) at which the ray meets the plane. Throws GeometryError
// when the ray is parallel to the plane or the intersection is not in front.
double DepthFromPlane(const PlaneHypothesis& plane, const PixelRay& ray);
// Non-throwing variant for inner loops.
std::optional<double> TryDepthFromPlane(const PlaneHypothesis& plane,
                                        const Eigen::Vector3d& ray);

// Plane through depth * ray with the given normal.
PlaneHypothesis PlaneFromDepth(const Eigen::Vector3d& normal, double depth,
                               const Eigen::Vector3d& ray);

struct RelativePose {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
};

// Pose of `to` relative to `from`: X_to = R X_from + t.
RelativePose RelativePoseBetween(const CameraView& from, const CameraView& to);

// H = K_src (R - t n^T / D) K_ref^-1, scaled so that H(2,2) == 1.
Eigen::Matrix3d PlaneHomography(const PlaneHypothesis& plane, const CameraView& ref,
                                const CameraView& src);

inline Eigen::Vector2d ApplyHomography(const Eigen::Matrix3d& h, double x, double y) {
  const Eigen::Vector3d p = h * Eigen::Vector3d(x, y, 1.0);
  return {p.x() / p.z(), p.y() / p.z()};
}

// Uniform over the hemisphere with negative z (Marsaglia's disk method).
template <typename Rng>
Eigen::Vector3d SampleHemisphereNormal(Rng& rng) {
  while (true) {
    const double a = 2.0 * rng.Uniform01() - 1.0;
    const double b = 2.0 * rng.Uniform01() - 1.0;
    const double s = a * a + b * b;
    if (s >= 1.0) continue;
    const double root = 2.0 * std::sqrt(1.0 - s);
    return {a * root, b * root, -std::abs(1.0 - 2.0 * s)};
  }
}

struct TransformedHypothesis {
  Eigen::Vector2d pixel;   // real-valued pixel in the target view
  double depth = 0.0;      // camera z in the target view
  Eigen::Vector3d normal;  // target camera frame
  bool in_bounds = false;  // rounded pixel lies inside the target image
};

// Backprojects (x, y) onto the plane and re-expresses point and normal in
// `to`. Throws GeometryError::kBehindCamera when the point is behind `to`.
TransformedHypothesis TransformHypothesis(const PlaneHypothesis& plane, int x, int y,
                                          const CameraView& from, const CameraView& to);

// The same plane expressed in another camera's frame.
PlaneHypothesis TransformPlane(const PlaneHypothesis& plane, const RelativePose& pose);

inline Eigen::Vector2i RoundPixel(const Eigen::Vector2d& p) {
  return {static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y()))};
}

double AngleDegrees(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

}  // namespace ambc
