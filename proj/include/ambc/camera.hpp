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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "ambc/image.hpp"

namespace ambc {

// Calibrated pinhole view. The pose maps world to camera coordinates:
// X_cam = rotation * X_world + translation.
struct CameraView {
  std::string name;
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Image<float> image;  // grayscale in [0, 1]
  Image<Rgb> color;    // optional; used only for point colors
  double depth_min = 0.0;
  double depth_max = 0.0;

  int width() const { return image.width(); }
  int height() const { return image.height(); }
  double fx() const { return intrinsics(0, 0); }
  double fy() const { return intrinsics(1, 1); }
  double cx() const { return intrinsics(0, 2); }
  double cy() const { return intrinsics(1, 2); }

  Eigen::Vector3d Center() const { return -rotation.transpose() * translation; }

  // K^-1 [x, y, 1]^T; the z component is exactly 1.
  Eigen::Vector3d Ray(double x, double y) const {
    const double yn = (y - cy()) / fy();
    const double xn = (x - cx() - intrinsics(0, 1) * yn) / fx();
    return {xn, yn, 1.0};
  }

  Eigen::Vector3d WorldToCamera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }
  Eigen::Vector3d CameraToWorld(const Eigen::Vector3d& cam) const {
    return rotation.transpose() * (cam - translation);
  }

  // Pixel coordinates of a camera-frame point; caller checks z > 0.
  Eigen::Vector2d ProjectCamera(const Eigen::Vector3d& cam) const {
    const Eigen::Vector3d p = intrinsics * cam;
    return {p.x() / p.z(), p.y() / p.z()};
  }

  Eigen::Vector3d Backproject(double x, double y, double depth) const {
    return CameraToWorld(depth * Ray(x, y));
  }

  Rgb ColorAt(int x, int y) const {
    if (!color.empty()) return color(x, y);
    const double v = std::round(std::clamp(image(x, y), 0.0f, 1.0f) * 255.0);
    const auto g = static_cast<std::uint8_t>(v);
    return {g, g, g};
  }

  // Throws ValidationError when an invariant is violated.
  void Validate() const;
};

}  // namespace ambc
