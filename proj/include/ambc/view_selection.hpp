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

#include <span>

#include <Eigen/Core>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/image.hpp"
#include "ambc/matching.hpp"

namespace ambc {

struct ViewSelectionConfig {
  double triangulation_min_deg = 10.0;
  double triangulation_max_deg = 30.0;
  double incident_max_deg = 80.0;
  // Incident-angle and visibility filtering; triangulation always applies.
  bool pixelwise = true;

  void Validate() const;
};

// Per-pixel bitmask of selected source views (bit j <=> view j).
class SourceViewSets {
 public:
  SourceViewSets() = default;
  SourceViewSets(int width, int height, ViewMask fill) : masks_(width, height, fill) {}

  int width() const { return masks_.width(); }
  int height() const { return masks_.height(); }
  ViewMask at(int x, int y) const { return masks_(x, y); }
  ViewMask& at(int x, int y) { return masks_(x, y); }
  std::span<const ViewMask> masks() const { return masks_.pixels(); }

  bool operator==(const SourceViewSets&) const = default;

 private:
  Image<ViewMask> masks_;
};

// Point on the principal axis at the middle of the depth range.
Eigen::Vector3d TriangulationProbe(const CameraView& ref);

// Angle in degrees at `point` between the rays to two centers; 0 when either
// ray is degenerate.
double TriangulationAngleDegrees(const Eigen::Vector3d& point, const Eigen::Vector3d& center_a,
                                 const Eigen::Vector3d& center_b);

ViewMask TriangulationFilter(int ref_index, std::span<const CameraView> views,
                             const Eigen::Vector3d& probe, const ViewSelectionConfig& config);

// Drops views seeing the surface at more than incident_max_deg.
// `normal` is in the reference camera frame.
ViewMask IncidentFilter(ViewMask set, const CameraView& ref, int x, int y, double depth,
                        const Eigen::Vector3d& normal, std::span<const CameraView> views,
                        double incident_max_deg);

// Drops views whose validated surface at the projection lies in front of the
// backprojected point by more than `margin`.
ViewMask VisibilityFilter(ViewMask set, const CameraView& ref, int x, int y, double depth,
                          std::span<const CameraView> views,
                          std::span<const DepthNormalMap> maps, double margin);

}  // namespace ambc
