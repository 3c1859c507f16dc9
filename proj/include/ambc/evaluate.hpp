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

#include <cstddef>
#include <span>
#include <vector>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/image.hpp"
#include "ambc/point_cloud.hpp"
#include "ambc/synthgen.hpp"

namespace ambc {

// Relative depth error |d - d_gt| / d_gt.
struct DepthErrorStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double p95 = 0.0;
  double within_1_percent = 0.0;  // fraction of counted pixels
};

struct EvalOptions {
  double sample_spacing = 0.005;  // ground-truth surface sampling, world units
  // Ground-truth samples count towards completeness only when this many
  // views see them unoccluded.
  int min_observing_views = 2;
};

struct EvalReport {
  bool accuracy_defined = false;
  double accuracy = 0.0;      // mean distance cloud -> ground truth surface
  double completeness = 0.0;  // mean distance ground truth samples -> cloud; +inf when empty
  double overall = 0.0;
  std::size_t ground_truth_samples = 0;
  std::vector<double> validated_fraction;
  DepthErrorStats depth_error;  // over validated pixels
};

// Over pixels with ground truth, restricted to masks[v] when masks are given
// and to validated pixels when validated_only is set.
DepthErrorStats ComputeDepthErrorStats(std::span<const DepthNormalMap> maps,
                                       std::span<const DepthNormalMap> ground_truth,
                                       std::span<const Image<std::uint8_t>> masks,
                                       bool validated_only);

// Ground-truth samples seen unoccluded and in-bounds by at least
// `min_observing_views` views.
std::vector<Eigen::Vector3d> ObservedSurfaceSamples(const SceneGeometry& geometry,
                                                    std::span<const CameraView> views,
                                                    const EvalOptions& options);

EvalReport Evaluate(const FusedPointCloud& cloud, std::span<const DepthNormalMap> maps,
                    const SceneGeometry& geometry, std::span<const CameraView> views,
                    std::span<const DepthNormalMap> ground_truth, const EvalOptions& options);

}  // namespace ambc
