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

#include <cstdint>
#include <span>
#include <vector>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/image.hpp"
#include "ambc/point_cloud.hpp"

namespace ambc {

struct FusionConfig {
  double rel_depth = 0.01;
  double normal_deg = 30.0;
  int min_views = 3;
  // Compare |d_proj - d_j| against rel_depth directly instead of as a ratio.
  bool absolute_depth = false;

  void Validate() const;
};

struct FusionResult {
  FusedPointCloud cloud;
  // Index of the point each pixel was merged into, or -1.
  std::vector<Image<std::int32_t>> owner;
};

// Views act as reference in index order; only validated pixels take part and
// every pixel is merged into at most one point.
FusionResult FuseWithOwners(std::span<const CameraView> views,
                            std::span<const DepthNormalMap> maps, const FusionConfig& config);

inline FusedPointCloud Fuse(std::span<const CameraView> views,
                            std::span<const DepthNormalMap> maps, const FusionConfig& config) {
  return FuseWithOwners(views, maps, config).cloud;
}

}  // namespace ambc
