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

#include <Eigen/Core>

#include "ambc/image.hpp"

namespace ambc {

// Per-view dense estimate. Normals are unit vectors in the camera frame.
struct DepthNormalMap {
  Image<float> depth;
  Image<Eigen::Vector3f> normal;
  Image<float> fitness;
  Image<std::uint8_t> validated;

  DepthNormalMap() = default;
  DepthNormalMap(int width, int height)
      : depth(width, height, 0.0f),
        normal(width, height, Eigen::Vector3f(0.0f, 0.0f, -1.0f)),
        fitness(width, height, 0.0f),
        validated(width, height, 0) {}

  int width() const { return depth.width(); }
  int height() const { return depth.height(); }

  bool operator==(const DepthNormalMap&) const = default;
};

}  // namespace ambc
