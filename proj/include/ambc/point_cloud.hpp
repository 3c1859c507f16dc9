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

#include <vector>

#include <Eigen/Core>

#include "ambc/image.hpp"

namespace ambc {

struct FusedPoint {
  Eigen::Vector3d position;
  Eigen::Vector3d normal;  // unit, world frame
  Rgb color;
  int support = 0;  // number of consistent views besides the reference
};

struct FusedPointCloud {
  std::vector<FusedPoint> points;
  std::size_t size() const { return points.size(); }
};

}  // namespace ambc
