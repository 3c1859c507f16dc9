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

#include "ambc/fusion.hpp"

#include <cmath>
#include <string>

#include "ambc/errors.hpp"
#include "ambc/geometry.hpp"

namespace ambc {

void FusionConfig::Validate() const {
  if (!(rel_depth > 0.0)) throw ValidationError("fusion rel_depth must be positive");
  if (!(normal_deg > 0.0 && normal_deg <= 180.0)) {
    throw ValidationError("fusion normal_deg must be in (0, 180]");
  }
  if (min_views < 1) throw ValidationError("fusion min_views must be at least 1");
}

FusionResult FuseWithOwners(std::span<const CameraView> views,
                            std::span<const DepthNormalMap> maps, const FusionConfig& config) {
  if (views.size() != maps.size()) {
    throw ValidationError("fusion needs one map per view, got " + std::to_string(maps.size()) +
                          " maps for " + std::to_string(views.size()) + " views");
  }
  FusionResult result;
  for (const DepthNormalMap& m : maps) result.owner.emplace_back(m.width(), m.height(), -1);

  struct Link {
    int view;
    int x;
    int y;
  };
  std::vector<Link> links;
  const int n = static_cast<int>(views.size());
  for (int r = 0; r < n; ++r) {
    const CameraView& ref = views[r];
    const DepthNormalMap& ref_map = maps[r];
    const Eigen::Matrix3d ref_to_world = ref.rotation.transpose();
    for (int y = 0; y < ref_map.height(); ++y) {
      for (int x = 0; x < ref_map.width(); ++x) {
        if (!ref_map.validated(x, y) || result.owner[r](x, y) >= 0) continue;
        const double depth = ref_map.depth(x, y);
        if (!(depth > 0.0)) continue;
        const Eigen::Vector3d point = ref.Backproject(x, y, depth);
        const Eigen::Vector3d normal = ref_to_world * ref_map.normal(x, y).cast<double>();

        links.clear();
        for (int j = 0; j < n; ++j) {
          if (j == r) continue;
          const CameraView& view = views[j];
          const Eigen::Vector3d in_view = view.WorldToCamera(point);
          if (!(in_view.z() > 0.0)) continue;
          const Eigen::Vector2i p = RoundPixel(view.ProjectCamera(in_view));
          const DepthNormalMap& map = maps[j];
          if (!map.depth.Contains(p.x(), p.y())) continue;
          if (!map.validated(p.x(), p.y()) || result.owner[j](p.x(), p.y()) >= 0) continue;
          const double dj = map.depth(p.x(), p.y());
          if (!(dj > 0.0)) continue;
          const double diff = std::abs(in_view.z() - dj);
          if (!((config.absolute_depth ? diff : diff / dj) < config.rel_depth)) continue;
          const Eigen::Vector3d nj =
              view.rotation.transpose() * map.normal(p.x(), p.y()).cast<double>();
          if (!(AngleDegrees(normal, nj) < config.normal_deg)) continue;
          links.push_back({j, p.x(), p.y()});
        }
        if (static_cast<int>(links.size()) < config.min_views) continue;

        Eigen::Vector3d position_sum = point;
        Eigen::Vector3d normal_sum = normal;
        Rgb c = ref.ColorAt(x, y);
        double red = c.r, green = c.g, blue = c.b;
        const auto index = static_cast<std::int32_t>(result.cloud.points.size());
        result.owner[r](x, y) = index;
        for (const Link& l : links) {
          const CameraView& view = views[l.view];
          const DepthNormalMap& map = maps[l.view];
          position_sum += view.Backproject(l.x, l.y, map.depth(l.x, l.y));
          normal_sum += view.rotation.transpose() * map.normal(l.x, l.y).cast<double>();
          c = view.ColorAt(l.x, l.y);
          red += c.r;
          green += c.g;
          blue += c.b;
          result.owner[l.view](l.x, l.y) = index;
        }
        const double count = static_cast<double>(links.size() + 1);
        FusedPoint fused;
        fused.position = position_sum / count;
        fused.normal = normal_sum.normalized();
        fused.color = {static_cast<std::uint8_t>(std::lround(red / count)),
                       static_cast<std::uint8_t>(std::lround(green / count)),
                       static_cast<std::uint8_t>(std::lround(blue / count))};
        fused.support = static_cast<int>(links.size());
        result.cloud.points.push_back(fused);
      }
    }
  }
  return result;
}

}  // namespace ambc
