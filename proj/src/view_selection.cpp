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

#include "ambc/view_selection.hpp"

#include "ambc/errors.hpp"
#include "ambc/geometry.hpp"

namespace ambc {

void ViewSelectionConfig::Validate() const {
  if (!(triangulation_min_deg >= 0.0 && triangulation_min_deg <= triangulation_max_deg &&
        triangulation_max_deg <= 180.0)) {
    throw ValidationError("triangulation bounds must satisfy 0 <= min <= max <= 180");
  }
  if (!(incident_max_deg > 0.0 && incident_max_deg <= 90.0)) {
    throw ValidationError("incident_max_deg must be in (0, 90]");
  }
}

Eigen::Vector3d TriangulationProbe(const CameraView& ref) {
  const double depth = 0.5 * (ref.depth_min + ref.depth_max);
  return ref.CameraToWorld(Eigen::Vector3d(0.0, 0.0, depth));
}

double TriangulationAngleDegrees(const Eigen::Vector3d& point, const Eigen::Vector3d& center_a,
                                 const Eigen::Vector3d& center_b) {
  const Eigen::Vector3d a = center_a - point;
  const Eigen::Vector3d b = center_b - point;
  if (a.norm() < 1e-12 || b.norm() < 1e-12 || (center_a - center_b).norm() < 1e-12) {
    return 0.0;
  }
  return AngleDegrees(a, b);
}

ViewMask TriangulationFilter(int ref_index, std::span<const CameraView> views,
                             const Eigen::Vector3d& probe, const ViewSelectionConfig& config) {
  const Eigen::Vector3d ref_center = views[ref_index].Center();
  ViewMask mask = 0;
  for (std::size_t j = 0; j < views.size(); ++j) {
    if (static_cast<int>(j) == ref_index) continue;
    const double angle = TriangulationAngleDegrees(probe, ref_center, views[j].Center());
    if (angle == 0.0) continue;
    if (angle >= config.triangulation_min_deg && angle <= config.triangulation_max_deg) {
      mask |= ViewMask{1} << j;
    }
  }
  return mask;
}

ViewMask IncidentFilter(ViewMask set, const CameraView& ref, int x, int y, double depth,
                        const Eigen::Vector3d& normal, std::span<const CameraView> views,
                        double incident_max_deg) {
  const Eigen::Vector3d point = ref.Backproject(x, y, depth);
  const Eigen::Vector3d world_normal = ref.rotation.transpose() * normal;
  ViewMask out = set;
  for (ViewMask bits = set; bits != 0; bits &= bits - 1) {
    const int j = __builtin_ctzll(bits);
    const Eigen::Vector3d to_camera = views[j].Center() - point;
    // Tolerance keeps a constructed exact boundary angle on the kept side.
    if (AngleDegrees(world_normal, to_camera) > incident_max_deg + 1e-9) {
      out &= ~(ViewMask{1} << j);
    }
  }
  return out;
}

ViewMask VisibilityFilter(ViewMask set, const CameraView& ref, int x, int y, double depth,
                          std::span<const CameraView> views,
                          std::span<const DepthNormalMap> maps, double margin) {
  const Eigen::Vector3d point = ref.Backproject(x, y, depth);
  ViewMask out = set;
  for (ViewMask bits = set; bits != 0; bits &= bits - 1) {
    const int j = __builtin_ctzll(bits);
    const Eigen::Vector3d in_j = views[j].WorldToCamera(point);
    if (!(in_j.z() > 0.0)) continue;
    const Eigen::Vector2i p = RoundPixel(views[j].ProjectCamera(in_j));
    const DepthNormalMap& map = maps[j];
    if (!map.depth.Contains(p.x(), p.y()) || !map.validated(p.x(), p.y())) continue;
    if (map.depth(p.x(), p.y()) < in_j.z() - margin) out &= ~(ViewMask{1} << j);
  }
  return out;
}

}  // namespace ambc
