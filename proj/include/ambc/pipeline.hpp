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
#include <functional>
#include <string>
#include <vector>

#include "ambc/ambc.hpp"
#include "ambc/consistency.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/fusion.hpp"
#include "ambc/matching.hpp"
#include "ambc/point_cloud.hpp"
#include "ambc/scene_io.hpp"
#include "ambc/view_selection.hpp"

namespace ambc {

struct PipelineConfig {
  MatchingConfig matching;
  AmbcConfig ambc;
  ViewSelectionConfig view_selection;
  ConsistencyConfig consistency;
  FusionConfig fusion;
  int cycles = 3;
  std::uint64_t seed = 1;
  int threads = 1;
  bool inter_image_propagation = true;
  // Stop once the overall validated fraction moves by less than this many
  // percentage points between cycles.
  double early_stop_points = 0.5;

  void Validate() const;
};

struct CycleStats {
  int cycle = 0;
  std::vector<double> validated_fraction;  // per view
  double overall_validated_fraction = 0.0;
  int injections_applied = 0;
};

struct PipelineResult {
  std::vector<DepthNormalMap> maps;
  FusedPointCloud cloud;
  std::vector<CycleStats> history;
};

using ProgressCallback = std::function<void(const CycleStats&)>;

// View selection, colony optimization, cross-view validation and
// propagation per cycle, then fusion of the validated maps.
PipelineResult RunPipeline(const SceneDataset& dataset, const PipelineConfig& config,
                           const ProgressCallback& progress = {});

// Optimizes one reference view against its triangulation-filtered sources for
// cycles * iterations_per_cycle rounds. No cross-view validation takes place,
// so every pixel comes back unvalidated.
DepthNormalMap RunSingleView(const SceneDataset& dataset, int view,
                             const PipelineConfig& config);

// Source views of `view` that pass the triangulation bounds at its probe.
ViewMask TriangulationBaseline(const SceneDataset& dataset, int view,
                               const ViewSelectionConfig& config);

}  // namespace ambc
