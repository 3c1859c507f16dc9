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
#include <vector>

#include "ambc/ambc.hpp"
#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/geometry.hpp"
#include "ambc/image.hpp"
#include "ambc/matching.hpp"
#include "ambc/view_selection.hpp"

namespace ambc {

struct ConsistencyConfig {
  double t_depth = 0.01;   // absolute, world units
  double t_normal = 30.0;  // degrees
  double min_ratio = 0.7;

  void Validate() const;
};

// Transfers the hypothesis at (x, y) into `src` and compares it with the
// source map at the nearest pixel.
bool CheckPair(int x, int y, const PlaneHypothesis& hypothesis, const CameraView& ref,
               const CameraView& src, const DepthNormalMap& src_map,
               const ConsistencyConfig& config);

struct ValidationResult {
  Image<std::uint8_t> validated;
  Image<ViewMask> consistent;  // source views that passed the pair check
};

// Validates every pixel of maps[ref_index] against the other views' maps.
// Only depth and normal of the maps are read.
ValidationResult ValidateMap(int ref_index, std::span<const CameraView> views,
                             std::span<const DepthNormalMap> maps,
                             const SourceViewSets& view_sets, const ConsistencyConfig& config,
                             int threads);

struct Injection {
  int target_view = 0;
  int x = 0;
  int y = 0;
  PlaneHypothesis hypothesis;  // target camera frame
  double fitness = 0.0;
};

// Candidates from one reference view for the colonies of the views it
// disagrees with. Reads only; safe to run for all views before applying.
std::vector<Injection> CollectInjections(int ref_index, std::span<const CameraView> views,
                                         std::span<const DepthNormalMap> maps,
                                         const ColonyGrid& ref_colonies,
                                         const SourceViewSets& ref_view_sets,
                                         const ValidationResult& ref_result,
                                         std::span<const FitnessEvaluator* const> evaluators,
                                         int threads);

struct InjectionStats {
  int applied = 0;
  int max_fitness_decreases = 0;
};

// Replaces each target colony's weakest source when the candidate is
// strictly fitter. Injected sources enter unvalidated.
InjectionStats ApplyInjections(std::span<const Injection> injections,
                               std::span<ColonyGrid> colonies);

}  // namespace ambc
