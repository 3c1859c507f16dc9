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

#include "ambc/pipeline.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ambc/errors.hpp"
#include "ambc/geometry.hpp"
#include "ambc/rng.hpp"

namespace ambc {

void PipelineConfig::Validate() const {
  matching.Validate();
  ambc.Validate();
  view_selection.Validate();
  consistency.Validate();
  fusion.Validate();
  if (cycles < 1) throw ValidationError("cycles must be at least 1");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  if (!(early_stop_points >= 0.0)) throw ValidationError("early_stop_points must be >= 0");
}

ViewMask TriangulationBaseline(const SceneDataset& dataset, int view,
                               const ViewSelectionConfig& config) {
  const CameraView& ref = dataset.views[view];
  return TriangulationFilter(view, dataset.views, TriangulationProbe(ref), config);
}

namespace {

std::vector<ViewMask> Baselines(const SceneDataset& dataset, const ViewSelectionConfig& config) {
  std::vector<ViewMask> out;
  for (int v = 0; v < static_cast<int>(dataset.views.size()); ++v) {
    const ViewMask mask = TriangulationBaseline(dataset, v, config);
    if (mask == 0) {
      throw DatasetError("view " + dataset.views[v].name +
                         " has no source view within the triangulation bounds [" +
                         std::to_string(config.triangulation_min_deg) + ", " +
                         std::to_string(config.triangulation_max_deg) + "] degrees");
    }
    out.push_back(mask);
  }
  return out;
}

// Source set each pixel's best hypothesis is scored with.
void RecordViewSets(const PhotometricEvaluator& evaluator, const ColonyGrid& grid,
                    SourceViewSets& sets, int threads) {
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      sets.at(x, y) = evaluator.SelectedViews(x, y, grid.Best(x, y).hypothesis);
    }
  }
}

void Rescore(const FitnessEvaluator& evaluator, ColonyGrid& grid, int threads) {
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) ReevaluateColony(grid.colony(x, y), x, y, evaluator);
  }
}

void ApplyValidation(const ValidationResult& result, ColonyGrid& grid, DepthNormalMap& map) {
  map.validated = result.validated;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      auto colony = grid.colony(x, y);
      const int best = BestIndex(colony);
      for (FoodSource& s : colony) s.validated = false;
      colony[best].validated = result.validated(x, y) != 0;
    }
  }
}

double Fraction(const Image<std::uint8_t>& flags) {
  std::size_t count = 0;
  for (std::uint8_t f : flags.pixels()) count += f != 0;
  return flags.size() == 0 ? 0.0 : static_cast<double>(count) / flags.size();
}

}  // namespace

PipelineResult RunPipeline(const SceneDataset& dataset, const PipelineConfig& config,
                           const ProgressCallback& progress) {
  dataset.Validate();
  config.Validate();
  const int n = static_cast<int>(dataset.views.size());
  const std::vector<ViewMask> baselines = Baselines(dataset, config.view_selection);

  std::vector<SourceViewSets> baseline_sets;
  baseline_sets.reserve(n);
  std::vector<SourceViewSets> sets;
  std::vector<std::unique_ptr<PhotometricEvaluator>> evaluators;
  std::vector<const FitnessEvaluator*> evaluator_ptrs;
  std::vector<ColonyGrid> grids;
  std::vector<DepthNormalMap> maps;
  for (int v = 0; v < n; ++v) {
    const CameraView& view = dataset.views[v];
    baseline_sets.emplace_back(view.width(), view.height(), baselines[v]);
    sets.push_back(baseline_sets.back());
    evaluators.push_back(std::make_unique<PhotometricEvaluator>(v, dataset.views,
                                                                baseline_sets.back(),
                                                                config.matching));
    if (config.view_selection.pixelwise) {
      evaluators.back()->SetPixelwiseSelection(
          {{}, config.view_selection.incident_max_deg, config.consistency.t_depth});
    }
    evaluator_ptrs.push_back(evaluators.back().get());
    grids.push_back(InitColonies(view, config.ambc, *evaluators.back(),
                                 StreamKey{config.seed, v, 0, 0, Phase::kInit}, config.threads));
    maps.emplace_back(view.width(), view.height());
  }

  PipelineResult result;
  double previous = -1.0;
  for (int cycle = 1; cycle <= config.cycles; ++cycle) {
    for (int v = 0; v < n; ++v) {
      for (int it = 0; it < config.ambc.iterations_per_cycle; ++it) {
        RunIteration(grids[v], dataset.views[v], config.ambc, *evaluators[v],
                     StreamKey{config.seed, v, cycle, it, Phase::kEmployed}, config.threads);
      }
    }
    for (int v = 0; v < n; ++v) {
      RecordViewSets(*evaluators[v], grids[v], sets[v], config.threads);
    }
    std::vector<DepthNormalMap> extracted;
    for (int v = 0; v < n; ++v) extracted.push_back(ExtractBestMap(grids[v], dataset.views[v]));
    std::vector<ValidationResult> validation;
    for (int v = 0; v < n; ++v) {
      validation.push_back(
          ValidateMap(v, dataset.views, extracted, sets[v], config.consistency, config.threads));
    }
    CycleStats stats;
    stats.cycle = cycle;
    std::size_t validated = 0;
    std::size_t pixels = 0;
    for (int v = 0; v < n; ++v) {
      ApplyValidation(validation[v], grids[v], extracted[v]);
      maps[v] = std::move(extracted[v]);
      stats.validated_fraction.push_back(Fraction(maps[v].validated));
      for (std::uint8_t f : maps[v].validated.pixels()) validated += f != 0;
      pixels += maps[v].validated.size();
    }
    stats.overall_validated_fraction = static_cast<double>(validated) / pixels;

    const bool converged =
        previous >= 0.0 &&
        std::abs(stats.overall_validated_fraction - previous) * 100.0 < config.early_stop_points;
    previous = stats.overall_validated_fraction;
    const bool last = converged || cycle == config.cycles;

    if (!last && config.view_selection.pixelwise) {
      // New validated maps change which views count as occluded.
      for (int v = 0; v < n; ++v) {
        evaluators[v]->SetPixelwiseSelection(
            {maps, config.view_selection.incident_max_deg, config.consistency.t_depth});
        Rescore(*evaluators[v], grids[v], config.threads);
      }
    }
    if (!last && config.inter_image_propagation) {
      std::vector<Injection> injections;
      for (int v = 0; v < n; ++v) {
        auto found = CollectInjections(v, dataset.views, maps, grids[v], sets[v], validation[v],
                                       evaluator_ptrs, config.threads);
        injections.insert(injections.end(), found.begin(), found.end());
      }
      const InjectionStats applied = ApplyInjections(injections, grids);
      if (applied.max_fitness_decreases != 0) {
        throw ContractError("inter-image propagation lowered a colony's best fitness");
      }
      stats.injections_applied = applied.applied;
    }
    result.history.push_back(stats);
    if (progress) progress(stats);
    if (last) break;
  }

  result.cloud = Fuse(dataset.views, maps, config.fusion);
  result.maps = std::move(maps);
  return result;
}

DepthNormalMap RunSingleView(const SceneDataset& dataset, int view,
                             const PipelineConfig& config) {
  dataset.Validate();
  config.Validate();
  if (view < 0 || view >= static_cast<int>(dataset.views.size())) {
    throw ValidationError("view index " + std::to_string(view) + " out of range");
  }
  const ViewMask baseline = TriangulationBaseline(dataset, view, config.view_selection);
  if (baseline == 0) {
    throw DatasetError("view " + dataset.views[view].name +
                       " has no source view within the triangulation bounds");
  }
  const CameraView& ref = dataset.views[view];
  const SourceViewSets sets(ref.width(), ref.height(), baseline);
  const PhotometricEvaluator evaluator(view, dataset.views, sets, config.matching);
  ColonyGrid grid = InitColonies(ref, config.ambc, evaluator,
                                 StreamKey{config.seed, view, 0, 0, Phase::kInit},
                                 config.threads);
  for (int cycle = 1; cycle <= config.cycles; ++cycle) {
    for (int it = 0; it < config.ambc.iterations_per_cycle; ++it) {
      RunIteration(grid, ref, config.ambc, evaluator,
                   StreamKey{config.seed, view, cycle, it, Phase::kEmployed}, config.threads);
    }
  }
  return ExtractBestMap(grid, ref);
}

}  // namespace ambc
