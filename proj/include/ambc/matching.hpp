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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/geometry.hpp"

namespace ambc {

struct MatchingConfig {
  int window = 11;  // odd patch side in pixels
  // Sample every window_step-th pixel of the window.
  int window_step = 2;
  double sigma_spatial = 3.0;
  double sigma_color = 0.1;
  double max_cost = 2.0;

  void Validate() const;
};

constexpr double kMinPatchVariance = 1e-12;

// Reference side of a bilaterally weighted NCC window. Samples falling
// outside the reference image are dropped.
class ReferencePatch {
 public:
  ReferencePatch() = default;
  ReferencePatch(const Image<float>& ref, int x, int y, const MatchingConfig& config) {
    Build(ref, x, y, config);
  }

  void Build(const Image<float>& ref, int x, int y, const MatchingConfig& config);

  int x() const { return x_; }
  int y() const { return y_; }
  std::size_t size() const { return u_.size(); }
  bool textured() const { return variance_ >= kMinPatchVariance; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }

  // 1 - NCC against the warped source patch, or max_cost when a warped
  // sample leaves the source image or either patch is flat.
  double Cost(const Image<float>& src, const Eigen::Matrix3d& homography,
              double max_cost) const;

 private:
  int x_ = 0;
  int y_ = 0;
  std::vector<double> u_, v_, intensity_, weight_;
  double weight_sum_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

double PairwiseCost(const CameraView& ref, const CameraView& src, int x, int y,
                    const Eigen::Matrix3d& homography, const MatchingConfig& config);

// Sum of costs over |S| - 1, or +inf when fewer than two views contribute.
double AggregateCost(std::span<const double> costs);

// 1 / (1 + cost); +inf maps to 0. Throws ContractError on negative cost.
double Fitness(double cost);

using ViewMask = std::uint64_t;

inline int CountViews(ViewMask mask) { return __builtin_popcountll(mask); }

// Scores plane hypotheses at reference pixels.
class FitnessEvaluator {
 public:
  virtual ~FitnessEvaluator() = default;
  virtual double Evaluate(int x, int y, const PlaneHypothesis& plane) const = 0;
};

class SourceViewSets;

// Incident-angle and visibility filtering applied to each evaluated
// hypothesis on top of the per-pixel baseline set.
struct PixelwiseSelection {
  std::span<const DepthNormalMap> maps;  // validated solutions of the last check
  double incident_max_deg = 80.0;
  double occlusion_margin = 0.01;
};

// Multi-view photometric fitness of one reference view. Each pixel starts
// from its baseline source set; with pixelwise selection enabled the set is
// narrowed for the point and normal of the hypothesis being scored.
class PhotometricEvaluator final : public FitnessEvaluator {
 public:
  PhotometricEvaluator(int ref_index, std::span<const CameraView> views,
                       const SourceViewSets& baseline, const MatchingConfig& config);

  void SetPixelwiseSelection(const PixelwiseSelection& selection) { selection_ = selection; }
  void ClearPixelwiseSelection() { selection_.reset(); }

  ViewMask SelectedViews(int x, int y, const PlaneHypothesis& plane) const;
  double Evaluate(int x, int y, const PlaneHypothesis& plane) const override;
  double EvaluateCost(int x, int y, const PlaneHypothesis& plane) const;

 private:
  struct SourceTransform {
    int view = -1;
    Eigen::Matrix3d rotation_term;     // K_src R K_ref^-1
    Eigen::Vector3d translation_term;  // K_src t
  };

  const ReferencePatch& PatchAt(int x, int y) const;

  int ref_index_;
  std::span<const CameraView> views_;
  const SourceViewSets& baseline_;
  MatchingConfig config_;
  std::optional<PixelwiseSelection> selection_;
  Eigen::Matrix3d ref_inverse_intrinsics_;
  std::vector<SourceTransform> sources_;  // indexed by view
  std::uint64_t id_;
};

}  // namespace ambc
