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

#include "ambc/matching.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "ambc/errors.hpp"
#include "ambc/view_selection.hpp"

namespace ambc {

void MatchingConfig::Validate() const {
  if (window < 3 || window % 2 == 0) throw ValidationError("window must be odd and >= 3");
  if (window_step < 1) throw ValidationError("window_step must be >= 1");
  if (!(sigma_spatial > 0.0) || !(sigma_color > 0.0)) {
    throw ValidationError("matching sigmas must be positive");
  }
  if (max_cost != 2.0) throw ValidationError("max_cost must be 2");
}

void ReferencePatch::Build(const Image<float>& ref, int x, int y,
                           const MatchingConfig& config) {
  x_ = x;
  y_ = y;
  u_.clear();
  v_.clear();
  intensity_.clear();
  weight_.clear();
  const int radius = config.window / 2;
  const double center = ref(x, y);
  const double spatial = 1.0 / (2.0 * config.sigma_spatial * config.sigma_spatial);
  const double color = 1.0 / (2.0 * config.sigma_color * config.sigma_color);
  for (int dy = -radius; dy <= radius; dy += config.window_step) {
    for (int dx = -radius; dx <= radius; dx += config.window_step) {
      const int px = x + dx;
      const int py = y + dy;
      if (!ref.Contains(px, py)) continue;
      const double value = ref(px, py);
      const double di = value - center;
      u_.push_back(px);
      v_.push_back(py);
      intensity_.push_back(value);
      weight_.push_back(std::exp(-(dx * dx + dy * dy) * spatial - di * di * color));
    }
  }
  weight_sum_ = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    weight_sum_ += weight_[i];
    sum += weight_[i] * intensity_[i];
  }
  mean_ = sum / weight_sum_;
  double var = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    const double d = intensity_[i] - mean_;
    var += weight_[i] * d * d;
  }
  variance_ = var / weight_sum_;
}

double ReferencePatch::Cost(const Image<float>& src, const Eigen::Matrix3d& h,
                            double max_cost) const {
  if (!textured()) return max_cost;
  // The image covers the pixel areas [-0.5, w - 0.5] x [-0.5, h - 0.5];
  // lookups in the outer half pixel use the edge value.
  const double max_u = src.width() - 0.5;
  const double max_v = src.height() - 0.5;
  double sum_s = 0.0, sum_ss = 0.0, sum_rs = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) {
    const double hz = h(2, 0) * u_[i] + h(2, 1) * v_[i] + h(2, 2);
    if (!(std::abs(hz) > 1e-12)) return max_cost;
    const double su = (h(0, 0) * u_[i] + h(0, 1) * v_[i] + h(0, 2)) / hz;
    const double sv = (h(1, 0) * u_[i] + h(1, 1) * v_[i] + h(1, 2)) / hz;
    if (!(su >= -0.5 && sv >= -0.5 && su <= max_u && sv <= max_v)) return max_cost;
    const double s = SampleBilinear(src, std::clamp(su, 0.0, max_u - 0.5),
                                    std::clamp(sv, 0.0, max_v - 0.5));
    const double ws = weight_[i] * s;
    sum_s += ws;
    sum_ss += ws * s;
    sum_rs += ws * intensity_[i];
  }
  const double mean_s = sum_s / weight_sum_;
  const double var_s = sum_ss / weight_sum_ - mean_s * mean_s;
  if (var_s < kMinPatchVariance) return max_cost;
  const double cov = sum_rs / weight_sum_ - mean_ * mean_s;
  const double ncc = std::clamp(cov / std::sqrt(variance_ * var_s), -1.0, 1.0);
  return 1.0 - ncc;
}

double PairwiseCost(const CameraView& ref, const CameraView& src, int x, int y,
                    const Eigen::Matrix3d& homography, const MatchingConfig& config) {
  const ReferencePatch patch(ref.image, x, y, config);
  return patch.Cost(src.image, homography, config.max_cost);
}

double AggregateCost(std::span<const double> costs) {
  if (costs.size() <= 1) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double c : costs) sum += c;
  return sum / static_cast<double>(costs.size() - 1);
}

double Fitness(double cost) {
  if (cost < 0.0 || std::isnan(cost)) throw ContractError("fitness of a negative cost");
  if (std::isinf(cost)) return 0.0;
  return 1.0 / (1.0 + cost);
}

namespace {
std::atomic<std::uint64_t> next_evaluator_id{1};
}  // namespace

PhotometricEvaluator::PhotometricEvaluator(int ref_index, std::span<const CameraView> views,
                                           const SourceViewSets& baseline,
                                           const MatchingConfig& config)
    : ref_index_(ref_index),
      views_(views),
      baseline_(baseline),
      config_(config),
      id_(next_evaluator_id++) {
  const CameraView& ref = views_[ref_index_];
  ref_inverse_intrinsics_ = ref.intrinsics.inverse();
  sources_.resize(views_.size());
  for (std::size_t j = 0; j < views_.size(); ++j) {
    if (static_cast<int>(j) == ref_index_) continue;
    const RelativePose pose = RelativePoseBetween(ref, views_[j]);
    sources_[j].view = static_cast<int>(j);
    sources_[j].rotation_term = views_[j].intrinsics * pose.rotation * ref_inverse_intrinsics_;
    sources_[j].translation_term = views_[j].intrinsics * pose.translation;
  }
}

const ReferencePatch& PhotometricEvaluator::PatchAt(int x, int y) const {
  struct Cache {
    std::uint64_t owner = 0;
    ReferencePatch patch;
  };
  thread_local Cache cache;
  if (cache.owner != id_ || cache.patch.x() != x || cache.patch.y() != y ||
      cache.patch.size() == 0) {
    cache.patch.Build(views_[ref_index_].image, x, y, config_);
    cache.owner = id_;
  }
  return cache.patch;
}

ViewMask PhotometricEvaluator::SelectedViews(int x, int y, const PlaneHypothesis& plane) const {
  ViewMask mask = baseline_.at(x, y);
  if (!selection_) return mask;
  const CameraView& ref = views_[ref_index_];
  const auto depth = TryDepthFromPlane(plane, ref.Ray(x, y));
  if (!depth) return mask;
  mask = IncidentFilter(mask, ref, x, y, *depth, plane.normal, views_,
                        selection_->incident_max_deg);
  if (!selection_->maps.empty()) {
    mask = VisibilityFilter(mask, ref, x, y, *depth, views_, selection_->maps,
                            selection_->occlusion_margin);
  }
  return mask;
}

double PhotometricEvaluator::EvaluateCost(int x, int y, const PlaneHypothesis& plane) const {
  const ViewMask mask = SelectedViews(x, y, plane);
  const int count = CountViews(mask);
  if (count <= 1) return std::numeric_limits<double>::infinity();
  const ReferencePatch& patch = PatchAt(x, y);
  double sum = 0.0;
  if (!patch.textured() || std::abs(plane.offset) < 1e-12) {
    sum = config_.max_cost * count;
  } else {
    // H = K_src (R - t n^T / D) K_ref^-1
    const Eigen::RowVector3d plane_row =
        plane.normal.transpose() * ref_inverse_intrinsics_ / plane.offset;
    for (ViewMask bits = mask; bits != 0; bits &= bits - 1) {
      const int j = __builtin_ctzll(bits);
      const SourceTransform& s = sources_[j];
      const Eigen::Matrix3d h = s.rotation_term - s.translation_term * plane_row;
      sum += patch.Cost(views_[j].image, h, config_.max_cost);
    }
  }
  return sum / (count - 1);
}

double PhotometricEvaluator::Evaluate(int x, int y, const PlaneHypothesis& plane) const {
  return Fitness(EvaluateCost(x, y, plane));
}

}  // namespace ambc
