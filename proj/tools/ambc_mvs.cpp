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

// ambc_mvs: synthetic scene generation, multi-view depth estimation, fusion
// and evaluation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "ambc/errors.hpp"
#include "ambc/evaluate.hpp"
#include "ambc/fusion.hpp"
#include "ambc/pipeline.hpp"
#include "ambc/scene_io.hpp"
#include "ambc/synthgen.hpp"

namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
  ambc::PipelineConfig config;
  bool no_pvs = false;
  bool no_inter_prop = false;

  ambc::PipelineConfig Resolve() const {
    ambc::PipelineConfig c = config;
    if (no_pvs) c.view_selection.pixelwise = false;
    if (no_inter_prop) c.inter_image_propagation = false;
    return c;
  }
};

void AddFusionOptions(CLI::App* app, ambc::FusionConfig& fusion) {
  app->add_option("--fusion-rel-depth", fusion.rel_depth, "Fusion relative depth threshold");
  app->add_option("--fusion-min-views", fusion.min_views,
                  "Consistent views required to emit a point");
}

void AddPipelineOptions(CLI::App* app, PipelineFlags& flags) {
  ambc::PipelineConfig& c = flags.config;
  app->add_option("--food-number", c.ambc.food_number, "Food sources per pixel");
  app->add_option("--trial-limit", c.ambc.trial_limit, "Trials before a scout replaces a source");
  app->add_option("--cycles", c.cycles, "Optimization cycles");
  app->add_option("--iters", c.ambc.iterations_per_cycle, "Colony iterations per cycle");
  app->add_option("--tri-min", c.view_selection.triangulation_min_deg,
                  "Minimum triangulation angle (degrees)");
  app->add_option("--tri-max", c.view_selection.triangulation_max_deg,
                  "Maximum triangulation angle (degrees)");
  app->add_option("--incident-max", c.view_selection.incident_max_deg,
                  "Maximum incident angle (degrees)");
  app->add_option("--t-depth", c.consistency.t_depth, "Consistency depth threshold");
  app->add_option("--t-normal", c.consistency.t_normal, "Consistency normal threshold (degrees)");
  app->add_option("--consistency-ratio", c.consistency.min_ratio,
                  "Fraction of source views that must agree");
  app->add_option("--smooth-reward", c.ambc.smooth_reward,
                  "Bonus for validated neighbor hypotheses");
  AddFusionOptions(app, c.fusion);
  app->add_option("--window", c.matching.window, "Matching window size (odd)");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--threads", c.threads, "Worker threads");
  app->add_flag("--no-pvs", flags.no_pvs, "Disable pixelwise view selection");
  app->add_flag("--no-inter-prop", flags.no_inter_prop, "Disable inter-image propagation");
}

fs::path MapPath(const fs::path& dir, const ambc::CameraView& view) {
  return dir / (view.name + ".dnm");
}

void WriteHistory(const ambc::PipelineResult& result, const fs::path& path) {
  std::ofstream out(path);
  out << "cycle overall_validated injections per_view...\n";
  for (const ambc::CycleStats& s : result.history) {
    out << s.cycle << ' ' << s.overall_validated_fraction << ' ' << s.injections_applied;
    for (double f : s.validated_fraction) out << ' ' << f;
    out << '\n';
  }
}

// Applies a key-value file to the options of `sub` that were not given on
// the command line. Keys may sit at top level or under [<subcommand>].
void ApplyConfigFile(CLI::App* sub, const std::string& path) {
  CLI::ConfigINI format;
  for (const CLI::ConfigItem& item : format.from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents != std::vector<std::string>{sub->get_name()}) {
      throw CLI::ConfigError::Extras(item.fullname());
    }
    CLI::Option* op = sub->get_option_no_throw("--" + item.name);
    if (op == nullptr || item.name == "config") throw CLI::ConfigError::Extras(item.fullname());
    if (op->count() > 0) continue;
    op->add_result(item.inputs);
    op->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view stereo with a colony-based plane optimizer"};
  app.require_subcommand(1);

  // synth
  std::string kind = "plane";
  ambc::RigOptions rig;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--kind", kind, "plane | occlusion | textureless")
      ->check(CLI::IsMember({"plane", "occlusion", "textureless"}));
  synth->add_option("--views", rig.views, "Number of cameras");
  synth->add_option("--width", rig.width, "Image width");
  synth->add_option("--height", rig.height, "Image height");
  synth->add_option("--seed", synth_seed, "Texture seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // reconstruct
  PipelineFlags rec_flags;
  std::string rec_scene, rec_out;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "Depth maps and fused cloud");
  std::string reconstruct_config;
  reconstruct->add_option("--config", reconstruct_config, "Key-value configuration file")
      ->check(CLI::ExistingFile);
  reconstruct->add_option("scene", rec_scene, "Dataset directory")->required()->check(
      CLI::ExistingDirectory);
  reconstruct->add_option("--out", rec_out, "Output directory")->required();
  AddPipelineOptions(reconstruct, rec_flags);

  // depthmap
  PipelineFlags dm_flags;
  std::string dm_scene, dm_out;
  int dm_view = 0;
  CLI::App* depthmap = app.add_subcommand("depthmap", "Depth map of a single reference view");
  std::string depthmap_config;
  depthmap->add_option("--config", depthmap_config, "Key-value configuration file")
      ->check(CLI::ExistingFile);
  depthmap->add_option("scene", dm_scene, "Dataset directory")->required()->check(
      CLI::ExistingDirectory);
  depthmap->add_option("--view", dm_view, "Reference view index")->required();
  depthmap->add_option("--out", dm_out, "Output directory")->required();
  AddPipelineOptions(depthmap, dm_flags);

  // fuse
  ambc::FusionConfig fusion;
  std::string fuse_scene, fuse_maps, fuse_out;
  CLI::App* fuse = app.add_subcommand("fuse", "Fuse saved depth maps into a point cloud");
  std::string fuse_config;
  fuse->add_option("--config", fuse_config, "Key-value configuration file")
      ->check(CLI::ExistingFile);
  fuse->add_option("scene", fuse_scene, "Dataset directory")->required()->check(
      CLI::ExistingDirectory);
  fuse->add_option("maps", fuse_maps, "Directory with one .dnm map per view")->required()->check(
      CLI::ExistingDirectory);
  fuse->add_option("--out", fuse_out, "Output PLY file")->required();
  AddFusionOptions(fuse, fusion);

  // eval
  std::string eval_scene, eval_rec, eval_out;
  ambc::EvalOptions eval_options;
  CLI::App* eval = app.add_subcommand("eval", "Compare a reconstruction with ground truth");
  eval->add_option("scene", eval_scene, "Synthetic dataset directory")->required()->check(
      CLI::ExistingDirectory);
  eval->add_option("reconstruction", eval_rec, "Directory with maps and cloud.ply")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--spacing", eval_options.sample_spacing, "Ground-truth sample spacing");
  eval->add_option("--out", eval_out, "Write the report to this file");

  CLI11_PARSE(app, argc, argv);
  try {
    for (auto [sub, config] : {std::pair{reconstruct, &reconstruct_config},
                               std::pair{depthmap, &depthmap_config},
                               std::pair{fuse, &fuse_config}}) {
      if (*sub && !config->empty()) ApplyConfigFile(sub, *config);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) {
      ambc::SyntheticScene scene;
      if (kind == "plane") {
        scene = ambc::MakePlaneScene(rig, synth_seed);
      } else if (kind == "occlusion") {
        scene = ambc::MakeOcclusionScene(rig, synth_seed);
      } else {
        scene = ambc::MakeTexturelessScene(rig, synth_seed);
      }
      ambc::SaveScene(scene, synth_out);
      std::cout << "wrote " << scene.views.size() << " views to " << synth_out << "\n";
    } else if (*reconstruct) {
      const ambc::SceneDataset dataset = ambc::LoadDataset(rec_scene);
      const ambc::PipelineConfig config = rec_flags.Resolve();
      const ambc::PipelineResult result =
          ambc::RunPipeline(dataset, config, [](const ambc::CycleStats& s) {
            std::cerr << "cycle " << s.cycle << ": validated "
                      << 100.0 * s.overall_validated_fraction << "%\n";
          });
      fs::create_directories(rec_out);
      for (std::size_t v = 0; v < dataset.views.size(); ++v) {
        ambc::SaveMap(result.maps[v], MapPath(rec_out, dataset.views[v]));
      }
      ambc::ExportPly(result.cloud, fs::path(rec_out) / "cloud.ply");
      WriteHistory(result, fs::path(rec_out) / "history.txt");
      std::cout << "fused " << result.cloud.size() << " points\n";
    } else if (*depthmap) {
      const ambc::SceneDataset dataset = ambc::LoadDataset(dm_scene);
      const ambc::DepthNormalMap map =
          ambc::RunSingleView(dataset, dm_view, dm_flags.Resolve());
      fs::create_directories(dm_out);
      ambc::SaveMap(map, MapPath(dm_out, dataset.views[dm_view]));
    } else if (*fuse) {
      fusion.Validate();
      const ambc::SceneDataset dataset = ambc::LoadDataset(fuse_scene);
      std::vector<ambc::DepthNormalMap> maps;
      for (const ambc::CameraView& view : dataset.views) {
        maps.push_back(ambc::LoadMap(MapPath(fuse_maps, view)));
      }
      const ambc::FusedPointCloud cloud = ambc::Fuse(dataset.views, maps, fusion);
      ambc::ExportPly(cloud, fuse_out);
      std::cout << "fused " << cloud.size() << " points\n";
    } else if (*eval) {
      const ambc::SceneDataset dataset = ambc::LoadDataset(eval_scene);
      const ambc::GroundTruth truth = ambc::LoadGroundTruth(eval_scene, dataset.views);
      std::vector<ambc::DepthNormalMap> maps;
      for (const ambc::CameraView& view : dataset.views) {
        maps.push_back(ambc::LoadMap(MapPath(eval_rec, view)));
      }
      const ambc::FusedPointCloud cloud = ambc::ImportPly(fs::path(eval_rec) / "cloud.ply");
      const ambc::EvalReport r = ambc::Evaluate(cloud, maps, truth.geometry, dataset.views,
                                                truth.maps, eval_options);
      std::ostringstream report;
      report << "points: " << cloud.size() << "\n";
      if (r.accuracy_defined) {
        report << "accuracy: " << r.accuracy << "\n";
      } else {
        report << "accuracy: undefined\n";
      }
      report << "completeness: " << r.completeness << "\n"
             << "overall: " << r.overall << "\n";
      for (std::size_t v = 0; v < r.validated_fraction.size(); ++v) {
        report << "validated[" << dataset.views[v].name << "]: " << r.validated_fraction[v]
               << "\n";
      }
      report << "depth_error_count: " << r.depth_error.count << "\n"
             << "depth_error_mean: " << r.depth_error.mean << "\n"
             << "depth_error_median: " << r.depth_error.median << "\n"
             << "depth_error_p90: " << r.depth_error.p90 << "\n"
             << "depth_error_p95: " << r.depth_error.p95 << "\n"
             << "depth_within_1pct: " << r.depth_error.within_1_percent << "\n";
      std::cout << report.str();
      if (!eval_out.empty()) {
        std::ofstream out(eval_out);
        out << report.str();
        if (!out) throw ambc::Error("cannot write " + eval_out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
