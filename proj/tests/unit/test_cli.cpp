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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ambc/scene_io.hpp"
#include "test_support.hpp"

namespace ambc {
namespace {

namespace fs = std::filesystem;

int RunTool(const std::string& args, const fs::path& log) {
  const std::string command =
      std::string(AMBC_MVS_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int CountLines(const fs::path& p) {
  const std::string text = ReadFile(p);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

const std::string kSmall = " --food-number 4 --iters 2 --seed 3";

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    ASSERT_EQ(RunTool("synth --kind plane --views 3 --width 40 --height 30 --out " +
                      Scene().string(),
                  Log()),
              0)
        << ReadFile(Log());
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path Scene() { return dir_->path() / "scene"; }
  static fs::path Log() { return dir_->path() / "log.txt"; }
  static fs::path Path(const std::string& name) { return dir_->path() / name; }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, SynthWritesDatasetAndGroundTruth) {
  for (const char* name : {"0000", "0001", "0002"}) {
    EXPECT_TRUE(fs::exists(Scene() / "images" / (std::string(name) + ".pgm"))) << name;
    EXPECT_TRUE(fs::exists(Scene() / "cameras" / (std::string(name) + ".txt"))) << name;
    EXPECT_TRUE(fs::exists(Scene() / "gt" / (std::string(name) + ".dnm"))) << name;
  }
  EXPECT_TRUE(fs::exists(Scene() / "gt" / "geometry.txt"));
  EXPECT_EQ(LoadDataset(Scene()).views.size(), 3u);
}

TEST_F(CliTest, ReconstructFuseAndEval) {
  const fs::path rec = Path("rec");
  ASSERT_EQ(RunTool("reconstruct " + Scene().string() + " --cycles 2" + kSmall + " --out " +
                    rec.string(),
                Log()),
            0)
      << ReadFile(Log());
  for (const char* name : {"0000", "0001", "0002"}) {
    EXPECT_TRUE(fs::exists(rec / (std::string(name) + ".dnm"))) << name;
  }
  ASSERT_TRUE(fs::exists(rec / "cloud.ply"));
  const FusedPointCloud cloud = ImportPly(rec / "cloud.ply");

  const fs::path fused = Path("fused.ply");
  ASSERT_EQ(RunTool("fuse " + Scene().string() + " " + rec.string() + " --out " + fused.string(), Log()),
            0)
      << ReadFile(Log());
  EXPECT_EQ(ReadFile(fused), ReadFile(rec / "cloud.ply"));

  const fs::path report = Path("report.txt");
  ASSERT_EQ(RunTool("eval " + Scene().string() + " " + rec.string() + " --spacing 0.05 --out " +
                    report.string(),
                Log()),
            0)
      << ReadFile(Log());
  const std::string text = ReadFile(report);
  EXPECT_NE(text.find("points: " + std::to_string(cloud.size())), std::string::npos) << text;
  EXPECT_NE(text.find("completeness: "), std::string::npos) << text;
  EXPECT_NE(text.find("validated[0002]: "), std::string::npos) << text;
}

TEST_F(CliTest, ReconstructIsByteDeterministic) {
  const std::string common = "reconstruct " + Scene().string() + " --cycles 1" + kSmall;
  ASSERT_EQ(RunTool(common + " --out " + Path("det_a").string(), Log()), 0) << ReadFile(Log());
  ASSERT_EQ(RunTool(common + " --threads 2 --out " + Path("det_b").string(), Log()), 0)
      << ReadFile(Log());
  for (const char* name : {"0000.dnm", "0001.dnm", "0002.dnm", "cloud.ply"}) {
    EXPECT_EQ(ReadFile(Path("det_a") / name), ReadFile(Path("det_b") / name)) << name;
  }
}

TEST_F(CliTest, DepthmapWritesOneMap) {
  const fs::path out = Path("single");
  ASSERT_EQ(RunTool("depthmap " + Scene().string() + " --view 1 --cycles 1" + kSmall + " --out " +
                    out.string(),
                Log()),
            0)
      << ReadFile(Log());
  EXPECT_TRUE(fs::exists(out / "0001.dnm"));
  EXPECT_FALSE(fs::exists(out / "0000.dnm"));
  EXPECT_NE(RunTool("depthmap " + Scene().string() + " --view 7 --out " + out.string(), Log()), 0);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const fs::path config = Path("run.ini");
  std::ofstream(config) << "cycles = 2\nfood-number = 4\niters = 2\nno-inter-prop = true\n";
  const fs::path from_file = Path("cfg_file");
  ASSERT_EQ(RunTool("reconstruct " + Scene().string() + " --config " + config.string() + " --out " +
                    from_file.string(),
                Log()),
            0)
      << ReadFile(Log());
  EXPECT_EQ(CountLines(from_file / "history.txt"), 1 + 2);

  const fs::path overridden = Path("cfg_flag");
  ASSERT_EQ(RunTool("reconstruct " + Scene().string() + " --config " + config.string() +
                    " --cycles 1 --out " + overridden.string(),
                Log()),
            0)
      << ReadFile(Log());
  EXPECT_EQ(CountLines(overridden / "history.txt"), 1 + 1);
}

TEST_F(CliTest, UsageErrorsExitNonzero) {
  EXPECT_NE(RunTool("", Log()), 0);
  EXPECT_NE(RunTool("reconstruct " + Scene().string() + " --bogus 1 --out x", Log()), 0);
  EXPECT_NE(RunTool("reconstruct " + Path("missing").string() + " --out x", Log()), 0);
  EXPECT_NE(RunTool("reconstruct " + Scene().string(), Log()), 0) << "missing --out";
  EXPECT_NE(RunTool("reconstruct " + Scene().string() + " --window 4 --out " + Path("bad").string(),
                Log()),
            0);
  const fs::path bad_config = Path("bad.ini");
  std::ofstream(bad_config) << "cycles = 1\nbogus-key = 3\n";
  EXPECT_NE(RunTool("reconstruct " + Scene().string() + " --config " + bad_config.string() +
                        " --out " + Path("bad_cfg").string(),
                    Log()),
            0);
  EXPECT_NE(RunTool("synth --kind cube --out " + Path("cube").string(), Log()), 0);
}

}  // namespace
}  // namespace ambc
