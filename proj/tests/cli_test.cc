/* Copyright 2026 The segscore Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "segscore/binary_io.h"
#include "segscore/manifest.h"
#include "segscore/mask_io.h"
#include "test_util.h"

namespace segscore {
namespace {

using testing::FromRows;
using testing::TempDir;

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult RunCli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " SEGSCORE_CLI_PATH " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
    result.output.append(buf.data(), n);
  }
  const int status = ::pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  // Writes one image whose prediction equals its ground truth.
  std::string PerfectManifest() {
    const LabelMap gt = FromRows({
        "11....",
        "11..22",
        "....22",
    });
    WriteClassMask(dir_ / "gt.png", gt);
    WriteClassMask(dir_ / "pred.png", gt);
    DatasetManifest m;
    m.num_classes = 3;
    m.entries.push_back({"only", dir_ / "gt.png", dir_ / "pred.png", std::nullopt});
    WriteManifest(dir_ / "m.json", m);
    return (dir_ / "m.json").string();
  }

  TempDir dir_{"cli"};
};

TEST_F(CliTest, EvaluatePerfectPrediction) {
  const std::string manifest = PerfectManifest();
  const auto out = dir_ / "r.json";
  const RunResult r =
      RunCli("evaluate --manifest " + manifest + " --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("mIoU 1.0000 IA-mIoU 1.0000"), std::string::npos) << r.output;
  EXPECT_NE(Slurp(out).find("\"ia_miou\": 1.000000"), std::string::npos);

  const RunResult csv = RunCli("evaluate --format csv --manifest " + manifest +
                            " --out " + (dir_ / "r.csv").string());
  ASSERT_EQ(csv.code, 0) << csv.output;
  EXPECT_EQ(Slurp(dir_ / "r.csv").rfind("class_id,iou,tilde_iou", 0), 0u);
}

TEST_F(CliTest, MissingInputIsExitThreeAndNamesPath) {
  const std::string missing = (dir_ / "nowhere.json").string();
  const RunResult r = RunCli("evaluate --manifest " + missing + " --out " +
                          (dir_ / "r.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find(missing), std::string::npos) << r.output;
}

TEST_F(CliTest, MissingMaskIsExitThree) {
  DatasetManifest m;
  m.num_classes = 3;
  m.entries.push_back({"a", dir_ / "gt.png", dir_ / "pred.png", std::nullopt});
  WriteManifest(dir_ / "m.json", m);
  const RunResult r = RunCli("evaluate --manifest " + (dir_ / "m.json").string() +
                          " --out " + (dir_ / "r.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find("gt.png"), std::string::npos) << r.output;
}

TEST_F(CliTest, UsageErrorsAreExitTwo) {
  EXPECT_EQ(RunCli("evaluate --bogus").code, 2);
  EXPECT_EQ(RunCli("").code, 2);
  EXPECT_EQ(RunCli("corner-sim --case Q --out x.csv").code, 2);
  EXPECT_EQ(RunCli("gen-weights --manifest m --out d --tau 0.5").code, 2);
  EXPECT_EQ(RunCli("evaluate --manifest m --out o --connectivity 6").code, 2);
  EXPECT_EQ(RunCli("--help").code, 0);
}

TEST_F(CliTest, ConnectivityChangesDiagonalBlobs) {
  // Diagonal touching squares: two instances under 4-connectivity, one
  // under 8.
  const LabelMap gt = FromRows({
      "11..",
      "11..",
      "..11",
      "..11",
  });
  const LabelMap pred = FromRows({
      "11..",
      "11..",
      "....",
      "....",
  });
  WriteClassMask(dir_ / "gt.png", gt);
  WriteClassMask(dir_ / "pred.png", pred);
  DatasetManifest m;
  m.num_classes = 2;
  m.entries.push_back({"d", dir_ / "gt.png", dir_ / "pred.png", std::nullopt});
  WriteManifest(dir_ / "m.json", m);
  const std::string base =
      "evaluate --manifest " + (dir_ / "m.json").string() + " --out " +
      (dir_ / "r.json").string();
  const RunResult four = RunCli(base + " --connectivity 4");
  ASSERT_EQ(four.code, 0) << four.output;
  EXPECT_NE(Slurp(dir_ / "r.json").find("\"small\": 2"), std::string::npos);
  const RunResult eight = RunCli(base + " --connectivity 8");
  ASSERT_EQ(eight.code, 0) << eight.output;
  EXPECT_NE(Slurp(dir_ / "r.json").find("\"small\": 1"), std::string::npos);
  EXPECT_EQ(Slurp(dir_ / "r.json").find("\"small\": 2"), std::string::npos);
  EXPECT_NE(Slurp(dir_ / "r.json").find("\"connectivity\": 8"), std::string::npos);
}

TEST_F(CliTest, WorkerCountDoesNotChangeOutput) {
  std::mt19937_64 rng(59);
  DatasetManifest m;
  m.num_classes = 4;
  for (int i = 0; i < 9; ++i) {
    const auto scene = oracle::RandomScene(rng, 32, 32, 4);
    const std::string id = "s" + std::to_string(i);
    WriteClassMask(dir_ / (id + "g.png"), testing::ToLabelMap(scene.gt));
    WriteClassMask(dir_ / (id + "p.png"), testing::ToLabelMap(scene.pred));
    m.entries.push_back({id, dir_ / (id + "g.png"), dir_ / (id + "p.png"), std::nullopt});
  }
  WriteManifest(dir_ / "m.json", m);
  const std::string base = "evaluate --manifest " + (dir_ / "m.json").string();
  ASSERT_EQ(RunCli(base + " --workers 1 --out " + (dir_ / "w1.json").string()).code, 0);
  ASSERT_EQ(RunCli(base + " --workers 4 --out " + (dir_ / "w4.json").string()).code, 0);
  ASSERT_EQ(RunCli(base + " --out " + (dir_ / "we.json").string(), "SEGSCORE_WORKERS=3")
                .code,
            0);
  const std::string one = Slurp(dir_ / "w1.json");
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(Slurp(dir_ / "w4.json"), one);
  EXPECT_EQ(Slurp(dir_ / "we.json"), one);
}

TEST_F(CliTest, GenWeightsWritesMapsAndPreviews) {
  const std::string manifest = PerfectManifest();
  const RunResult r = RunCli("gen-weights --manifest " + manifest + " --out " +
                          (dir_ / "w").string() + " --tau 3 --preview");
  ASSERT_EQ(r.code, 0) << r.output;
  const WeightMap w = LoadWeightMap(dir_ / "w" / "only.wmap");
  EXPECT_EQ(w.width, 6);
  EXPECT_EQ(w.height, 3);
  EXPECT_FLOAT_EQ(w.at(0, 0), 1.0f);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "w" / "only_weights.png"));
}

TEST_F(CliTest, AnalyzeDist) {
  const std::string manifest = PerfectManifest();
  const RunResult r = RunCli("analyze-dist --manifest " + manifest + " --out " +
                          (dir_ / "d.csv").string() + " --format csv");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("Small 2 (100.0%)"), std::string::npos) << r.output;
}

TEST_F(CliTest, CornerAndRemovalSims) {
  const RunResult corner =
      RunCli("corner-sim --case B --out " + (dir_ / "b.csv").string());
  ASSERT_EQ(corner.code, 0) << corner.output;
  const std::string csv = Slurp(dir_ / "b.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_NE(csv.find("\n10,"), std::string::npos);

  const RunResult removal =
      RunCli("removal-sim --sides 10,20,30 --out " + (dir_ / "r.csv").string());
  ASSERT_EQ(removal.code, 0) << removal.output;
  const std::string rows = Slurp(dir_ / "r.csv");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 5);
}

TEST_F(CliTest, EwcPenalty) {
  WriteParamVector(dir_ / "t.bin", ParamVector{{1.0f, 2.0f}});
  WriteParamVector(dir_ / "s.bin", ParamVector{{0.0f, 2.0f}});
  WriteFisherDiagonal(dir_ / "f.bin", FisherDiagonal{{0.02, 9.0}, 1});
  const std::string args = "ewc-penalty --theta " + (dir_ / "t.bin").string() +
                           " --theta-star " + (dir_ / "s.bin").string() +
                           " --fisher " + (dir_ / "f.bin").string();
  RunResult r = RunCli(args);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(r.output, "5.000000\n");
  r = RunCli(args + " --lambda 0");
  EXPECT_EQ(r.output, "0.000000\n");
  const std::string same = "ewc-penalty --theta " + (dir_ / "t.bin").string() +
                           " --theta-star " + (dir_ / "t.bin").string() +
                           " --fisher " + (dir_ / "f.bin").string();
  EXPECT_EQ(RunCli(same).output, "0.000000\n");
  EXPECT_EQ(RunCli("ewc-penalty --theta " + (dir_ / "t.bin").string() +
                " --theta-star " + (dir_ / "s.bin").string() + " --fisher " +
                (dir_ / "nope.bin").string())
                .code,
            3);
}

}  // namespace
}  // namespace segscore
