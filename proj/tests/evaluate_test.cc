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

#include "segscore/evaluate.h"

#include <atomic>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "segscore/errors.h"
#include "segscore/mask_io.h"
#include "segscore/report_io.h"
#include "test_util.h"

namespace segscore {
namespace {

using testing::FromRows;

EvalConfig Config(int num_classes) {
  EvalConfig c;
  c.num_classes = num_classes;
  return c;
}

TEST(EvaluateImageTest, IgnoreGroundTruthHidesPrediction) {
  // The predicted pixel on the ignore column would otherwise bridge the two
  // halves of the prediction into one blob.
  const LabelMap gt = FromRows({"11x..", "11x.."});
  const LabelMap pred = FromRows({"11111", "....."});
  const DatasetStats stats = EvaluateImage(pred, gt, std::nullopt, Config(2), "a");
  const ClassStats& fg = stats.at(1);
  EXPECT_EQ(fg.true_positive, 2);
  EXPECT_EQ(fg.false_positive, 2);
  EXPECT_EQ(fg.false_negative, 2);
  ASSERT_EQ(fg.records.size(), 1u);
  EXPECT_EQ(fg.records[0].intersection, 2);
  EXPECT_EQ(fg.records[0].union_count, 4);
}

TEST(EvaluateImageTest, IgnoredPredictionIsAMiss) {
  const LabelMap gt = FromRows({"11", ".."});
  const LabelMap pred = FromRows({"1x", "x."});
  const DatasetStats stats = EvaluateImage(pred, gt, std::nullopt, Config(2), "a");
  EXPECT_EQ(stats.at(1).true_positive, 1);
  EXPECT_EQ(stats.at(1).false_negative, 1);
  EXPECT_EQ(stats.at(0).false_negative, 1);
  EXPECT_EQ(stats.at(0).false_positive, 0);
  EXPECT_DOUBLE_EQ(stats.at(1).records[0].iou, 0.5);
}

TEST(EvaluateImageTest, Errors) {
  const LabelMap gt = FromRows({"12"});
  EXPECT_THROW(EvaluateImage(FromRows({"1", "2"}), FromRows({"11"}), std::nullopt,
                             Config(3), "a"),
               DomainError);
  EXPECT_THROW(EvaluateImage(gt, gt, std::nullopt, Config(2), "a"), DomainError);
  EXPECT_THROW(EvaluateImage(FromRows({"12"}, 100), gt, std::nullopt, Config(3), "a"),
               DomainError);
  EXPECT_THROW(EvaluateImage(gt, gt, testing::InstancesFromRows({"11"}), Config(3), "a"),
               AnnotationMismatch);
}

TEST(EvaluateImageTest, InstanceMapSplitsTouchingObjects) {
  const LabelMap gt = FromRows({"1111"});
  const LabelMap pred = FromRows({"11.."});
  const DatasetStats merged = EvaluateImage(pred, gt, std::nullopt, Config(2), "a");
  const DatasetStats split =
      EvaluateImage(pred, gt, testing::InstancesFromRows({"1122"}), Config(2), "a");
  ASSERT_EQ(merged.at(1).records.size(), 1u);
  EXPECT_DOUBLE_EQ(merged.at(1).records[0].iou, 0.5);
  ASSERT_EQ(split.at(1).records.size(), 2u);
  EXPECT_DOUBLE_EQ(*ClassIaIou(split.at(1).records), 0.5);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (int workers : {0, 1, 3, 16}) {
    std::vector<std::atomic<int>> hits(100);
    ParallelFor(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  ParallelFor(0, 4, [](std::size_t) { FAIL(); });
  EXPECT_THROW(ParallelFor(10, 4,
                           [](std::size_t i) {
                             if (i == 7) throw FormatError("boom");
                           }),
               FormatError);
}

TEST(DefaultWorkerCountTest, ReadsEnvironment) {
  ::setenv("SEGSCORE_WORKERS", "3", 1);
  EXPECT_EQ(DefaultWorkerCount(), 3);
  ::setenv("SEGSCORE_WORKERS", "zero", 1);
  EXPECT_GE(DefaultWorkerCount(), 1);
  ::unsetenv("SEGSCORE_WORKERS");
  EXPECT_GE(DefaultWorkerCount(), 1);
}

class ManifestEvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(53);
    manifest_.num_classes = 4;
    for (int i = 0; i < 12; ++i) {
      const auto scene = oracle::RandomScene(rng, 40, 30, 4);
      const std::string id = "img" + std::to_string(i);
      WriteClassMask(dir_ / (id + "_gt.png"), testing::ToLabelMap(scene.gt));
      WriteClassMask(dir_ / (id + "_pred.png"), testing::ToLabelMap(scene.pred));
      manifest_.entries.push_back(
          {id, dir_ / (id + "_gt.png"), dir_ / (id + "_pred.png"), std::nullopt});
    }
  }
  testing::TempDir dir_{"eval"};
  DatasetManifest manifest_;
};

TEST_F(ManifestEvalTest, WorkerCountDoesNotChangeReport) {
  const std::string one =
      FormatReportJson(ComputeReport(EvaluateManifest(manifest_, Connectivity::kFour, 1)));
  for (int workers : {2, 5, 8}) {
    EXPECT_EQ(FormatReportJson(ComputeReport(
                  EvaluateManifest(manifest_, Connectivity::kFour, workers))),
              one);
  }
}

TEST_F(ManifestEvalTest, MatchesPerImageMerge) {
  DatasetStats expected(EvalConfig{4, kDefaultIgnoreId, Connectivity::kEight});
  for (const ManifestEntry& e : manifest_.entries) {
    expected.Merge(EvaluateImage(LoadClassMask(e.pred_mask_path, 4),
                                 LoadClassMask(e.gt_mask_path, 4), std::nullopt,
                                 expected.config(), e.image_id));
  }
  EXPECT_EQ(FormatReportJson(ComputeReport(
                EvaluateManifest(manifest_, Connectivity::kEight, 3))),
            FormatReportJson(ComputeReport(expected)));
}

TEST_F(ManifestEvalTest, FailuresAreCollected) {
  manifest_.entries[3].pred_mask_path = dir_ / "missing.png";
  manifest_.entries[9].gt_mask_path = dir_ / "missing.png";
  try {
    EvaluateManifest(manifest_, Connectivity::kFour, 4);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    ASSERT_EQ(e.failures().size(), 2u);
    EXPECT_EQ(e.failures()[0].rfind("img3:", 0), 0u);
    EXPECT_EQ(e.failures()[1].rfind("img9:", 0), 0u);
  }
}

}  // namespace
}  // namespace segscore
