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

#include "segscore/assignment.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracle/reference_oracle.h"
#include "segscore/errors.h"
#include "test_util.h"

namespace segscore {
namespace {

using oracle::Rational;
using testing::FromRows;

InstanceSet Instances(const LabelMap& gt) {
  return BuildGtInstances(gt, std::nullopt, Connectivity::kFour);
}

// Two 4x6 instances with a two-column gap; the prediction covers 16 pixels
// of the left one, 8 of the right one, and 9 pixels outside both.
struct SplitFixture {
  LabelMap gt = FromRows({
      "1111..1111..",
      "1111..1111..",
      "1111..1111..",
      "1111..1111..",
      "1111..1111..",
      "1111..1111..",
      "............",
      "............",
  });
  LabelMap pred = FromRows({
      "............",
      "............",
      "11111111....",
      "11111111....",
      "11111111....",
      "11111111....",
      "....1.......",
      "............",
  });
};

TEST(OverlapTableTest, DisjointAndContained) {
  const LabelMap gt = FromRows({
      "11111.....",
      "11111.....",
  });
  const LabelMap pred = FromRows({
      ".11....11.",
      ".11....11.",
  });
  const auto blobs = ConnectedComponents(pred, 1, Connectivity::kFour);
  const InstanceSet inst = Instances(gt);
  const OverlapTable table = ComputeOverlapTable(blobs, inst, 1);
  ASSERT_EQ(blobs.size(), 2u);
  EXPECT_EQ(table.at(0, 0), 4);
  EXPECT_EQ(table.at(1, 0), 0);
  EXPECT_EQ(table.entries().size(), 1u);
}

TEST(OverlapTableTest, StraddlingBlobMatchesSixteenToEight) {
  SplitFixture f;
  const auto blobs = ConnectedComponents(f.pred, 1, Connectivity::kFour);
  ASSERT_EQ(blobs.size(), 1u);
  EXPECT_EQ(blobs[0].area(), 33);
  const InstanceSet inst = Instances(f.gt);
  ASSERT_EQ(inst.instances.size(), 2u);
  const OverlapTable table = ComputeOverlapTable(blobs, inst, 1);
  EXPECT_EQ(table.at(0, 0), 16);
  EXPECT_EQ(table.at(0, 1), 8);
}

TEST(OverlapTableTest, EmptyInputs) {
  const InstanceSet empty;
  EXPECT_TRUE(ComputeOverlapTable({}, empty, 1).entries().empty());
}

TEST(ApportionCountsTest, SoleRecipientTakesEverything) {
  const InstanceShare shares[] = {{0, 5}};
  const auto out = ApportionCounts(12, shares);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].assigned, 12);
}

TEST(ApportionCountsTest, ExactQuotasFromTwoToOneRatio) {
  const InstanceShare shares[] = {{0, 16}, {1, 8}};
  const auto out = ApportionCounts(33, shares);
  EXPECT_EQ(out[0].assigned, 22);
  EXPECT_EQ(out[1].assigned, 11);
}

TEST(ApportionCountsTest, RemainderTieGoesToLargerIntersection) {
  const InstanceShare shares[] = {{0, 3}, {1, 1}};
  auto out = ApportionCounts(6, shares);
  EXPECT_EQ(out[0].assigned, 5);
  EXPECT_EQ(out[1].assigned, 1);

  // Equal intersections: the smaller construction index wins.
  const InstanceShare even[] = {{4, 2}, {2, 2}};
  out = ApportionCounts(5, even);
  EXPECT_EQ(out[0].assigned, 2);
  EXPECT_EQ(out[1].assigned, 3);
}

TEST(ApportionCountsTest, RejectsInvalidOverlaps) {
  const InstanceShare zero[] = {{0, 0}, {1, 0}};
  EXPECT_THROW(ApportionCounts(4, zero), DomainError);
  const InstanceShare too_many[] = {{0, 3}, {1, 3}};
  EXPECT_THROW(ApportionCounts(5, too_many), DomainError);
  const InstanceShare negative[] = {{0, -1}, {1, 3}};
  EXPECT_THROW(ApportionCounts(5, negative), DomainError);
}

struct RandomCase {
  std::int64_t area;
  std::vector<InstanceShare> shares;
};

RandomCase MakeCase(std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  RandomCase c;
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    const auto k = std::uniform_int_distribution<std::int64_t>(i == 0 ? 1 : 0, 40)(rng);
    c.shares.push_back({static_cast<std::size_t>(i), k});
    total += k;
  }
  c.area = total + std::uniform_int_distribution<std::int64_t>(0, 60)(rng);
  return c;
}

// Each recipient's count is its exact proportional target rounded up or
// down, and the counts sum to the blob area.
TEST(ApportionCountsTest, HamiltonQuotaBoundsAgainstRationalSplit) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const RandomCase c = MakeCase(rng);
    const auto out = ApportionCounts(c.area, c.shares);
    std::int64_t total = 0;
    for (const auto& s : c.shares) total += s.intersection;
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const Rational target =
          Rational(c.area) * Rational(c.shares[k].intersection) / Rational(total);
      const Rational got(out[k].assigned);
      EXPECT_LT(abs(got - target), Rational(1)) << "trial " << trial;
      EXPECT_GE(out[k].assigned, c.shares[k].intersection);
      sum += out[k].assigned;
    }
    EXPECT_EQ(sum, c.area);
  }
}

TEST(ApportionCountsTest, RelabelingKeepsMultiset) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    RandomCase c = MakeCase(rng);
    auto pairs = [&](const std::vector<InstanceShare>& shares) {
      const auto out = ApportionCounts(c.area, shares);
      std::vector<std::pair<std::int64_t, std::int64_t>> v;
      for (std::size_t k = 0; k < out.size(); ++k) {
        v.emplace_back(out[k].assigned, shares[k].intersection);
      }
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto before = pairs(c.shares);
    std::vector<std::size_t> ids(c.shares.size());
    std::iota(ids.begin(), ids.end(), 10);
    std::shuffle(ids.begin(), ids.end(), rng);
    auto relabeled = c.shares;
    for (std::size_t k = 0; k < ids.size(); ++k) relabeled[k].instance = ids[k];
    std::shuffle(relabeled.begin(), relabeled.end(), rng);
    EXPECT_EQ(pairs(relabeled), before);
  }
}

TEST(ApportionCountsTest, DoublingWithIntegralQuotasDoubles) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 4000 && checked < 300; ++trial) {
    const RandomCase c = MakeCase(rng);
    std::int64_t total = 0;
    for (const auto& s : c.shares) total += s.intersection;
    const std::int64_t unassigned = c.area - total;
    const bool integral = std::all_of(c.shares.begin(), c.shares.end(), [&](auto& s) {
      return (unassigned * s.intersection) % total == 0;
    });
    if (!integral) continue;
    ++checked;
    auto doubled = c.shares;
    for (auto& s : doubled) s.intersection *= 2;
    const auto once = ApportionCounts(c.area, c.shares);
    const auto twice = ApportionCounts(2 * c.area, doubled);
    for (std::size_t k = 0; k < once.size(); ++k) {
      const Rational exact = Rational(c.shares[k].intersection) +
                             Rational(unassigned * c.shares[k].intersection, total);
      EXPECT_EQ(Rational(once[k].assigned), exact);
      EXPECT_EQ(twice[k].assigned, 2 * once[k].assigned);
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(ApportionCountsTest, MonotoneInOwnIntersection) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    RandomCase c = MakeCase(rng);
    std::int64_t total = 0;
    for (const auto& s : c.shares) total += s.intersection;
    if (total == c.area) continue;  // no room to grow an intersection
    const std::size_t k =
        std::uniform_int_distribution<std::size_t>(0, c.shares.size() - 1)(rng);
    const auto before = ApportionCounts(c.area, c.shares);
    c.shares[k].intersection += 1;
    const auto after = ApportionCounts(c.area, c.shares);
    EXPECT_GE(after[k].assigned, before[k].assigned) << "trial " << trial;
  }
}

TEST(AssignImageTest, PerfectPrediction) {
  const LabelMap gt = FromRows({
      "11..22",
      "11..22",
      "......",
      "..111.",
  });
  const InstanceSet inst = Instances(gt);
  const auto results = AssignImage(gt, inst, Connectivity::kFour);
  ASSERT_EQ(results.size(), 2u);
  for (const AssignmentResult& r : results) {
    EXPECT_EQ(r.unmatched_fp_count, 0);
    for (const InstanceAssignment& a : r.instances) {
      EXPECT_EQ(a.assigned, inst.instances[a.instance].area());
      EXPECT_EQ(a.intersection, inst.instances[a.instance].area());
    }
  }
}

TEST(AssignImageTest, SplitFixtureApportionsTwentyTwoToEleven) {
  SplitFixture f;
  const auto results = AssignImage(f.pred, Instances(f.gt), Connectivity::kFour);
  ASSERT_EQ(results.size(), 1u);
  ASSERT_EQ(results[0].instances.size(), 2u);
  EXPECT_EQ(results[0].instances[0].assigned, 22);
  EXPECT_EQ(results[0].instances[0].intersection, 16);
  EXPECT_EQ(results[0].instances[1].assigned, 11);
  EXPECT_EQ(results[0].instances[1].intersection, 8);
  EXPECT_EQ(results[0].predicted_count, 33);
}

TEST(AssignImageTest, ManyBlobsAccumulateIntoOneInstance) {
  const LabelMap gt = FromRows({
      "11111",
      "11111",
      "11111",
      "11111",
  });
  const LabelMap pred = FromRows({
      "11.11",
      "11.11",
      "...11",
      ".....",
  });
  const auto results = AssignImage(pred, Instances(gt), Connectivity::kFour);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].instances[0].assigned, 10);
  EXPECT_EQ(results[0].instances[0].intersection, 10);
  EXPECT_EQ(results[0].unmatched_fp_count, 0);
}

TEST(AssignImageTest, BlobMissingEveryInstanceIsFalsePositive) {
  const LabelMap gt = FromRows({
      "11.......",
      "11.......",
      ".........",
      ".........",
  });
  const LabelMap pred = FromRows({
      "......111",
      "......111",
      "......111",
      ".........",
  });
  const auto results = AssignImage(pred, Instances(gt), Connectivity::kFour);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].unmatched_fp_count, 9);
  EXPECT_EQ(results[0].instances[0].assigned, 0);
  EXPECT_EQ(results[0].instances[0].intersection, 0);
}

TEST(AssignImageTest, OtherClassGroundTruthIsNotAnOverlap) {
  const LabelMap gt = FromRows({"2222..11"});
  const LabelMap pred = FromRows({"1111..11"});
  const auto results = AssignImage(pred, Instances(gt), Connectivity::kFour);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].class_id, 1);
  EXPECT_EQ(results[0].unmatched_fp_count, 4);
  EXPECT_EQ(results[0].instances[0].assigned, 2);
  EXPECT_EQ(results[1].class_id, 2);
  EXPECT_EQ(results[1].instances[0].assigned, 0);
}

TEST(AssignImageTest, ShapeMismatch) {
  const LabelMap gt(4, 4);
  EXPECT_THROW(AssignImage(LabelMap(4, 5), Instances(gt), Connectivity::kFour),
               DomainError);
}

TEST(AssignImageTest, ConservationOnRandomScenes) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto scene = oracle::RandomScene(rng, 32, 32, 4);
    const LabelMap gt = testing::ToLabelMap(scene.gt);
    LabelMap pred = testing::ToLabelMap(scene.pred);
    for (std::size_t p = 0; p < gt.size(); ++p) {
      if (gt.IsIgnored(p)) pred.mutable_labels()[p] = gt.ignore_id();
    }
    for (auto policy : {Connectivity::kFour, Connectivity::kEight}) {
      const auto results = AssignImage(pred, BuildGtInstances(gt, std::nullopt, policy),
                                       policy);
      std::map<ClassId, std::int64_t> predicted;
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (pred[p] != kBackground && !pred.IsIgnored(p)) ++predicted[pred[p]];
      }
      for (const AssignmentResult& r : results) {
        std::int64_t sum = r.unmatched_fp_count;
        for (const auto& a : r.instances) {
          EXPECT_LE(a.intersection, a.assigned);
          sum += a.assigned;
        }
        EXPECT_EQ(sum, r.predicted_count);
        EXPECT_EQ(r.predicted_count, predicted[r.class_id]);
      }
    }
  }
}

}  // namespace
}  // namespace segscore
