// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tckr/splits.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace tckr {
namespace {

using ::testing::ElementsAre;

SplitConfig config_with(long models, std::uint64_t seed = 1) {
  SplitConfig c;
  c.num_models = models;
  c.seed = seed;
  return c;
}

TEST(ApportionTest, DefaultFractions) {
  EXPECT_THAT(apportion(10, {0.5, 0.1, 0.4}), ElementsAre(5, 1, 4));
  // Floors (6, 1, 4) leave one item; the largest remainder (0.8) is test.
  EXPECT_THAT(apportion(12, {0.5, 0.1, 0.4}), ElementsAre(6, 1, 5));
}

TEST(ApportionTest, TiesFavourTrainThenVal) {
  EXPECT_THAT(apportion(3, {0.5, 0.0, 0.5}), ElementsAre(2, 0, 1));
  EXPECT_THAT(apportion(1, {1.0 / 3, 1.0 / 3, 1.0 / 3}), ElementsAre(1, 0, 0));
}

TEST(ApportionTest, SizesWithinOneOfExact) {
  for (std::size_t pool = 3; pool < 500; ++pool) {
    for (const auto& f : {std::array<double, 3>{0.5, 0.1, 0.4},
                          std::array<double, 3>{0.7, 0.2, 0.1},
                          std::array<double, 3>{0.33, 0.33, 0.34}}) {
      const auto sizes = apportion(pool, f);
      ASSERT_EQ(sizes[0] + sizes[1] + sizes[2], pool);
      for (int k = 0; k < 3; ++k) {
        ASSERT_LT(std::abs(static_cast<double>(sizes[k]) - f[k] * pool), 1.0);
      }
    }
  }
}

TEST(PlanSplitsTest, RejectsSmallPool) {
  EXPECT_THROW(plan_splits(0, config_with(2)), ValidationError);
  EXPECT_THROW(plan_splits(2, config_with(2)), ValidationError);
  EXPECT_NO_THROW(plan_splits(3, config_with(2)));
}

TEST(PlanSplitsTest, RejectsBadConfig) {
  SplitConfig c = config_with(0);
  EXPECT_THROW(plan_splits(10, c), ValidationError);
  c = config_with(2);
  c.fractions = {0.5, 0.2, 0.4};
  EXPECT_THROW(plan_splits(10, c), ValidationError);
  c.fractions = {1.2, -0.1, -0.1};
  EXPECT_THROW(plan_splits(10, c), ValidationError);
}

TEST(PlanSplitsTest, PlansPartitionThePool) {
  for (std::size_t pool : {3u, 10u, 12u, 97u, 1000u}) {
    const auto plans = plan_splits(pool, config_with(16, pool));
    ASSERT_EQ(plans.size(), 16u);
    const auto sizes = apportion(pool, {0.5, 0.1, 0.4});
    for (const auto& p : plans) {
      ASSERT_EQ(p.train_idx.size(), sizes[0]);
      ASSERT_EQ(p.val_idx.size(), sizes[1]);
      ASSERT_EQ(p.test_idx.size(), sizes[2]);
      std::vector<std::size_t> all;
      all.insert(all.end(), p.train_idx.begin(), p.train_idx.end());
      all.insert(all.end(), p.val_idx.begin(), p.val_idx.end());
      all.insert(all.end(), p.test_idx.begin(), p.test_idx.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < pool; ++i) ASSERT_EQ(all[i], i);
    }
  }
}

TEST(PlanSplitsTest, Deterministic) {
  EXPECT_EQ(plan_splits(100, config_with(32, 9)), plan_splits(100, config_with(32, 9)));
  EXPECT_NE(plan_splits(100, config_with(4, 9)), plan_splits(100, config_with(4, 10)));
}

TEST(PlanSplitsTest, PlanDependsOnlyOnModelId) {
  const auto all = plan_splits(50, config_with(20, 5));
  EXPECT_EQ(plan_split(50, config_with(20, 5), 13), all[13]);
  EXPECT_EQ(plan_splits(50, config_with(20, 5), 4), all);
  // Fewer models is a prefix of more models.
  const auto few = plan_splits(50, config_with(5, 5));
  EXPECT_TRUE(std::equal(few.begin(), few.end(), all.begin()));
}

TEST(PlanSplitsTest, TrainSetsAreUniqueOnDefaults) {
  SplitConfig c;  // 256 models
  for (std::size_t pool : {20u, 100u}) {
    const auto plans = plan_splits(pool, c);
    std::set<std::vector<std::size_t>> distinct;
    for (const auto& p : plans) distinct.insert(p.train_idx);
    EXPECT_EQ(distinct.size(), plans.size()) << "pool " << pool;
  }
}

TEST(MembershipMatrixTest, SinglePlan) {
  SplitPlan p;
  p.train_idx = {0, 1};
  p.test_idx = {2};
  const BoolMatrix m = membership_matrix({p}, 3);
  ASSERT_EQ(m.rows, 1u);
  EXPECT_TRUE(m(0, 0));
  EXPECT_TRUE(m(0, 1));
  EXPECT_FALSE(m(0, 2));
}

TEST(MembershipMatrixTest, ZeroPlans) {
  const BoolMatrix m = membership_matrix({}, 5);
  EXPECT_EQ(m.rows, 0u);
  EXPECT_EQ(m.cols, 5u);
  EXPECT_TRUE(m.cells.empty());
}

TEST(MembershipMatrixTest, OutOfRange) {
  SplitPlan p;
  p.train_idx = {0, 7};
  EXPECT_THROW(membership_matrix({p}, 3), ValidationError);
}

TEST(MembershipMatrixTest, ColumnInCountsAverageHalfTheModels) {
  SplitConfig c;  // 256 models, train fraction 0.5
  c.seed = 42;
  const auto plans = plan_splits(1000, c);
  const BoolMatrix m = membership_matrix(plans, 1000);
  double total = 0.0;
  for (std::size_t i = 0; i < m.cols; ++i) {
    for (std::size_t r = 0; r < m.rows; ++r) total += m(r, i) ? 1.0 : 0.0;
  }
  const double mean = total / 1000.0;
  EXPECT_NEAR(mean, 128.0, 3.0);
}

TEST(PlansCsvTest, Layout) {
  const auto plans = plan_splits(10, config_with(2, 3));
  std::ostringstream out;
  write_plans_csv(plans, 10, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "model_id,example_id,part");
  int rows = 0;
  int train = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.ends_with(",train")) ++train;
  }
  EXPECT_EQ(rows, 20);
  EXPECT_EQ(train, 10);
}

}  // namespace
}  // namespace tckr
