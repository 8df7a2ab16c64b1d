/* Copyright 2026 The advdet Authors. All Rights Reserved.

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
#include <gtest/gtest.h>

#include <algorithm>

#include "advdet/wap.hpp"
#include "test_util.hpp"

namespace advdet {
namespace {

TEST(WeightFn, Values) {
  EXPECT_EQ(weight_fn(0.0, 0.5), 0.0);
  EXPECT_NEAR(weight_fn(1.0, 0.5), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(weight_fn(0.5, 0.5), 0.5, 1e-15);
}

TEST(WeightFn, StrictlyIncreasingBelowOne) {
  double prev = -1;
  for (double x = 0; x < 50; x += 0.25) {
    const double v = weight_fn(x, 0.5);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 1.0);
    prev = v;
  }
}

TEST(WapDistance, IdentityIsZero) {
  const FrameDetections f{0, {{{0, 0, 10, 10}, 0.9, 1}, {{30, 5, 50, 60}, 0.3, 2}}};
  const auto d = wap_distance(f, f, {});
  EXPECT_EQ(d.total, 0.0);
  EXPECT_EQ(wap_distance({}, {}, {}).total, 0.0);
}

TEST(WapDistance, ConfidenceOnlyDifference) {
  MetricConfig cfg;  // 0.5, 0.5, 0.1, 1, 1, 1
  const FrameDetections gt{0, {{{0, 0, 10, 10}, 0.9, 1}}};
  const FrameDetections pd{0, {{{0, 0, 10, 10}, 0.7, 1}}};
  const auto d = wap_distance(gt, pd, cfg);
  EXPECT_NEAR(d.d_tp, 0.02, 1e-12);
  EXPECT_EQ(d.d_fp, 0.0);
  EXPECT_EQ(d.d_fn, 0.0);
  EXPECT_NEAR(d.total, 0.02 / 3.0, 1e-12);
}

TEST(WapDistance, EmptyGroundTruth) {
  MetricConfig cfg;
  const FrameDetections pd{0, {{{0, 0, 10, 10}, 0.8, 1}}};
  const auto d = wap_distance({}, pd, cfg);
  EXPECT_NEAR(d.d_fp, 2.0 / 3.0 + 0.08, 1e-12);
  EXPECT_EQ(d.d_tp, 0.0);
  EXPECT_EQ(d.d_fn, 0.0);
  EXPECT_NEAR(d.total, (2.0 / 3.0 + 0.08) / 3.0, 1e-12);
}

TEST(WapDistance, TotalIsWeightedMean) {
  testing::Gen gen(8);
  MetricConfig cfg;
  cfg.alpha_tp = 2;
  cfg.alpha_fp = 0.5;
  cfg.alpha_fn = 1.5;
  for (int k = 0; k < 200; ++k) {
    const auto gt = gen.frame(6);
    const auto pd = gen.related(gt);
    const auto d = wap_distance(gt, pd, cfg);
    EXPECT_NEAR(d.total, (2 * d.d_tp + 0.5 * d.d_fp + 1.5 * d.d_fn) / 4.0, 1e-12);
  }
}

TEST(WapDistance, SymmetricUnderSwapWhenFpFnWeightsEqual) {
  testing::Gen gen(9);
  for (int k = 0; k < 500; ++k) {
    const auto x = gen.frame(8);
    const auto y = gen.related(x);
    const auto a = wap_distance(x, y, {});
    const auto b = wap_distance(y, x, {});
    EXPECT_NEAR(a.total, b.total, 1e-9);
    EXPECT_NEAR(a.d_fp, b.d_fn, 1e-9);
    EXPECT_NEAR(a.d_tp, b.d_tp, 1e-9);
  }
}

TEST(WapDistance, AppendingDisjointFalsePositiveNeverDecreases) {
  testing::Gen gen(10);
  for (int k = 0; k < 300; ++k) {
    const auto gt = gen.frame(6);  // boxes live in [0,200]^2
    auto pd = gen.related(gt, 0);
    const double before = wap_distance(gt, pd, {}).total;
    const double w = gen.uniform(2, 60);
    pd.detections.push_back({{300, 300, 300 + w, 300 + w}, gen.uniform(0.01, 1.0), gen.integer(0, 2)});
    EXPECT_GE(wap_distance(gt, pd, {}).total, before - 1e-12);
  }
}

TEST(WapDistance, SmallerFalsePositiveWeighsLess) {
  // One matched box plus one disjoint FP; shrinking the FP shrinks d_fp's area term.
  const Detection matched{{0, 0, 100, 100}, 0.9, 0};
  const FrameDetections gt{0, {matched}};
  MetricConfig cfg;
  cfg.gamma_cs = 0;
  double prev = 1.0;
  for (double side : {60.0, 40.0, 20.0, 10.0, 5.0, 1.0}) {
    const FrameDetections pd{0, {matched, {{200, 200, 200 + side, 200 + side}, 0.5, 0}}};
    const double d_fp = wap_distance(gt, pd, cfg).d_fp;
    EXPECT_LT(d_fp, prev);
    prev = d_fp;
  }
}

TEST(WapDistance, TermBounds) {
  testing::Gen gen(12);
  MetricConfig cfg;
  cfg.gamma_cs = 0.3;
  for (int k = 0; k < 500; ++k) {
    const auto gt = gen.frame(8);
    const auto pd = gen.related(gt);
    const auto d = wap_distance(gt, pd, cfg);
    const double conf_bound =
        cfg.gamma_cs * static_cast<double>(std::max(gt.detections.size(), pd.detections.size()));
    for (double term : {d.d_tp, d.d_fp, d.d_fn}) {
      EXPECT_GE(term, 0.0);
      EXPECT_LT(term, 1.0 + conf_bound);
    }
  }
}

}  // namespace
}  // namespace advdet
