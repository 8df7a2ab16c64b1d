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
#pragma once

// Weighted-AP (wAP) distance between the detections of two frames. The first
// frame plays the role of ground truth, the second of prediction.
//
// Each of the TP, FP and FN partitions contributes an area term, damped by
// F(x) = x / (x + a) so that small boxes weigh less, plus a confidence term
// scaled by gamma_cs:
//
//   d_tp = F(sum_tp DA(gt_i, pd_j) / (A_pd + A_gt)) + gamma_cs * sum_tp |c_i - c_j|
//   d_fp = F(sum_fp area(pd_i) / A_pd)              + gamma_cs * sum_fp c_i
//   d_fn = F(sum_fn area(gt_i) / A_gt)              + gamma_cs * sum_fn c_i
//
// where DA is the symmetric-difference area and A_gt, A_pd are total box
// areas. A ratio with a zero denominator is 0. The final distance is the
// alpha-weighted mean of the three terms.

#include <cmath>

#include "advdet/core.hpp"
#include "advdet/matching.hpp"

namespace advdet {

struct DistanceBreakdown {
  double d_tp = 0;
  double d_fp = 0;
  double d_fn = 0;
  double total = 0;
};

inline double weight_fn(double x, double a) { return x / (x + a); }

namespace detail {

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace detail

inline DistanceBreakdown wap_distance(const FrameDetections& gt, const FrameDetections& pd,
                                      const MetricConfig& cfg, const MatchResult& m) {
  const auto& g = gt.detections;
  const auto& p = pd.detections;

  double area_gt = 0, area_pd = 0;
  for (const auto& d : g) area_gt += d.bbox.area();
  for (const auto& d : p) area_pd += d.bbox.area();

  double tp_area = 0, tp_conf = 0;
  for (auto [i, j] : m.tp) {
    tp_area += symmetric_difference_area(g[i].bbox, p[j].bbox);
    tp_conf += std::abs(g[i].confidence - p[j].confidence);
  }
  double fp_area = 0, fp_conf = 0;
  for (auto j : m.fp) {
    fp_area += p[j].bbox.area();
    fp_conf += p[j].confidence;
  }
  double fn_area = 0, fn_conf = 0;
  for (auto i : m.fn) {
    fn_area += g[i].bbox.area();
    fn_conf += g[i].confidence;
  }

  DistanceBreakdown out;
  out.d_tp = weight_fn(detail::safe_ratio(tp_area, area_pd + area_gt), cfg.a) +
             cfg.gamma_cs * tp_conf;
  out.d_fp = weight_fn(detail::safe_ratio(fp_area, area_pd), cfg.a) + cfg.gamma_cs * fp_conf;
  out.d_fn = weight_fn(detail::safe_ratio(fn_area, area_gt), cfg.a) + cfg.gamma_cs * fn_conf;
  out.total = (cfg.alpha_tp * out.d_tp + cfg.alpha_fp * out.d_fp + cfg.alpha_fn * out.d_fn) /
              (cfg.alpha_tp + cfg.alpha_fp + cfg.alpha_fn);
  return out;
}

inline DistanceBreakdown wap_distance(const FrameDetections& gt, const FrameDetections& pd,
                                      const MetricConfig& cfg) {
  return wap_distance(gt, pd, cfg, match(gt, pd, cfg));
}

}  // namespace advdet
