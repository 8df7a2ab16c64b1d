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

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "advdet/core.hpp"

namespace advdet {

inline double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

/// Area of (a \ b) U (b \ a).
inline double symmetric_difference_area(const BBox& a, const BBox& b) {
  return std::max(0.0, a.area() + b.area() - 2.0 * intersection_area(a, b));
}

struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> tp;  // (gt, pd)
  std::vector<std::size_t> fp;                          // pd indices
  std::vector<std::size_t> fn;                          // gt indices
};

/// One-to-one matching of predictions against ground truth. A pair is eligible
/// when IoU > min_overlap and the classes agree; eligible pairs are accepted
/// greedily by descending IoU (ties: lower gt index, then lower pd index).
/// `tp` is returned in acceptance order, `fp` and `fn` ascending.
inline MatchResult match(const FrameDetections& gt, const FrameDetections& pd,
                         const MetricConfig& cfg) {
  struct Candidate {
    double iou;
    std::size_t gt, pd;
  };
  const auto& g = gt.detections;
  const auto& p = pd.detections;

  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (g[i].class_id != p[j].class_id) continue;
      const double v = iou(g[i].bbox, p[j].bbox);
      if (v > cfg.min_overlap) candidates.push_back({v, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.iou != y.iou) return x.iou > y.iou;
              if (x.gt != y.gt) return x.gt < y.gt;
              return x.pd < y.pd;
            });

  MatchResult result;
  std::vector<bool> gt_used(g.size(), false), pd_used(p.size(), false);
  for (const Candidate& c : candidates) {
    if (gt_used[c.gt] || pd_used[c.pd]) continue;
    gt_used[c.gt] = pd_used[c.pd] = true;
    result.tp.emplace_back(c.gt, c.pd);
  }
  for (std::size_t j = 0; j < p.size(); ++j)
    if (!pd_used[j]) result.fp.push_back(j);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!gt_used[i]) result.fn.push_back(i);
  return result;
}

}  // namespace advdet
