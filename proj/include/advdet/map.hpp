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

// mAP between two single frames, the baseline distance (1 - mAP).

#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "advdet/core.hpp"
#include "advdet/matching.hpp"

namespace advdet {

/// All-point interpolated AP from a ranked TP/FP list and the number of
/// ground-truth boxes. Precision is made monotone from the right and
/// integrated over recall steps.
inline double average_precision(const std::vector<bool>& ranked_is_tp, std::size_t num_gt) {
  if (num_gt == 0) return 0.0;
  std::vector<double> precision, recall;
  precision.reserve(ranked_is_tp.size());
  recall.reserve(ranked_is_tp.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked_is_tp.size(); ++k) {
    if (ranked_is_tp[k]) ++tp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
  }
  for (std::size_t k = precision.size(); k-- > 1;)
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  double ap = 0, prev_recall = 0;
  for (std::size_t k = 0; k < precision.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

inline double frame_pair_map(const FrameDetections& gt, const FrameDetections& pd,
                             double min_overlap) {
  const auto& g = gt.detections;
  const auto& p = pd.detections;
  if (g.empty() && p.empty()) return 1.0;

  std::set<int> gt_classes, all_classes;
  for (const auto& d : g) gt_classes.insert(d.class_id);
  all_classes = gt_classes;
  for (const auto& d : p) all_classes.insert(d.class_id);

  double sum = 0;
  for (int cls : gt_classes) {
    std::vector<std::size_t> gt_idx, pd_idx;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i].class_id == cls) gt_idx.push_back(i);
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[j].class_id == cls) pd_idx.push_back(j);
    // Ties in confidence are broken by box geometry so that the result does
    // not depend on the input order.
    std::sort(pd_idx.begin(), pd_idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& da = p[a];
      const auto& db = p[b];
      if (da.confidence != db.confidence) return da.confidence > db.confidence;
      const auto ka = std::tie(da.bbox.x1, da.bbox.y1, da.bbox.x2, da.bbox.y2);
      const auto kb = std::tie(db.bbox.x1, db.bbox.y1, db.bbox.x2, db.bbox.y2);
      return ka < kb;
    });

    std::vector<bool> claimed(gt_idx.size(), false);
    std::vector<bool> ranked;
    ranked.reserve(pd_idx.size());
    for (std::size_t j : pd_idx) {
      double best = min_overlap;
      std::size_t best_k = gt_idx.size();
      for (std::size_t k = 0; k < gt_idx.size(); ++k) {
        if (claimed[k]) continue;
        const double v = iou(g[gt_idx[k]].bbox, p[j].bbox);
        if (v > best) {
          best = v;
          best_k = k;
        }
      }
      if (best_k < gt_idx.size()) {
        claimed[best_k] = true;
        ranked.push_back(true);
      } else {
        ranked.push_back(false);
      }
    }
    sum += average_precision(ranked, gt_idx.size());
  }
  // Classes that appear only in the prediction count as AP 0.
  return sum / static_cast<double>(all_classes.size());
}

inline double map_distance(const FrameDetections& gt, const FrameDetections& pd,
                           double min_overlap) {
  return 1.0 - frame_pair_map(gt, pd, min_overlap);
}

}  // namespace advdet
