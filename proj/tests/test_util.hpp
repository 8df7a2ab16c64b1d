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

// Random generators and brute-force oracles shared by the unit and
// acceptance suites. The oracles deliberately avoid the library's code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "advdet/core.hpp"
#include "advdet/tracker.hpp"

namespace advdet::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  BBox box(double canvas = 200.0, double min_side = 4.0, double max_side = 80.0) {
    const double w = uniform(min_side, max_side);
    const double h = uniform(min_side, max_side);
    const double x = uniform(0.0, canvas - w);
    const double y = uniform(0.0, canvas - h);
    return {x, y, x + w, y + h};
  }

  BBox jitter(const BBox& b, double amount) {
    BBox j{b.x1 + uniform(-amount, amount), b.y1 + uniform(-amount, amount),
           b.x2 + uniform(-amount, amount), b.y2 + uniform(-amount, amount)};
    if (j.x2 <= j.x1 + 0.5) j.x2 = j.x1 + 0.5;
    if (j.y2 <= j.y1 + 0.5) j.y2 = j.y1 + 0.5;
    return j;
  }

  Detection detection(int num_classes = 3) {
    return {box(), uniform(0.0, 1.0), integer(0, num_classes - 1)};
  }

  FrameDetections frame(int max_boxes = 8, int num_classes = 3) {
    FrameDetections f;
    f.frame_id = integer(0, 1000);
    const int n = integer(0, max_boxes);
    for (int i = 0; i < n; ++i) f.detections.push_back(detection(num_classes));
    return f;
  }

  /// A prediction frame correlated with `gt`: jittered copies (some with the
  /// class changed, some dropped) plus random extras.
  FrameDetections related(const FrameDetections& gt, int max_extra = 3, int num_classes = 3) {
    FrameDetections pd;
    pd.frame_id = gt.frame_id;
    for (const auto& d : gt.detections) {
      if (uniform(0, 1) < 0.2) continue;
      Detection c = d;
      c.bbox = jitter(d.bbox, uniform(0.0, 6.0));
      c.confidence = std::clamp(d.confidence + uniform(-0.2, 0.2), 0.0, 1.0);
      if (uniform(0, 1) < 0.1) c.class_id = integer(0, num_classes - 1);
      pd.detections.push_back(c);
    }
    const int extra = integer(0, max_extra);
    for (int i = 0; i < extra; ++i) pd.detections.push_back(detection(num_classes));
    std::shuffle(pd.detections.begin(), pd.detections.end(), rng_);
    return pd;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// IoU by direct corner arithmetic.
inline double oracle_iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = ix * iy;
  const double uni = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

/// Exhaustive search over all one-to-one matchings of eligible pairs
/// (IoU > min_overlap, same class) for the one with maximal total IoU.
inline std::set<std::pair<std::size_t, std::size_t>> oracle_max_iou_matching(
    const FrameDetections& gt, const FrameDetections& pd, double min_overlap) {
  const auto& g = gt.detections;
  const auto& p = pd.detections;
  std::vector<std::vector<double>> w(g.size(), std::vector<double>(p.size(), -1.0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (g[i].class_id == p[j].class_id) {
        const double v = oracle_iou(g[i].bbox, p[j].bbox);
        if (v > min_overlap) w[i][j] = v;
      }

  std::set<std::pair<std::size_t, std::size_t>> best, current;
  double best_total = -1.0;
  std::vector<bool> pd_used(p.size(), false);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double total) {
    if (i == g.size()) {
      if (total > best_total) {
        best_total = total;
        best = current;
      }
      return;
    }
    rec(i + 1, total);  // gt i unmatched
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (pd_used[j] || w[i][j] < 0) continue;
      pd_used[j] = true;
      current.insert({i, j});
      rec(i + 1, total + w[i][j]);
      current.erase({i, j});
      pd_used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

/// AP by summing, over each true positive in rank order, 1/num_gt times the
/// best precision reached at that rank or later.
inline double oracle_average_precision(const std::vector<bool>& ranked_is_tp, std::size_t num_gt) {
  if (num_gt == 0) return 0.0;
  const std::size_t n = ranked_is_tp.size();
  std::vector<double> prec(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += ranked_is_tp[k] ? 1 : 0;
    prec[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  double ap = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!ranked_is_tp[k]) continue;
    double best = 0;
    for (std::size_t m = k; m < n; ++m) best = std::max(best, prec[m]);
    ap += best / static_cast<double>(num_gt);
  }
  return ap;
}

/// Frame-pair mAP computed by brute force: predictions ranked by confidence
/// (ties by box corners),
/// each matched to the best unclaimed same-class gt above the threshold.
inline double oracle_frame_map(const FrameDetections& gt, const FrameDetections& pd,
                               double min_overlap) {
  if (gt.detections.empty() && pd.detections.empty()) return 1.0;
  std::set<int> gt_classes, all;
  for (const auto& d : gt.detections) gt_classes.insert(d.class_id);
  all = gt_classes;
  for (const auto& d : pd.detections) all.insert(d.class_id);
  double sum = 0;
  for (int c : gt_classes) {
    std::vector<BBox> gts;
    for (const auto& d : gt.detections)
      if (d.class_id == c) gts.push_back(d.bbox);
    std::vector<Detection> pds;
    for (const auto& d : pd.detections)
      if (d.class_id == c) pds.push_back(d);
    // Equal confidences rank by (x1, y1, x2, y2) ascending.
    std::sort(pds.begin(), pds.end(), [](const Detection& a, const Detection& b) {
      if (a.confidence != b.confidence) return a.confidence > b.confidence;
      const double ka[4] = {a.bbox.x1, a.bbox.y1, a.bbox.x2, a.bbox.y2};
      const double kb[4] = {b.bbox.x1, b.bbox.y1, b.bbox.x2, b.bbox.y2};
      return std::lexicographical_compare(ka, ka + 4, kb, kb + 4);
    });
    std::vector<bool> claimed(gts.size(), false), ranked;
    for (const auto& d : pds) {
      int best = -1;
      double best_v = min_overlap;
      for (std::size_t k = 0; k < gts.size(); ++k) {
        if (claimed[k]) continue;
        const double v = oracle_iou(gts[k], d.bbox);
        if (v > best_v) {
          best_v = v;
          best = static_cast<int>(k);
        }
      }
      if (best >= 0) claimed[static_cast<std::size_t>(best)] = true;
      ranked.push_back(best >= 0);
    }
    sum += oracle_average_precision(ranked, gts.size());
  }
  return sum / static_cast<double>(all.size());
}

/// Alarm at t iff the `window` most recent distances, all present, exceed theta.
inline std::vector<bool> oracle_window_alarms(const std::vector<double>& d, double theta, int window) {
  std::vector<bool> out(d.size(), false);
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (t + 1 < static_cast<std::size_t>(window)) continue;
    bool all = true;
    for (std::size_t k = t + 1 - static_cast<std::size_t>(window); k <= t; ++k) all = all && d[k] > theta;
    out[t] = all;
  }
  return out;
}

/// True when every pairwise IoU between gt and pd boxes is distinct.
inline bool distinct_ious(const FrameDetections& gt, const FrameDetections& pd) {
  std::vector<double> v;
  for (const auto& a : gt.detections)
    for (const auto& b : pd.detections) v.push_back(oracle_iou(a.bbox, b.bbox));
  std::sort(v.begin(), v.end());
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > 0 && v[k] == v[k - 1]) return false;
  return true;
}

/// Single constant-velocity target observed exactly for `warmup` frames,
/// hidden for `gap` frames, then observed for `after` frames.
struct GapRun {
  std::int64_t id_before = -1;
  std::int64_t id_after = -1;
  double min_iou_during_gap = 1.0;  // best output box vs truth, per hidden frame
  bool output_during_every_gap_frame = true;
};

inline BBox cv_truth(int t) { return BBox::from_center(100 + 3.0 * t, 120 + 1.5 * t, 40, 30); }

inline GapRun run_constant_velocity_gap(const TrackerConfig& cfg, int gap, int warmup = 10, int after = 3) {
  Tracker tracker(cfg);
  GapRun r;
  auto best_id = [](const std::vector<TrackedBox>& boxes, const BBox& truth, double* best_iou) {
    std::int64_t id = -1;
    double best = -1;
    for (const auto& b : boxes) {
      const double v = oracle_iou(b.detection.bbox, truth);
      if (v > best) {
        best = v;
        id = b.track_id;
      }
    }
    if (best_iou) *best_iou = best;
    return id;
  };
  int t = 0;
  for (; t < warmup; ++t) {
    const auto out = tracker.step({t, {{cv_truth(t), 0.9, 1}}});
    r.id_before = best_id(out, cv_truth(t), nullptr);
  }
  for (int k = 0; k < gap; ++k, ++t) {
    const auto out = tracker.step({t, {}});
    double v = 0;
    if (best_id(out, cv_truth(t), &v) < 0) {
      r.output_during_every_gap_frame = false;
      v = 0;
    }
    r.min_iou_during_gap = std::min(r.min_iou_during_gap, v);
  }
  for (int k = 0; k < after; ++k, ++t) {
    const auto out = tracker.step({t, {{cv_truth(t), 0.9, 1}}});
    if (k == 0) r.id_after = best_id(out, cv_truth(t), nullptr);
  }
  return r;
}

}  // namespace advdet::testing
