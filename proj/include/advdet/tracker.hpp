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

// Constant-velocity Kalman multi-object tracker with reserved-age deletion.
//
// State: (cx, cy, w, h, vcx, vcy, vw, vh) in pixels and pixels/frame.
// Measurement: (cx, cy, w, h) of a detection box.
//
// A track that stays unassociated for `reserved_age` consecutive frames is
// deleted, so a target that disappears for fewer frames keeps its id.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "advdet/core.hpp"
#include "advdet/matching.hpp"

namespace advdet {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using MeasVector = Eigen::Matrix<double, 4, 1>;

struct TrackerConfig {
  int reserved_age = 3;
  double assoc_min_iou = 0.3;
  double process_noise = 1.0;
  double measurement_noise = 1.0;
  int min_hits_to_confirm = 1;
  // Initial variance of the velocity components of a new track.
  double initial_velocity_variance = 1000.0;

  void validate() const {
    if (reserved_age < 1) throw MalformedInput("reserved_age must be at least 1");
    if (!(assoc_min_iou > 0.0 && assoc_min_iou < 1.0))
      throw MalformedInput("assoc_min_iou must lie in (0,1)");
    if (!(process_noise > 0.0)) throw MalformedInput("process_noise must be positive");
    if (!(measurement_noise > 0.0)) throw MalformedInput("measurement_noise must be positive");
    if (min_hits_to_confirm < 0) throw MalformedInput("min_hits_to_confirm must be >= 0");
    if (!(initial_velocity_variance > 0.0))
      throw MalformedInput("initial_velocity_variance must be positive");
  }
};

struct KalmanTrack {
  std::int64_t id = 0;
  StateVector state = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();
  int misses = 0;
  int age = 0;
  int hits = 0;
  int class_id = 0;
  double confidence = 0;

  static constexpr double kMinSide = 1e-3;

  BBox box() const {
    return BBox::from_center(state(0), state(1), std::max(state(2), kMinSide),
                             std::max(state(3), kMinSide));
  }
};

struct TrackedBox {
  std::int64_t track_id = 0;
  Detection detection;
};

namespace detail {

inline StateMatrix transition() {
  StateMatrix f = StateMatrix::Identity();
  f.topRightCorner<4, 4>() = Eigen::Matrix4d::Identity();
  return f;
}

inline Eigen::Matrix<double, 4, 8> observation() {
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  h.leftCols<4>() = Eigen::Matrix4d::Identity();
  return h;
}

inline MeasVector measurement_of(const BBox& b) {
  return {b.center_x(), b.center_y(), b.width(), b.height()};
}

}  // namespace detail

inline KalmanTrack make_track(std::int64_t id, const Detection& det, const TrackerConfig& cfg) {
  KalmanTrack t;
  t.id = id;
  t.state.head<4>() = detail::measurement_of(det.bbox);
  t.covariance = StateMatrix::Zero();
  t.covariance.diagonal().head<4>().setConstant(cfg.measurement_noise);
  t.covariance.diagonal().tail<4>().setConstant(cfg.initial_velocity_variance);
  t.hits = 1;
  t.class_id = det.class_id;
  t.confidence = det.confidence;
  return t;
}

inline KalmanTrack predict(const KalmanTrack& track, const TrackerConfig& cfg) {
  static const StateMatrix f = detail::transition();
  KalmanTrack out = track;
  out.state = f * track.state;
  out.covariance = f * track.covariance * f.transpose() +
                   cfg.process_noise * StateMatrix::Identity();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  ++out.age;
  return out;
}

/// Kalman measurement update with the Joseph-form covariance.
inline KalmanTrack update(const KalmanTrack& track, const BBox& meas, const TrackerConfig& cfg) {
  static const auto h = detail::observation();
  const Eigen::Matrix4d r = cfg.measurement_noise * Eigen::Matrix4d::Identity();
  const MeasVector innovation = detail::measurement_of(meas) - h * track.state;
  const Eigen::Matrix4d s = h * track.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 8, 4> gain =
      track.covariance * h.transpose() * s.llt().solve(Eigen::Matrix4d::Identity());

  KalmanTrack out = track;
  out.state = track.state + gain * innovation;
  const StateMatrix ikh = StateMatrix::Identity() - gain * h;
  out.covariance = ikh * track.covariance * ikh.transpose() + gain * r * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  out.misses = 0;
  ++out.hits;
  return out;
}

/// One tracker step over an explicit track list: predict every track,
/// associate detections greedily by descending IoU (>= assoc_min_iou), update
/// matched tracks, age unmatched ones, delete tracks that reached
/// `reserved_age` misses and spawn tracks for unmatched detections.
///
/// Returns the boxes of confirmed live tracks: matched ones carry the fused
/// estimate, coasting ones their prediction.
inline std::vector<TrackedBox> tracker_step(std::vector<KalmanTrack>& tracks,
                                            std::int64_t& next_id,
                                            const FrameDetections& frame,
                                            const TrackerConfig& cfg) {
  for (auto& t : tracks) t = predict(t, cfg);

  struct Candidate {
    double iou;
    std::size_t track, det;
  };
  const auto& dets = frame.detections;
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const BBox predicted = tracks[i].box();
    for (std::size_t j = 0; j < dets.size(); ++j) {
      const double v = iou(predicted, dets[j].bbox);
      if (v >= cfg.assoc_min_iou) candidates.push_back({v, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.track != b.track) return a.track < b.track;
    return a.det < b.det;
  });

  std::vector<bool> track_used(tracks.size(), false), det_used(dets.size(), false);
  for (const auto& c : candidates) {
    if (track_used[c.track] || det_used[c.det]) continue;
    track_used[c.track] = det_used[c.det] = true;
    KalmanTrack& t = tracks[c.track];
    t = update(t, dets[c.det].bbox, cfg);
    t.class_id = dets[c.det].class_id;
    t.confidence = dets[c.det].confidence;
  }
  for (std::size_t i = 0; i < tracks.size(); ++i)
    if (!track_used[i]) ++tracks[i].misses;

  std::erase_if(tracks, [&](const KalmanTrack& t) { return t.misses >= cfg.reserved_age; });

  for (std::size_t j = 0; j < dets.size(); ++j)
    if (!det_used[j]) tracks.push_back(make_track(next_id++, dets[j], cfg));

  std::vector<TrackedBox> out;
  for (const auto& t : tracks) {
    if (t.hits < cfg.min_hits_to_confirm) continue;
    out.push_back({t.id, {t.box(), t.confidence, t.class_id}});
  }
  return out;
}

/// Tracker state for one video stream. Ids are never reused.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  std::vector<TrackedBox> step(const FrameDetections& frame) {
    return tracker_step(tracks_, next_id_, frame, cfg_);
  }

  const std::vector<KalmanTrack>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  TrackerConfig cfg_;
  std::vector<KalmanTrack> tracks_;
  std::int64_t next_id_ = 0;
};

/// Detection-exchange frame with "track_id" added to every box.
inline nlohmann::ordered_json tracked_frame_to_json(std::int64_t frame_id,
                                                   const std::vector<TrackedBox>& boxes) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["frame_id"] = frame_id;
  j["detections"] = nlohmann::ordered_json::array();
  for (const auto& b : boxes) {
    auto d = to_json(b.detection);
    d["track_id"] = b.track_id;
    j["detections"].push_back(std::move(d));
  }
  return j;
}

}  // namespace advdet
