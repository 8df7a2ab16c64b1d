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

// Detection pipeline evaluation: per-frame distance between the detections on
// a frame and on its squeezed version, temporal alarms, and threshold sweeps
// producing (theta, tpr, fpr, accuracy) rows.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advdet/core.hpp"
#include "advdet/detector.hpp"
#include "advdet/map.hpp"
#include "advdet/parallel.hpp"
#include "advdet/png_io.hpp"
#include "advdet/scenario.hpp"
#include "advdet/temporal.hpp"
#include "advdet/transforms.hpp"
#include "advdet/wap.hpp"

namespace advdet {

enum class Metric { kWap, kMap };

inline Metric metric_from_string(std::string_view s) {
  if (s == "wap") return Metric::kWap;
  if (s == "map") return Metric::kMap;
  throw MalformedInput("metric must be wap or map, got '" + std::string(s) + "'");
}

inline const char* to_string(Metric m) { return m == Metric::kWap ? "wap" : "map"; }

inline double frame_distance(const FrameDetections& a, const FrameDetections& b, Metric metric,
                             const MetricConfig& cfg) {
  return metric == Metric::kWap ? wap_distance(a, b, cfg).total
                                : map_distance(a, b, cfg.min_overlap);
}

/// Distance between raw and squeezed detections, one value per frame.
inline std::vector<double> score_sequence(const LabeledSequence& seq, Metric metric,
                                          const MetricConfig& cfg,
                                          unsigned jobs = 1) {
  seq.validate();
  cfg.validate();
  std::vector<double> out(seq.original.size());
  parallel_for(out.size(), jobs, [&](std::size_t t) {
    out[t] = frame_distance(seq.original[t], seq.squeezed[t], metric, cfg);
  });
  return out;
}

/// Per-frame distances and ground-truth labels of one stream.
struct ScoredStream {
  std::vector<double> scores;
  std::vector<bool> labels;
};

struct RocPoint {
  double theta = 0;
  double tpr = 0;
  double fpr = 0;
  double accuracy = 0;
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  double tpr() const { return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0; }
  double fpr() const { return fp + tn ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0; }
  double accuracy() const {
    return total() ? static_cast<double>(tp + tn) / static_cast<double>(total()) : 0.0;
  }
};

/// Frame-level confusion counts over all streams; each stream owns its own
/// temporal state.
inline Confusion evaluate_alarms(std::span<const ScoredStream> streams, const TemporalConfig& cfg) {
  Confusion c;
  for (const auto& s : streams) {
    if (s.scores.size() != s.labels.size())
      throw MalformedInput("scores and labels must have equal length");
    const auto alarms = run_sequence(s.scores, cfg);
    for (std::size_t t = 0; t < alarms.size(); ++t) {
      if (s.labels[t]) {
        alarms[t] ? ++c.tp : ++c.fn;
      } else {
        alarms[t] ? ++c.fp : ++c.tn;
      }
    }
  }
  return c;
}

inline std::vector<RocPoint> sweep_thresholds(std::span<const ScoredStream> streams, int window,
                                              std::span<const double> thetas) {
  std::vector<RocPoint> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    const Confusion c = evaluate_alarms(streams, {theta, window});
    out.push_back({theta, c.tpr(), c.fpr(), c.accuracy()});
  }
  return out;
}

inline std::vector<RocPoint> sweep_thresholds(const ScoredStream& stream, int window,
                                              std::span<const double> thetas) {
  return sweep_thresholds(std::span<const ScoredStream>(&stream, 1), window, thetas);
}

/// Thresholds at which some alarm can change: 0 and every observed score.
inline std::vector<double> candidate_thresholds(std::span<const ScoredStream> streams) {
  std::set<double> values{0.0};
  for (const auto& s : streams)
    for (double v : s.scores)
      if (v >= 0.0) values.insert(v);
  return {values.begin(), values.end()};
}

/// Highest accuracy over all thresholds, first such theta on ties.
inline RocPoint best_point(std::span<const ScoredStream> streams, int window) {
  const auto thetas = candidate_thresholds(streams);
  const auto points = sweep_thresholds(streams, window, thetas);
  return *std::max_element(points.begin(), points.end(),
                           [](const RocPoint& a, const RocPoint& b) { return a.accuracy < b.accuracy; });
}

/// Parses "start:stop:step"; stop is included when it lies on the grid.
inline std::vector<double> parse_theta_range(std::string_view text) {
  auto fail = [&]() -> std::vector<double> {
    throw MalformedInput("thetas must be start:stop:step, got '" + std::string(text) + "'");
  };
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) return fail();
  double v[3];
  const std::string_view parts[3] = {text.substr(0, c1), text.substr(c1 + 1, c2 - c1 - 1),
                                     text.substr(c2 + 1)};
  for (int k = 0; k < 3; ++k) {
    try {
      std::size_t used = 0;
      v[k] = std::stod(std::string(parts[k]), &used);
      if (used != parts[k].size() || !std::isfinite(v[k])) return fail();
    } catch (const std::exception&) {
      return fail();
    }
  }
  const double start = v[0], stop = v[1], step = v[2];
  if (!(step > 0.0) || stop < start || start < 0.0) return fail();
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 10'000'000) return fail();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

// ROC CSV: header "theta,tpr,fpr,accuracy", one row per threshold, six
// decimals, '\n' line endings. Optional leading "# " comment lines.

inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline void write_roc_csv(std::ostream& os, std::span<const RocPoint> points,
                          std::span<const std::string> comments = {}) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "theta,tpr,fpr,accuracy\n";
  for (const auto& p : points)
    os << format_fixed6(p.theta) << ',' << format_fixed6(p.tpr) << ',' << format_fixed6(p.fpr)
       << ',' << format_fixed6(p.accuracy) << '\n';
}

// Image-sequence manifest for evaluation with a real detector:
//   {"stream_id": "cam0", "squeeze": "bit7",
//    "frames": [{"image": "f000.png", "adversarial": false}, ...]}
// Relative image paths resolve against the manifest's directory.

struct ImageFrame {
  std::string image;
  bool adversarial = false;
};

struct ImageSequence {
  std::string stream_id = "stream";
  SqueezeSpec squeeze{7};
  std::vector<ImageFrame> frames;
};

inline ImageSequence image_sequence_from_json(const nlohmann::json& j,
                                              const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("frames") || !j.at("frames").is_array())
    throw MalformedInput("image manifest requires a frames array");
  ImageSequence seq;
  try {
    seq.stream_id = j.value("stream_id", std::string("stream"));
    if (j.contains("squeeze")) seq.squeeze = parse_squeeze(j.at("squeeze").get<std::string>());
    for (const auto& f : j.at("frames")) {
      ImageFrame fr;
      std::filesystem::path p = f.at("image").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      fr.image = p.string();
      fr.adversarial = f.value("adversarial", false);
      seq.frames.push_back(fr);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("invalid image manifest: ") + e.what());
  }
  return seq;
}

/// Runs the detector on every frame and on its squeezed copy (written as a
/// PNG into `work_dir`), producing a labeled detection stream.
inline LabeledSequence detect_image_sequence(const ImageSequence& seq,
                                             const std::string& detector_cmd,
                                             const std::filesystem::path& work_dir,
                                             unsigned jobs = 1,
                                             const DetectorOptions& opts = {}) {
  std::filesystem::create_directories(work_dir);
  LabeledSequence out;
  out.stream_id = seq.stream_id;
  const std::size_t n = seq.frames.size();
  out.original.resize(n);
  out.squeezed.resize(n);
  out.labels.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.labels[t] = seq.frames[t].adversarial;
  parallel_for(n, jobs, [&](std::size_t t) {
    const auto id = static_cast<std::int64_t>(t);
    const auto& path = seq.frames[t].image;
    const auto squeezed_path =
        (work_dir / (seq.stream_id + "_" + std::to_string(t) + "_bit" +
                     std::to_string(seq.squeeze.bits) + ".png"))
            .string();
    write_png(squeezed_path, bit_squeeze(read_png(path), seq.squeeze.bits));
    out.original[t] = run_external_detector(path, detector_cmd, id, opts);
    out.squeezed[t] = run_external_detector(squeezed_path, detector_cmd, id, opts);
    out.original[t].frame_id = out.squeezed[t].frame_id = id;
  });
  return out;
}

}  // namespace advdet
