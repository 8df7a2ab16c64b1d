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

// Domain types shared by every advdet module: boxes, detections, per-frame
// detection sets, metric hyperparameters and the RGB image carrier, plus the
// detection-exchange JSON format.
//
// Coordinates are pixel corners (x1, y1, x2, y2) with the origin at the
// top-left of the image; x grows to the right and y grows downwards.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace advdet {

inline constexpr const char* kVersion = "0.1.0";

/// Raised for inputs that cannot be interpreted: non-finite coordinates,
/// out-of-range hyperparameters, JSON that does not follow the exchange format.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double width() const { return std::max(0.0, x2 - x1); }
  double height() const { return std::max(0.0, y2 - y1); }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  bool finite() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2);
  }
  bool valid() const { return finite() && x1 < x2 && y1 < y2; }

  static BBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  BBox bbox;
  double confidence = 0;
  int class_id = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameDetections {
  std::int64_t frame_id = 0;
  std::vector<Detection> detections;

  friend bool operator==(const FrameDetections&,
                         const FrameDetections&) = default;
};

/// Hyperparameters of the weighted-AP frame distance.
struct MetricConfig {
  double min_overlap = 0.5;  // strict IoU threshold for a TP pair
  double a = 0.5;            // F(x) = x / (x + a)
  double gamma_cs = 0.1;     // weight of confidence terms
  double alpha_tp = 1.0;
  double alpha_fp = 1.0;
  double alpha_fn = 1.0;

  void validate() const {
    if (!(min_overlap > 0.0 && min_overlap < 1.0))
      throw MalformedInput("min_overlap must lie in (0,1)");
    if (!(a > 0.0) || !std::isfinite(a))
      throw MalformedInput("weight function parameter a must be positive");
    if (!(gamma_cs >= 0.0) || !std::isfinite(gamma_cs))
      throw MalformedInput("gamma_cs must be non-negative");
    for (double w : {alpha_tp, alpha_fp, alpha_fn})
      if (!(w >= 0.0) || !std::isfinite(w))
        throw MalformedInput("alpha weights must be non-negative");
    if (!(alpha_tp + alpha_fp + alpha_fn > 0.0))
      throw MalformedInput("alpha weights must not all be zero");
  }
};

/// 8-bit RGB image, row-major, interleaved channels.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static constexpr int kChannels = 3;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h * kChannels, fill) {
    if (w <= 0 || h <= 0)
      throw MalformedInput("image dimensions must be positive");
  }

  std::size_t size() const { return pixels.size(); }
  bool consistent() const {
    return width > 0 && height > 0 &&
           pixels.size() == static_cast<std::size_t>(width) * height * kChannels;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// Counts confidences that had to be clamped into [0,1]. Process-wide.
inline std::atomic<std::uint64_t>& clamped_confidence_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

/// Clamps boxes to the image rectangle and confidences to [0,1]. Detections
/// whose clamped box has zero area are dropped. Non-finite coordinates or
/// confidences are rejected.
inline FrameDetections validate_frame(const FrameDetections& frame,
                                      int image_w, int image_h) {
  if (image_w <= 0 || image_h <= 0)
    throw MalformedInput("image dimensions must be positive");
  FrameDetections out;
  out.frame_id = frame.frame_id;
  out.detections.reserve(frame.detections.size());
  for (const Detection& d : frame.detections) {
    if (!d.bbox.finite())
      throw MalformedInput("non-finite box coordinate in frame " +
                           std::to_string(frame.frame_id));
    if (!std::isfinite(d.confidence))
      throw MalformedInput("non-finite confidence in frame " +
                           std::to_string(frame.frame_id));
    if (d.class_id < 0)
      throw MalformedInput("negative class_id in frame " +
                           std::to_string(frame.frame_id));
    Detection c = d;
    c.bbox.x1 = std::clamp(d.bbox.x1, 0.0, static_cast<double>(image_w));
    c.bbox.x2 = std::clamp(d.bbox.x2, 0.0, static_cast<double>(image_w));
    c.bbox.y1 = std::clamp(d.bbox.y1, 0.0, static_cast<double>(image_h));
    c.bbox.y2 = std::clamp(d.bbox.y2, 0.0, static_cast<double>(image_h));
    if (!(c.bbox.x1 < c.bbox.x2 && c.bbox.y1 < c.bbox.y2)) continue;
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      clamped_confidence_counter().fetch_add(1, std::memory_order_relaxed);
      c.confidence = std::clamp(d.confidence, 0.0, 1.0);
    }
    out.detections.push_back(c);
  }
  return out;
}

/// Same checks without an image rectangle: rejects non-finite values, drops
/// boxes with non-positive area and clamps confidences.
inline FrameDetections validate_frame(const FrameDetections& frame) {
  FrameDetections out;
  out.frame_id = frame.frame_id;
  for (const Detection& d : frame.detections) {
    if (!d.bbox.finite() || !std::isfinite(d.confidence))
      throw MalformedInput("non-finite value in frame " + std::to_string(frame.frame_id));
    if (d.class_id < 0)
      throw MalformedInput("negative class_id in frame " + std::to_string(frame.frame_id));
    if (!d.bbox.valid()) continue;
    Detection c = d;
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      clamped_confidence_counter().fetch_add(1, std::memory_order_relaxed);
      c.confidence = std::clamp(d.confidence, 0.0, 1.0);
    }
    out.detections.push_back(c);
  }
  return out;
}

// Detection-exchange JSON:
//   {"frame_id": 3, "detections": [{"bbox": [x1,y1,x2,y2],
//                                   "confidence": 0.9, "class_id": 2}]}
// A sequence is a JSON array of such objects ordered by frame_id.

// Output keeps the documented key order, hence ordered_json.
inline nlohmann::ordered_json to_json(const Detection& d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["bbox"] = {d.bbox.x1, d.bbox.y1, d.bbox.x2, d.bbox.y2};
  j["confidence"] = d.confidence;
  j["class_id"] = d.class_id;
  return j;
}

inline nlohmann::ordered_json to_json(const FrameDetections& f) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["frame_id"] = f.frame_id;
  j["detections"] = nlohmann::ordered_json::array();
  for (const Detection& d : f.detections) j["detections"].push_back(to_json(d));
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<FrameDetections>& seq) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& f : seq) arr.push_back(to_json(f));
  return arr;
}

namespace detail {

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw MalformedInput(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace detail

inline Detection detection_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("detection must be a JSON object");
  if (!j.contains("bbox") || !j.contains("confidence") || !j.contains("class_id"))
    throw MalformedInput("detection requires bbox, confidence and class_id");
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4)
    throw MalformedInput("bbox must be an array of four numbers");
  Detection d;
  d.bbox = {detail::json_number(b[0], "bbox[0]"), detail::json_number(b[1], "bbox[1]"),
            detail::json_number(b[2], "bbox[2]"), detail::json_number(b[3], "bbox[3]")};
  d.confidence = detail::json_number(j.at("confidence"), "confidence");
  const auto& cls = j.at("class_id");
  if (!cls.is_number_integer() || cls.get<std::int64_t>() < 0)
    throw MalformedInput("class_id must be a non-negative integer");
  d.class_id = cls.get<int>();
  return d;
}

/// Parses one frame object. When `frame_id` is absent `default_id` is used.
inline FrameDetections frame_from_json(const nlohmann::json& j,
                                       std::int64_t default_id = 0) {
  if (!j.is_object()) throw MalformedInput("frame must be a JSON object");
  FrameDetections f;
  f.frame_id = default_id;
  if (j.contains("frame_id")) {
    const auto& id = j.at("frame_id");
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0)
      throw MalformedInput("frame_id must be a non-negative integer");
    f.frame_id = id.get<std::int64_t>();
  }
  if (!j.contains("detections") || !j.at("detections").is_array())
    throw MalformedInput("frame requires a detections array");
  for (const auto& d : j.at("detections")) f.detections.push_back(detection_from_json(d));
  return f;
}

/// Parses a sequence array; frame ids must be strictly increasing.
inline std::vector<FrameDetections> sequence_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw MalformedInput("sequence must be a JSON array of frames");
  std::vector<FrameDetections> seq;
  seq.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    seq.push_back(frame_from_json(j[i], static_cast<std::int64_t>(i)));
    if (i > 0 && seq[i].frame_id <= seq[i - 1].frame_id)
      throw MalformedInput("sequence frame ids must be unique and increasing (at index " +
                           std::to_string(i) + ")");
  }
  return seq;
}

inline FrameDetections parse_frame(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
  return frame_from_json(j);
}

inline std::string serialize(const FrameDetections& f) { return to_json(f).dump(); }

}  // namespace advdet
