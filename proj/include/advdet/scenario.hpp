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

// Synthetic labeled detection streams.
//
// Each stream holds constant-velocity objects (bouncing off the image border)
// and renders two detection streams per frame: the detections on the raw
// frame and the detections on its squeezed version. Benign frames differ only
// by jitter: box noise (larger on small objects), confidence noise, dropout of
// small objects on the squeezed side and rare single-frame flicker where one
// squeezed-side detection is missed, shifted or relabeled. Adversarial
// segments alter the raw-frame detections of the largest visible objects
// (suppression, shift or class flip) for k consecutive frames while the
// squeezed detections stay clean.
//
// All randomness comes from std::mt19937_64 with portable conversions, so a
// (spec, seed) pair yields the same streams on every platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "advdet/core.hpp"

namespace advdet {

enum class AttackKind { kSuppress, kShift, kClassFlip };

inline const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::kSuppress: return "suppress";
    case AttackKind::kShift: return "shift";
    case AttackKind::kClassFlip: return "class_flip";
  }
  return "?";
}

inline AttackKind attack_kind_from_string(const std::string& s) {
  if (s == "suppress") return AttackKind::kSuppress;
  if (s == "shift") return AttackKind::kShift;
  if (s == "class_flip") return AttackKind::kClassFlip;
  throw MalformedInput("unknown attack kind '" + s + "'");
}

struct ObjectSpec {
  int class_id = 0;
  double cx = 0, cy = 0, w = 0, h = 0;
  double vx = 0, vy = 0;
  double confidence = 0.9;
};

struct AttackSegment {
  int start = 0;
  int length = 0;
  AttackKind kind = AttackKind::kSuppress;
  int targets = 1;  // number of largest visible objects affected
};

struct ScenarioSpec {
  std::string name = "custom";
  std::optional<std::uint64_t> seed;  // used when the caller gives none
  int streams = 1;
  int frames = 100;
  int image_width = 1280;
  int image_height = 720;
  int num_classes = 3;

  // Random objects, used when `objects` is empty.
  int large_min = 2, large_max = 4;
  double large_size_min = 120, large_size_max = 300;
  int small_min = 2, small_max = 5;
  double small_size_min = 12, small_size_max = 32;
  double max_speed = 3.0;
  double confidence_min = 0.6, confidence_max = 0.95;
  std::vector<ObjectSpec> objects;

  // Benign jitter.
  double small_area = 48.0 * 48.0;  // boxes below this area count as small
  double box_jitter = 1.0;          // px std, large objects
  double small_box_jitter = 3.0;    // px std, small objects
  double confidence_jitter = 0.03;
  double small_dropout = 0.3;  // per small object per frame, squeezed side
  double flicker = 0.0;  // per frame: one random squeezed-side detection glitches

  // Attacks, used when `segments` is empty.
  int attack_segments = 3;  // per stream
  int attack_min_length = 3, attack_max_length = 10;
  int attack_min_targets = 1, attack_max_targets = 2;
  std::vector<AttackKind> attack_kinds{AttackKind::kSuppress, AttackKind::kShift,
                                       AttackKind::kClassFlip};
  double shift_fraction = 0.6;  // shift as a fraction of box width
  std::vector<AttackSegment> segments;

  void validate() const {
    if (streams < 1 || frames < 1) throw MalformedInput("scenario needs streams >= 1 and frames >= 1");
    if (image_width <= 0 || image_height <= 0) throw MalformedInput("image dimensions must be positive");
    if (num_classes < 1) throw MalformedInput("num_classes must be >= 1");
    if (large_min < 0 || large_max < large_min || small_min < 0 || small_max < small_min)
      throw MalformedInput("object count ranges are invalid");
    if (!(large_size_min > 0 && large_size_max >= large_size_min && small_size_min > 0 &&
          small_size_max >= small_size_min))
      throw MalformedInput("object size ranges are invalid");
    for (double p : {small_dropout, flicker})
      if (!(p >= 0.0 && p <= 1.0)) throw MalformedInput("probabilities must lie in [0,1]");
    if (box_jitter < 0 || small_box_jitter < 0 || confidence_jitter < 0)
      throw MalformedInput("jitter magnitudes must be non-negative");
    if (attack_segments < 0 || attack_min_length < 1 || attack_max_length < attack_min_length)
      throw MalformedInput("attack length range is invalid");
    if (attack_min_targets < 1 || attack_max_targets < attack_min_targets)
      throw MalformedInput("attack target range is invalid");
    if (attack_kinds.empty()) throw MalformedInput("attack_kinds must not be empty");
    for (const auto& s : segments)
      if (s.start < 0 || s.length < 1 || s.start + s.length > frames || s.targets < 1)
        throw MalformedInput("attack segment out of range");
  }
};

/// Detections on raw and squeezed frames with per-frame adversarial labels.
struct LabeledSequence {
  std::string stream_id;
  std::vector<FrameDetections> original;
  std::vector<FrameDetections> squeezed;
  std::vector<bool> labels;

  void validate() const {
    if (original.size() != squeezed.size() || labels.size() != original.size())
      throw MalformedInput("stream '" + stream_id +
                           "': original, squeezed and labels must have equal length");
  }
};

namespace detail {

/// Portable random helpers over mt19937_64.
class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  bool bernoulli(double p) { return uniform() < p; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::vector<ObjectSpec> random_objects(const ScenarioSpec& spec, ScenarioRng& rng) {
  std::vector<ObjectSpec> objs;
  auto add = [&](int count, double smin, double smax) {
    for (int k = 0; k < count; ++k) {
      ObjectSpec o;
      o.class_id = rng.integer(0, spec.num_classes - 1);
      o.w = rng.uniform(smin, smax);
      o.h = o.w * rng.uniform(0.6, 1.4);
      o.cx = rng.uniform(o.w / 2, spec.image_width - o.w / 2);
      o.cy = rng.uniform(o.h / 2, spec.image_height - o.h / 2);
      o.vx = rng.uniform(-spec.max_speed, spec.max_speed);
      o.vy = rng.uniform(-spec.max_speed, spec.max_speed);
      o.confidence = rng.uniform(spec.confidence_min, spec.confidence_max);
      objs.push_back(o);
    }
  };
  add(rng.integer(spec.large_min, spec.large_max), spec.large_size_min, spec.large_size_max);
  add(rng.integer(spec.small_min, spec.small_max), spec.small_size_min, spec.small_size_max);
  return objs;
}

/// Non-overlapping segments: the stream is cut into equal slots and one
/// segment is placed uniformly inside each slot.
inline std::vector<AttackSegment> random_segments(const ScenarioSpec& spec, ScenarioRng& rng) {
  std::vector<AttackSegment> segs;
  if (spec.attack_segments == 0) return segs;
  const int slot = spec.frames / spec.attack_segments;
  for (int s = 0; s < spec.attack_segments; ++s) {
    AttackSegment seg;
    seg.length = std::min(rng.integer(spec.attack_min_length, spec.attack_max_length), slot);
    if (seg.length < 1) break;
    seg.start = s * slot + rng.integer(0, slot - seg.length);
    seg.kind = spec.attack_kinds[rng.integer(0, static_cast<int>(spec.attack_kinds.size()) - 1)];
    seg.targets = rng.integer(spec.attack_min_targets, spec.attack_max_targets);
    segs.push_back(seg);
  }
  return segs;
}

inline void advance(ObjectSpec& o, const ScenarioSpec& spec) {
  o.cx += o.vx;
  o.cy += o.vy;
  if (o.cx - o.w / 2 < 0 || o.cx + o.w / 2 > spec.image_width) {
    o.vx = -o.vx;
    o.cx = std::clamp(o.cx, o.w / 2, spec.image_width - o.w / 2);
  }
  if (o.cy - o.h / 2 < 0 || o.cy + o.h / 2 > spec.image_height) {
    o.vy = -o.vy;
    o.cy = std::clamp(o.cy, o.h / 2, spec.image_height - o.h / 2);
  }
}

inline Detection observe(const ObjectSpec& o, const ScenarioSpec& spec, ScenarioRng& rng) {
  const bool small = o.w * o.h < spec.small_area;
  const double s = small ? spec.small_box_jitter : spec.box_jitter;
  Detection d;
  d.bbox = {o.cx - o.w / 2 + s * rng.normal(), o.cy - o.h / 2 + s * rng.normal(),
            o.cx + o.w / 2 + s * rng.normal(), o.cy + o.h / 2 + s * rng.normal()};
  if (d.bbox.x2 <= d.bbox.x1 + 1) d.bbox.x2 = d.bbox.x1 + 1;
  if (d.bbox.y2 <= d.bbox.y1 + 1) d.bbox.y2 = d.bbox.y1 + 1;
  d.confidence = std::clamp(o.confidence + spec.confidence_jitter * rng.normal(), 0.0, 1.0);
  d.class_id = o.class_id;
  return d;
}

/// Shift or class flip of one detection; suppression is handled by callers.
inline void perturb(Detection& d, AttackKind kind, const ScenarioSpec& spec) {
  if (kind == AttackKind::kShift) {
    const double dx = spec.shift_fraction * d.bbox.width();
    d.bbox.x1 += dx;
    d.bbox.x2 += dx;
  } else if (kind == AttackKind::kClassFlip) {
    d.class_id = (d.class_id + 1) % std::max(2, spec.num_classes);
  }
}

}  // namespace detail

/// Generates one labeled stream. Stream k of a seeded scenario uses
/// splitmix64(seed + k) as its generator seed.
inline LabeledSequence generate_stream(const ScenarioSpec& spec, std::uint64_t seed,
                                       int stream_index = 0) {
  spec.validate();
  detail::ScenarioRng rng(detail::splitmix64(seed + static_cast<std::uint64_t>(stream_index)));
  std::vector<ObjectSpec> objs = spec.objects.empty() ? detail::random_objects(spec, rng) : spec.objects;
  const std::vector<AttackSegment> segs =
      spec.segments.empty() ? detail::random_segments(spec, rng) : spec.segments;

  LabeledSequence seq;
  seq.stream_id = spec.name + "-" + std::to_string(stream_index);
  seq.labels.assign(static_cast<std::size_t>(spec.frames), false);
  std::vector<const AttackSegment*> active(static_cast<std::size_t>(spec.frames), nullptr);
  for (const auto& s : segs)
    for (int t = s.start; t < s.start + s.length; ++t) {
      seq.labels[static_cast<std::size_t>(t)] = true;
      active[static_cast<std::size_t>(t)] = &s;
    }

  for (int t = 0; t < spec.frames; ++t) {
    if (t > 0)
      for (auto& o : objs) detail::advance(o, spec);

    FrameDetections orig{t, {}}, squeezed{t, {}};
    for (const auto& o : objs) orig.detections.push_back(detail::observe(o, spec, rng));
    for (const auto& o : objs) {
      Detection d = detail::observe(o, spec, rng);
      const bool small = o.w * o.h < spec.small_area;
      if (small && rng.bernoulli(spec.small_dropout)) continue;
      squeezed.detections.push_back(d);
    }
    if (!squeezed.detections.empty() && rng.bernoulli(spec.flicker)) {
      const int k = rng.integer(0, static_cast<int>(squeezed.detections.size()) - 1);
      const auto kind =
          spec.attack_kinds[rng.integer(0, static_cast<int>(spec.attack_kinds.size()) - 1)];
      Detection& d = squeezed.detections[static_cast<std::size_t>(k)];
      if (kind == AttackKind::kSuppress) {
        squeezed.detections.erase(squeezed.detections.begin() + k);
      } else {
        detail::perturb(d, kind, spec);
      }
    }

    if (const AttackSegment* seg = active[static_cast<std::size_t>(t)]) {
      // Attack the largest objects, largest first.
      std::vector<std::size_t> order(orig.detections.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return orig.detections[a].bbox.area() > orig.detections[b].bbox.area();
      });
      const std::size_t n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(seg->targets));
      std::vector<bool> drop(orig.detections.size(), false);
      for (std::size_t k = 0; k < n; ++k) {
        if (seg->kind == AttackKind::kSuppress) {
          drop[order[k]] = true;
        } else {
          detail::perturb(orig.detections[order[k]], seg->kind, spec);
        }
      }
      std::vector<Detection> kept;
      for (std::size_t i = 0; i < orig.detections.size(); ++i)
        if (!drop[i]) kept.push_back(orig.detections[i]);
      orig.detections = std::move(kept);
    }

    seq.original.push_back(validate_frame(orig, spec.image_width, spec.image_height));
    seq.squeezed.push_back(validate_frame(squeezed, spec.image_width, spec.image_height));
  }
  return seq;
}

inline std::vector<LabeledSequence> generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  std::vector<LabeledSequence> out;
  out.reserve(static_cast<std::size_t>(spec.streams));
  for (int k = 0; k < spec.streams; ++k) out.push_back(generate_stream(spec, seed, k));
  return out;
}

// Scenario JSON. Every key is optional and falls back to the ScenarioSpec
// default. "objects" entries: {"class_id", "box": [cx,cy,w,h],
// "velocity": [vx,vy], "confidence"}. "segments" entries: {"start",
// "length", "kind", "targets"}.

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("scenario must be a JSON object");
  ScenarioSpec s;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("name", s.name);
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    get("streams", s.streams);
    get("frames", s.frames);
    get("image_width", s.image_width);
    get("image_height", s.image_height);
    get("num_classes", s.num_classes);
    get("large_min", s.large_min);
    get("large_max", s.large_max);
    get("large_size_min", s.large_size_min);
    get("large_size_max", s.large_size_max);
    get("small_min", s.small_min);
    get("small_max", s.small_max);
    get("small_size_min", s.small_size_min);
    get("small_size_max", s.small_size_max);
    get("max_speed", s.max_speed);
    get("confidence_min", s.confidence_min);
    get("confidence_max", s.confidence_max);
    get("small_area", s.small_area);
    get("box_jitter", s.box_jitter);
    get("small_box_jitter", s.small_box_jitter);
    get("confidence_jitter", s.confidence_jitter);
    get("small_dropout", s.small_dropout);
    get("flicker", s.flicker);
    get("attack_segments", s.attack_segments);
    get("attack_min_length", s.attack_min_length);
    get("attack_max_length", s.attack_max_length);
    get("attack_min_targets", s.attack_min_targets);
    get("attack_max_targets", s.attack_max_targets);
    get("shift_fraction", s.shift_fraction);
    if (j.contains("attack_kinds")) {
      s.attack_kinds.clear();
      for (const auto& k : j.at("attack_kinds")) s.attack_kinds.push_back(attack_kind_from_string(k.get<std::string>()));
    }
    if (j.contains("objects")) {
      for (const auto& o : j.at("objects")) {
        ObjectSpec os;
        os.class_id = o.value("class_id", 0);
        const auto box = o.at("box").get<std::vector<double>>();
        if (box.size() != 4) throw MalformedInput("object box must be [cx,cy,w,h]");
        os.cx = box[0];
        os.cy = box[1];
        os.w = box[2];
        os.h = box[3];
        if (!(os.w > 0 && os.h > 0)) throw MalformedInput("object size must be positive");
        if (o.contains("velocity")) {
          const auto v = o.at("velocity").get<std::vector<double>>();
          if (v.size() != 2) throw MalformedInput("object velocity must be [vx,vy]");
          os.vx = v[0];
          os.vy = v[1];
        }
        os.confidence = o.value("confidence", 0.9);
        s.objects.push_back(os);
      }
    }
    if (j.contains("segments")) {
      for (const auto& g : j.at("segments")) {
        AttackSegment seg;
        seg.start = g.at("start").get<int>();
        seg.length = g.at("length").get<int>();
        seg.kind = attack_kind_from_string(g.value("kind", std::string("suppress")));
        seg.targets = g.value("targets", 1);
        s.segments.push_back(seg);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("invalid scenario: ") + e.what());
  }
  s.validate();
  return s;
}

inline nlohmann::ordered_json to_json(const LabeledSequence& seq) {
  nlohmann::ordered_json j;
  j["stream_id"] = seq.stream_id;
  j["labels"] = seq.labels;
  j["original"] = to_json(seq.original);
  j["squeezed"] = to_json(seq.squeezed);
  return j;
}

inline LabeledSequence labeled_sequence_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("stream must be a JSON object");
  LabeledSequence seq;
  try {
    seq.stream_id = j.value("stream_id", std::string("stream"));
    seq.labels = j.at("labels").get<std::vector<bool>>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("invalid stream: ") + e.what());
  }
  if (!j.contains("original") || !j.contains("squeezed"))
    throw MalformedInput("stream requires original and squeezed sequences");
  seq.original = sequence_from_json(j.at("original"));
  seq.squeezed = sequence_from_json(j.at("squeezed"));
  seq.validate();
  return seq;
}

}  // namespace advdet
