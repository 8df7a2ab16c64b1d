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

// Temporal consistency rule: a frame raises an alarm only when the distance
// exceeded theta on each of the last `window` frames. A distance equal to
// theta counts as below threshold. A short perturbation that a tracker with
// reserved age `window` would absorb never alarms.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "advdet/core.hpp"

namespace advdet {

struct TemporalConfig {
  double theta = 0.1;
  int window = 3;

  void validate() const {
    if (!(theta >= 0.0)) throw MalformedInput("theta must be non-negative");
    if (window < 1) throw MalformedInput("window must be at least 1");
  }
};

class TemporalState {
 public:
  /// Pushes one distance and reports whether the current frame alarms.
  bool step(double d, const TemporalConfig& cfg) {
    recent_.push_back(d);
    while (recent_.size() > static_cast<std::size_t>(cfg.window)) recent_.pop_front();
    ++frames_seen_;
    run_above_ = d > cfg.theta ? run_above_ + 1 : 0;
    return frames_seen_ >= static_cast<std::uint64_t>(cfg.window) &&
           run_above_ >= static_cast<std::uint64_t>(cfg.window);
  }

  const std::deque<double>& recent() const { return recent_; }
  std::uint64_t frames_seen() const { return frames_seen_; }

 private:
  std::deque<double> recent_;
  std::uint64_t frames_seen_ = 0;
  std::uint64_t run_above_ = 0;  // length of the current run with d > theta
};

inline std::vector<bool> run_sequence(std::span<const double> distances,
                                      const TemporalConfig& cfg) {
  cfg.validate();
  TemporalState state;
  std::vector<bool> alarms;
  alarms.reserve(distances.size());
  for (double d : distances) alarms.push_back(state.step(d, cfg));
  return alarms;
}

}  // namespace advdet
