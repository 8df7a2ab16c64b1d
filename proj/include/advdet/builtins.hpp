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

// Built-in scenario suites, selectable as "builtin:NAME". The same text is
// shipped under scenarios/ in the source tree.

#include <string>
#include <string_view>

#include "advdet/scenario.hpp"

namespace advdet {

inline constexpr std::string_view kDefaultScenarioJson = R"json({
  "name": "default",
  "seed": 1,
  "streams": 8,
  "frames": 300,
  "image_width": 1280,
  "image_height": 720,
  "num_classes": 3,
  "large_min": 2,
  "large_max": 4,
  "large_size_min": 120,
  "large_size_max": 300,
  "small_min": 2,
  "small_max": 5,
  "small_size_min": 12,
  "small_size_max": 32,
  "max_speed": 3.0,
  "small_area": 2304,
  "box_jitter": 1.0,
  "small_box_jitter": 3.0,
  "confidence_jitter": 0.03,
  "small_dropout": 0.3,
  "flicker": 0.2,
  "attack_segments": 4,
  "attack_min_length": 8,
  "attack_max_length": 20,
  "attack_min_targets": 1,
  "attack_max_targets": 2,
  "attack_kinds": ["suppress", "shift", "class_flip"],
  "shift_fraction": 0.6
}
)json";

inline constexpr std::string_view kSmallObjectJitterScenarioJson = R"json({
  "name": "small_object_jitter",
  "seed": 1,
  "streams": 8,
  "frames": 300,
  "image_width": 1280,
  "image_height": 720,
  "num_classes": 3,
  "large_min": 2,
  "large_max": 4,
  "large_size_min": 120,
  "large_size_max": 300,
  "small_min": 2,
  "small_max": 5,
  "small_size_min": 12,
  "small_size_max": 32,
  "max_speed": 3.0,
  "small_area": 2304,
  "box_jitter": 1.0,
  "small_box_jitter": 4.0,
  "confidence_jitter": 0.03,
  "small_dropout": 0.4,
  "flicker": 0.0,
  "attack_segments": 4,
  "attack_min_length": 3,
  "attack_max_length": 10,
  "attack_min_targets": 1,
  "attack_max_targets": 2,
  "attack_kinds": ["suppress", "shift", "class_flip"],
  "shift_fraction": 0.6
}
)json";

inline ScenarioSpec builtin_scenario(std::string_view name) {
  if (name == "default") return scenario_from_json(nlohmann::json::parse(kDefaultScenarioJson));
  if (name == "small_object_jitter")
    return scenario_from_json(nlohmann::json::parse(kSmallObjectJitterScenarioJson));
  throw MalformedInput("unknown builtin scenario '" + std::string(name) +
                       "' (available: default, small_object_jitter)");
}

}  // namespace advdet
