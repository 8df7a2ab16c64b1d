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

// Resolved run configuration. Layering is defaults < config file < flags.
// A config file is a JSON object whose keys are the snake_case names below;
// unknown keys are rejected.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "advdet/core.hpp"
#include "advdet/temporal.hpp"
#include "advdet/tracker.hpp"

namespace advdet {

struct RunConfig {
  MetricConfig metric_cfg;
  TemporalConfig temporal;
  TrackerConfig tracker;
  std::string metric = "wap";
  std::string mode = "temporal";
  std::string thetas = "0:1:0.01";
  std::string scenario = "builtin:default";
  std::optional<std::uint64_t> seed;
  std::string detector_cmd;
  std::int64_t detector_timeout_ms = 30000;
  unsigned jobs = 0;  // 0: available parallelism

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["min_overlap"] = metric_cfg.min_overlap;
    j["wf_a"] = metric_cfg.a;
    j["gamma_cs"] = metric_cfg.gamma_cs;
    j["alpha_tp"] = metric_cfg.alpha_tp;
    j["alpha_fp"] = metric_cfg.alpha_fp;
    j["alpha_fn"] = metric_cfg.alpha_fn;
    j["metric"] = metric;
    j["theta"] = temporal.theta;
    j["window"] = temporal.window;
    j["mode"] = mode;
    j["thetas"] = thetas;
    j["reserved_age"] = tracker.reserved_age;
    j["assoc_min_iou"] = tracker.assoc_min_iou;
    j["process_noise"] = tracker.process_noise;
    j["measurement_noise"] = tracker.measurement_noise;
    j["min_hits_to_confirm"] = tracker.min_hits_to_confirm;
    j["scenario"] = scenario;
    if (seed) {
      j["seed"] = *seed;
    } else {
      j["seed"] = nullptr;
    }
    j["detector_cmd"] = detector_cmd;
    j["detector_timeout_ms"] = detector_timeout_ms;
    j["jobs"] = jobs;
    return j;
  }

  /// Overrides fields present in `j`.
  void merge(const nlohmann::json& j) {
    if (!j.is_object()) throw MalformedInput("config must be a JSON object");
    try {
      for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const auto& v = it.value();
        if (k == "min_overlap") metric_cfg.min_overlap = v.get<double>();
        else if (k == "wf_a") metric_cfg.a = v.get<double>();
        else if (k == "gamma_cs") metric_cfg.gamma_cs = v.get<double>();
        else if (k == "alpha_tp") metric_cfg.alpha_tp = v.get<double>();
        else if (k == "alpha_fp") metric_cfg.alpha_fp = v.get<double>();
        else if (k == "alpha_fn") metric_cfg.alpha_fn = v.get<double>();
        else if (k == "metric") metric = v.get<std::string>();
        else if (k == "theta") temporal.theta = v.get<double>();
        else if (k == "window") temporal.window = v.get<int>();
        else if (k == "mode") mode = v.get<std::string>();
        else if (k == "thetas") thetas = v.get<std::string>();
        else if (k == "reserved_age") tracker.reserved_age = v.get<int>();
        else if (k == "assoc_min_iou") tracker.assoc_min_iou = v.get<double>();
        else if (k == "process_noise") tracker.process_noise = v.get<double>();
        else if (k == "measurement_noise") tracker.measurement_noise = v.get<double>();
        else if (k == "min_hits_to_confirm") tracker.min_hits_to_confirm = v.get<int>();
        else if (k == "scenario") scenario = v.get<std::string>();
        else if (k == "seed") seed = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
        else if (k == "detector_cmd") detector_cmd = v.get<std::string>();
        else if (k == "detector_timeout_ms") detector_timeout_ms = v.get<std::int64_t>();
        else if (k == "jobs") jobs = v.get<unsigned>();
        else throw MalformedInput("unknown config key '" + k + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw MalformedInput(std::string("invalid config value: ") + e.what());
    }
  }

  void validate() const {
    metric_cfg.validate();
    temporal.validate();
    tracker.validate();
    if (metric != "wap" && metric != "map") throw MalformedInput("metric must be wap or map");
    if (mode != "single" && mode != "temporal") throw MalformedInput("mode must be single or temporal");
    if (detector_timeout_ms <= 0) throw MalformedInput("detector_timeout_ms must be positive");
  }
};

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace advdet
