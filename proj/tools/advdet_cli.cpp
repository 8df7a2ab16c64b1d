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

// advdet command-line tool.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 external detector failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "advdet/advdet.hpp"
#include "advdet/config.hpp"

namespace {

using namespace advdet;

constexpr const char* kFormatHelp = R"(Formats:
  Detection exchange (frame):
    {"frame_id": 0, "detections": [{"bbox": [x1,y1,x2,y2], "confidence": 0.9, "class_id": 1}]}
    Pixel corner coordinates, origin top-left. A sequence file is a JSON array
    of frames ordered by frame_id.
  Scenario (evaluate/generate --scenario):
    builtin:default | builtin:small_object_jitter | path to a JSON file that is
    either a synthetic scenario spec (see scenarios/*.json), a generated
    streams file ({"streams": [...]}, written by `generate`), or, together
    with --detector-cmd, an image manifest
    {"stream_id": "cam0", "squeeze": "bit7",
     "frames": [{"image": "f0.png", "adversarial": false}, ...]}.
  External detector: invoked as `<cmd> <image.png>`; prints one frame object
    on stdout and exits 0.
  Config file (--config): JSON object with snake_case keys, e.g.
    {"min_overlap": 0.5, "wf_a": 0.5, "gamma_cs": 0.1, "window": 3}.
Exit codes: 0 success, 1 invalid input, 2 external detector failure.)";

class DetectorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag values are optional so that only flags actually given override the
// config file.
struct Flags {
  std::string config_path;
  std::optional<double> min_overlap, wf_a, gamma_cs, alpha_tp, alpha_fp, alpha_fn;
  std::optional<std::string> metric, mode, thetas, scenario, detector_cmd;
  std::optional<double> theta;
  std::optional<int> window;
  std::optional<int> reserved_age, min_hits;
  std::optional<double> assoc_min_iou, process_noise, measurement_noise;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> detector_timeout_ms;
  std::optional<unsigned> jobs;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg.merge(load_json_file(f.config_path));
  auto set = [](auto& field, const auto& opt) {
    if (opt) field = *opt;
  };
  set(cfg.metric_cfg.min_overlap, f.min_overlap);
  set(cfg.metric_cfg.a, f.wf_a);
  set(cfg.metric_cfg.gamma_cs, f.gamma_cs);
  set(cfg.metric_cfg.alpha_tp, f.alpha_tp);
  set(cfg.metric_cfg.alpha_fp, f.alpha_fp);
  set(cfg.metric_cfg.alpha_fn, f.alpha_fn);
  set(cfg.metric, f.metric);
  set(cfg.mode, f.mode);
  set(cfg.thetas, f.thetas);
  set(cfg.scenario, f.scenario);
  set(cfg.detector_cmd, f.detector_cmd);
  set(cfg.temporal.theta, f.theta);
  set(cfg.temporal.window, f.window);
  set(cfg.tracker.reserved_age, f.reserved_age);
  set(cfg.tracker.min_hits_to_confirm, f.min_hits);
  set(cfg.tracker.assoc_min_iou, f.assoc_min_iou);
  set(cfg.tracker.process_noise, f.process_noise);
  set(cfg.tracker.measurement_noise, f.measurement_noise);
  set(cfg.detector_timeout_ms, f.detector_timeout_ms);
  set(cfg.jobs, f.jobs);
  if (f.seed) cfg.seed = f.seed;
  cfg.validate();
  return cfg;
}

unsigned effective_jobs(const RunConfig& cfg) { return cfg.jobs ? cfg.jobs : default_jobs(); }

std::vector<std::string> run_header(const std::string& command, const RunConfig& cfg) {
  return {std::string("advdet ") + kVersion + " " + command,
          "seed: " + (cfg.seed ? std::to_string(*cfg.seed) : std::string("none")),
          "config: " + cfg.to_json().dump()};
}

void log_header(const std::vector<std::string>& header) {
  for (const auto& line : header) std::cerr << "# " << line << '\n';
}

void add_metric_flags(CLI::App* app, Flags& f) {
  app->add_option("--metric", f.metric, "Distance metric: wap or map");
  app->add_option("--min-overlap", f.min_overlap, "IoU threshold for a matched pair (default 0.5)");
  app->add_option("--wf-a", f.wf_a, "Parameter a of F(x) = x/(x+a) (default 0.5)");
  app->add_option("--gamma-cs", f.gamma_cs, "Confidence term weight (default 0.1)");
  app->add_option("--alpha-tp", f.alpha_tp, "Weight of the TP term (default 1)");
  app->add_option("--alpha-fp", f.alpha_fp, "Weight of the FP term (default 1)");
  app->add_option("--alpha-fn", f.alpha_fn, "Weight of the FN term (default 1)");
}

void add_common_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file (flags override it)");
  app->add_option("--jobs", f.jobs, "Worker threads (default: available parallelism)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw MalformedInput("failed writing '" + path + "'");
}

/// A frame object or a sequence array.
std::vector<FrameDetections> load_frames(const std::string& path, bool* is_sequence) {
  const auto j = load_json_file(path);
  try {
    if (j.is_array()) {
      *is_sequence = true;
      return sequence_from_json(j);
    }
    *is_sequence = false;
    return {frame_from_json(j)};
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

std::vector<LabeledSequence> load_streams(const RunConfig& cfg, std::uint64_t* seed_used) {
  const std::string& sc = cfg.scenario;
  *seed_used = cfg.seed.value_or(0);
  if (sc.rfind("builtin:", 0) == 0) {
    const ScenarioSpec spec = builtin_scenario(sc.substr(8));
    *seed_used = cfg.seed.value_or(spec.seed.value_or(0));
    return generate_scenario(spec, *seed_used);
  }
  const auto j = load_json_file(sc);
  if (!cfg.detector_cmd.empty()) {
    const auto base = std::filesystem::path(sc).parent_path();
    std::vector<ImageSequence> manifests;
    if (j.is_array()) {
      for (const auto& m : j) manifests.push_back(image_sequence_from_json(m, base));
    } else {
      manifests.push_back(image_sequence_from_json(j, base));
    }
    const auto work = std::filesystem::temp_directory_path() / "advdet_squeezed";
    DetectorOptions opts;
    opts.timeout = std::chrono::milliseconds(cfg.detector_timeout_ms);
    std::vector<LabeledSequence> out;
    for (const auto& m : manifests) {
      try {
        out.push_back(detect_image_sequence(m, cfg.detector_cmd, work, effective_jobs(cfg), opts));
      } catch (const DetectorError& e) {
        throw DetectorFailure("stream '" + m.stream_id + "': " + e.what());
      }
    }
    return out;
  }
  if (j.is_object() && j.contains("streams") && j.at("streams").is_array()) {
    std::vector<LabeledSequence> out;
    for (const auto& s : j.at("streams")) out.push_back(labeled_sequence_from_json(s));
    return out;
  }
  const ScenarioSpec spec = scenario_from_json(j);
  *seed_used = cfg.seed.value_or(spec.seed.value_or(0));
  return generate_scenario(spec, *seed_used);
}

int cmd_transform(const std::string& in, const std::string& out,
                  const std::optional<std::string>& squeeze,
                  const std::optional<std::string>& attack) {
  ImageBuffer img = read_png(in);
  if (attack) img = apply_attack(img, parse_attack(*attack));
  if (squeeze) img = bit_squeeze(img, parse_squeeze(*squeeze).bits);
  write_png(out, img);
  return 0;
}

int cmd_distance(const RunConfig& cfg, const std::string& gt_path, const std::string& pd_path,
                 const std::string& out_path) {
  bool gt_seq = false, pd_seq = false;
  const auto gt = load_frames(gt_path, &gt_seq);
  const auto pd = load_frames(pd_path, &pd_seq);
  if (gt.size() != pd.size())
    throw MalformedInput("ground-truth and prediction files hold different frame counts");
  const Metric metric = metric_from_string(cfg.metric);
  std::vector<double> d(gt.size());
  parallel_for(gt.size(), effective_jobs(cfg), [&](std::size_t t) {
    d[t] = frame_distance(validate_frame(gt[t]), validate_frame(pd[t]), metric, cfg.metric_cfg);
  });
  std::ostringstream os;
  if (!gt_seq && !pd_seq) {
    os << nlohmann::json(d[0]).dump() << '\n';
  } else {
    os << "frame_id,distance\n";
    for (std::size_t t = 0; t < d.size(); ++t)
      os << gt[t].frame_id << ',' << nlohmann::json(d[t]).dump() << '\n';
  }
  write_text(out_path, os.str());
  return 0;
}

std::vector<double> load_distances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> out;
  if (first != std::string::npos && text[first] == '[') {
    try {
      out = nlohmann::json::parse(text).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw MalformedInput(path + ": " + e.what());
    }
  } else {
    // One value per line, or the last column of a CSV with a header row.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find_last_of(',');
      const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
      try {
        std::size_t used = 0;
        out.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        if (out.empty()) continue;  // header
        throw MalformedInput(path + ": bad distance value '" + cell + "'");
      }
    }
  }
  for (double v : out)
    if (!(v >= 0.0) || !std::isfinite(v)) throw MalformedInput(path + ": distances must be finite and >= 0");
  return out;
}

int cmd_detect(const RunConfig& cfg, const std::string& distances_path,
               const std::string& orig_path, const std::string& squeezed_path,
               const std::string& out_path) {
  std::vector<double> d;
  std::vector<std::int64_t> ids;
  if (!distances_path.empty()) {
    d = load_distances(distances_path);
    for (std::size_t t = 0; t < d.size(); ++t) ids.push_back(static_cast<std::int64_t>(t));
  } else {
    if (orig_path.empty() || squeezed_path.empty())
      throw MalformedInput("detect needs --distances or both --orig and --squeezed");
    bool a = false, b = false;
    LabeledSequence seq;
    seq.original = load_frames(orig_path, &a);
    seq.squeezed = load_frames(squeezed_path, &b);
    if (seq.original.size() != seq.squeezed.size())
      throw MalformedInput("--orig and --squeezed hold different frame counts");
    for (auto& f : seq.original) f = validate_frame(f);
    for (auto& f : seq.squeezed) f = validate_frame(f);
    seq.labels.assign(seq.original.size(), false);
    d = score_sequence(seq, metric_from_string(cfg.metric), cfg.metric_cfg, effective_jobs(cfg));
    for (const auto& f : seq.original) ids.push_back(f.frame_id);
  }
  TemporalConfig tc = cfg.temporal;
  if (cfg.mode == "single") tc.window = 1;
  const auto alarms = run_sequence(d, tc);
  std::ostringstream os;
  for (const auto& line : run_header("detect", cfg)) os << "# " << line << '\n';
  os << "frame_id,distance,alarm\n";
  for (std::size_t t = 0; t < d.size(); ++t)
    os << ids[t] << ',' << format_fixed6(d[t]) << ',' << (alarms[t] ? 1 : 0) << '\n';
  write_text(out_path, os.str());
  return 0;
}

int cmd_track(const RunConfig& cfg, const std::string& in_path, const std::string& out_path) {
  bool is_seq = false;
  const auto frames = load_frames(in_path, &is_seq);
  Tracker tracker(cfg.tracker);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& f : frames) out.push_back(tracked_frame_to_json(f.frame_id, tracker.step(validate_frame(f))));
  write_text(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& out_path) {
  std::uint64_t seed = 0;
  const auto streams = load_streams(cfg, &seed);
  const Metric metric = metric_from_string(cfg.metric);
  std::vector<ScoredStream> scored;
  for (const auto& s : streams) scored.push_back({score_sequence(s, metric, cfg.metric_cfg, effective_jobs(cfg)), s.labels});
  const int window = cfg.mode == "single" ? 1 : cfg.temporal.window;
  const auto thetas = parse_theta_range(cfg.thetas);
  const auto points = sweep_thresholds(scored, window, thetas);

  RunConfig logged = cfg;
  logged.seed = seed;
  auto header = run_header("evaluate", logged);
  log_header(header);
  std::ostringstream os;
  write_roc_csv(os, points, header);
  write_text(out_path, os.str());

  const auto best = std::max_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.accuracy < b.accuracy;
  });
  if (best != points.end())
    std::cerr << "best theta " << format_fixed6(best->theta) << " accuracy " << format_fixed6(best->accuracy)
              << " (window " << window << ", metric " << cfg.metric << ")\n";
  return 0;
}

int cmd_generate(const RunConfig& cfg, const std::string& out_path) {
  if (!cfg.detector_cmd.empty()) throw MalformedInput("generate does not use --detector-cmd");
  std::uint64_t seed = 0;
  const auto streams = load_streams(cfg, &seed);
  RunConfig logged = cfg;
  logged.seed = seed;
  log_header(run_header("generate", logged));
  nlohmann::ordered_json j;
  j["advdet_version"] = kVersion;
  j["scenario"] = cfg.scenario;
  j["seed"] = seed;
  j["streams"] = nlohmann::ordered_json::array();
  for (const auto& s : streams) j["streams"].push_back(to_json(s));
  write_text(out_path, j.dump() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advdet: adversarial-example detection for object detectors"};
  app.footer(kFormatHelp);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(advdet::kVersion));

  Flags f;
  std::string in, out, gt, pd, distances, orig, squeezed;
  std::optional<std::string> squeeze, attack;

  auto* transform = app.add_subcommand("transform", "Apply an attack and/or bit-depth squeeze to a PNG");
  transform->add_option("--in", in, "Input PNG")->required();
  transform->add_option("--out", out, "Output PNG")->required();
  transform->add_option("--squeeze", squeeze, "bitN with N in 1..7");
  transform->add_option("--attack", attack, "gaussian:SIGMA:SEED or brightness:DELTA");

  auto* distance = app.add_subcommand("distance", "Distance between two detection files");
  distance->add_option("--gt", gt, "Reference detections (frame or sequence)")->required();
  distance->add_option("--pd", pd, "Compared detections (frame or sequence)")->required();
  distance->add_option("--out", out, "Output file (default stdout)");
  add_metric_flags(distance, f);
  add_common_flags(distance, f);

  auto* detect = app.add_subcommand("detect", "Per-frame alarms from distances or detection sequences");
  detect->add_option("--distances", distances, "Distances: JSON array or CSV (last column)");
  detect->add_option("--orig", orig, "Detections on raw frames (sequence)");
  detect->add_option("--squeezed", squeezed, "Detections on squeezed frames (sequence)");
  detect->add_option("--theta", f.theta, "Distance threshold (default 0.1)");
  detect->add_option("--window", f.window, "Consecutive frames above theta (default 3)");
  detect->add_option("--mode", f.mode, "single or temporal (single = window 1)");
  detect->add_option("--out", out, "Output CSV (default stdout)");
  add_metric_flags(detect, f);
  add_common_flags(detect, f);

  auto* track = app.add_subcommand("track", "Kalman tracking over a detection sequence");
  track->add_option("--in", in, "Detection sequence JSON")->required();
  track->add_option("--out", out, "Tracked sequence JSON (default stdout)");
  track->add_option("--reserved-age", f.reserved_age, "Misses before a track is deleted (default 3)");
  track->add_option("--assoc-min-iou", f.assoc_min_iou, "Association IoU threshold (default 0.3)");
  track->add_option("--process-noise", f.process_noise, "Process noise scale (default 1)");
  track->add_option("--measurement-noise", f.measurement_noise, "Measurement noise scale (default 1)");
  track->add_option("--min-hits", f.min_hits, "Hits before a track is reported (default 1)");
  add_common_flags(track, f);

  auto* evaluate = app.add_subcommand("evaluate", "Threshold sweep over a labeled scenario, writes ROC CSV");
  evaluate->add_option("--scenario", f.scenario, "builtin:NAME or scenario/manifest/streams file");
  evaluate->add_option("--seed", f.seed, "Scenario seed (default: the scenario's own)");
  evaluate->add_option("--window", f.window, "Temporal window; 1 = single frame (default 3)");
  evaluate->add_option("--mode", f.mode, "single or temporal");
  evaluate->add_option("--thetas", f.thetas, "start:stop:step (default 0:1:0.01)");
  evaluate->add_option("--detector-cmd", f.detector_cmd, "External detector command for image manifests");
  evaluate->add_option("--detector-timeout-ms", f.detector_timeout_ms, "Per-image detector timeout");
  evaluate->add_option("--out", out, "ROC CSV path")->required();
  add_metric_flags(evaluate, f);
  add_common_flags(evaluate, f);

  auto* generate = app.add_subcommand("generate", "Write the labeled detection streams of a scenario");
  generate->add_option("--scenario", f.scenario, "builtin:NAME or scenario spec file");
  generate->add_option("--seed", f.seed, "Scenario seed (default: the scenario's own)");
  generate->add_option("--out", out, "Output JSON (default stdout)");
  add_common_flags(generate, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*transform) return cmd_transform(in, out, squeeze, attack);
    const RunConfig cfg = resolve(f);
    if (*distance) return cmd_distance(cfg, gt, pd, out);
    if (*detect) return cmd_detect(cfg, distances, orig, squeezed, out);
    if (*track) return cmd_track(cfg, in, out);
    if (*evaluate) return cmd_evaluate(cfg, out);
    if (*generate) return cmd_generate(cfg, out);
  } catch (const DetectorFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const advdet::DetectorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
