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

// External detector protocol.
//
// The detector is any shell command. It is run as
//     /bin/sh -c '<detector_cmd> "$1"' sh <image_path>
// i.e. the image path is appended as the last argument. It must print one
// detection-exchange frame object on standard output and exit with status 0.
// Standard error is passed through. A missing "frame_id" is filled in by the
// caller. Boxes are clamped to the image bounds read from the PNG header.

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <string>

#include "advdet/core.hpp"
#include "advdet/png_io.hpp"

namespace advdet {

class DetectorError : public std::runtime_error {
 public:
  enum class Kind { kSpawnFailed, kNonZeroExit, kMalformedOutput, kTimeout };

  DetectorError(Kind kind, std::int64_t frame_id, const std::string& detail)
      : std::runtime_error(describe(kind, frame_id, detail)), kind_(kind), frame_id_(frame_id) {}

  Kind kind() const { return kind_; }
  std::int64_t frame_id() const { return frame_id_; }

 private:
  static std::string describe(Kind kind, std::int64_t frame_id, const std::string& detail) {
    const char* what = "";
    switch (kind) {
      case Kind::kSpawnFailed: what = "could not start detector"; break;
      case Kind::kNonZeroExit: what = "detector exited with failure"; break;
      case Kind::kMalformedOutput: what = "detector produced malformed output"; break;
      case Kind::kTimeout: what = "detector timed out"; break;
    }
    return std::string(what) + " (frame " + std::to_string(frame_id) + "): " + detail;
  }

  Kind kind_;
  std::int64_t frame_id_;
};

struct DetectorOptions {
  std::chrono::milliseconds timeout{30000};
};

namespace detail {

struct CommandResult {
  int exit_status = 0;
  bool signaled = false;
  bool timed_out = false;
  std::string output;
};

inline CommandResult run_command(const std::string& cmd, const std::string& arg,
                                 std::chrono::milliseconds timeout, std::int64_t frame_id) {
  int fds[2];
  if (pipe(fds) != 0)
    throw DetectorError(DetectorError::Kind::kSpawnFailed, frame_id, "pipe() failed");
  const std::string script = cmd + " \"$1\"";
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw DetectorError(DetectorError::Kind::kSpawnFailed, frame_id, "fork() failed");
  }
  if (pid == 0) {
    setpgid(0, 0);  // own group, so a timeout also reaches grandchildren
    close(fds[0]);
    dup2(fds[1], STDOUT_FILENO);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", script.c_str(), "sh", arg.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  setpgid(pid, pid);

  CommandResult result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) {
      result.timed_out = true;
      break;
    }
    const ssize_t n = read(fds[0], buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    result.output.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  if (result.timed_out) kill(-pid, SIGKILL);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_status = WEXITSTATUS(status);
  } else {
    result.signaled = true;
    result.exit_status = -1;
  }
  return result;
}

}  // namespace detail

/// Runs the detector on one PNG and returns its validated detections.
inline FrameDetections run_external_detector(const std::string& image_path,
                                             const std::string& detector_cmd,
                                             std::int64_t frame_id = 0,
                                             const DetectorOptions& opts = {}) {
  const auto [w, h] = png_dimensions(image_path);
  const auto res = detail::run_command(detector_cmd, image_path, opts.timeout, frame_id);
  if (res.timed_out)
    throw DetectorError(DetectorError::Kind::kTimeout, frame_id,
                        "no result within " + std::to_string(opts.timeout.count()) + " ms");
  if (res.signaled || res.exit_status != 0)
    throw DetectorError(DetectorError::Kind::kNonZeroExit, frame_id,
                        res.signaled ? "terminated by signal"
                                     : "exit status " + std::to_string(res.exit_status));
  FrameDetections frame;
  try {
    frame = frame_from_json(nlohmann::json::parse(res.output), frame_id);
  } catch (const nlohmann::json::exception& e) {
    throw DetectorError(DetectorError::Kind::kMalformedOutput, frame_id, e.what());
  } catch (const MalformedInput& e) {
    throw DetectorError(DetectorError::Kind::kMalformedOutput, frame_id, e.what());
  }
  try {
    return validate_frame(frame, w, h);
  } catch (const MalformedInput& e) {
    throw DetectorError(DetectorError::Kind::kMalformedOutput, frame_id, e.what());
  }
}

}  // namespace advdet
