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

// Image-space operations: bit-depth feature squeezing and the two black-box
// attacks (additive Gaussian noise, brightness offset).
//
// Noise is generated from std::mt19937_64 and converted to normal deviates
// with the Box-Muller transform implemented here, because the output of
// std::normal_distribution differs between standard libraries. A given
// (image, sigma, seed) therefore produces the same bytes everywhere.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "advdet/core.hpp"

namespace advdet {

struct SqueezeSpec {
  int bits = 7;  // [1,7]
};

struct AttackSpec {
  enum class Kind { kGaussianNoise, kBrightness };
  Kind kind = Kind::kGaussianNoise;
  double sigma = 0;  // 8-bit units
  double delta = 0;  // 8-bit units
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint8_t saturate_u8(double v) {
  // std::round rounds halves away from zero.
  const double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

inline std::array<std::uint8_t, 256> squeeze_table(int bits) {
  const double levels = static_cast<double>((1 << bits) - 1);
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const double q = std::round(v / 255.0 * levels);
    lut[v] = saturate_u8(q / levels * 255.0);
  }
  return lut;
}

/// Standard normal deviates via Box-Muller on 53-bit uniforms.
class PortableNormal {
 public:
  explicit PortableNormal(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    cached_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0;
  bool cached_ = false;
};

}  // namespace detail

inline ImageBuffer bit_squeeze(const ImageBuffer& img, int bits) {
  if (bits < 1 || bits > 7)
    throw MalformedInput("squeeze bits must lie in [1,7], got " + std::to_string(bits));
  const auto lut = detail::squeeze_table(bits);
  ImageBuffer out = img;
  for (auto& v : out.pixels) v = lut[v];
  return out;
}

inline ImageBuffer gaussian_attack(const ImageBuffer& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw MalformedInput("gaussian sigma must be a non-negative number");
  if (sigma == 0.0) return img;
  detail::PortableNormal normal(seed);
  ImageBuffer out = img;
  for (auto& v : out.pixels) v = detail::saturate_u8(v + sigma * normal());
  return out;
}

inline ImageBuffer brightness_attack(const ImageBuffer& img, double delta) {
  if (!std::isfinite(delta)) throw MalformedInput("brightness delta must be finite");
  ImageBuffer out = img;
  for (auto& v : out.pixels) v = detail::saturate_u8(v + delta);
  return out;
}

inline ImageBuffer apply_attack(const ImageBuffer& img, const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackSpec::Kind::kGaussianNoise:
      return gaussian_attack(img, spec.sigma, spec.seed);
    case AttackSpec::Kind::kBrightness:
      return brightness_attack(img, spec.delta);
  }
  return img;
}

/// Parses "bitN".
inline SqueezeSpec parse_squeeze(std::string_view text) {
  if (text.size() == 4 && text.substr(0, 3) == "bit" && text[3] >= '1' && text[3] <= '7')
    return {text[3] - '0'};
  throw MalformedInput("squeeze must be bit1..bit7, got '" + std::string(text) + "'");
}

/// Parses "gaussian:SIGMA:SEED" or "brightness:DELTA".
inline AttackSpec parse_attack(std::string_view text) {
  auto fail = [&]() -> AttackSpec {
    throw MalformedInput("attack must be gaussian:SIGMA:SEED or brightness:DELTA, got '" +
                         std::string(text) + "'");
  };
  auto to_double = [&](std::string_view s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(std::string(s), &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size() || !std::isfinite(v)) fail();
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return fail();
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  AttackSpec spec;
  if (kind == "brightness") {
    spec.kind = AttackSpec::Kind::kBrightness;
    spec.delta = to_double(rest);
    return spec;
  }
  if (kind == "gaussian") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) return fail();
    spec.kind = AttackSpec::Kind::kGaussianNoise;
    spec.sigma = to_double(rest.substr(0, c2));
    if (spec.sigma < 0) return fail();
    const std::string seed_text(rest.substr(c2 + 1));
    if (seed_text.empty() || seed_text.find_first_not_of("0123456789") != std::string::npos)
      return fail();
    try {
      spec.seed = std::stoull(seed_text);
    } catch (const std::exception&) {
      return fail();
    }
    return spec;
  }
  return fail();
}

}  // namespace advdet
