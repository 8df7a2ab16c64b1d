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

// 8-bit RGB PNG reading and writing on top of libpng's simplified API.
// Grayscale, palette and alpha inputs are converted to RGB on read.

#include <png.h>

#include <cstring>
#include <string>
#include <utility>

#include "advdet/core.hpp"

namespace advdet {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct PngImage {
  png_image image;
  PngImage() {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace detail

inline std::pair<int, int> png_dimensions(const std::string& path) {
  detail::PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str()))
    throw ImageIoError("cannot read PNG '" + path + "': " + png.image.message);
  return {static_cast<int>(png.image.width), static_cast<int>(png.image.height)};
}

inline ImageBuffer read_png(const std::string& path) {
  detail::PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str()))
    throw ImageIoError("cannot read PNG '" + path + "': " + png.image.message);
  png.image.format = PNG_FORMAT_RGB;
  ImageBuffer img(static_cast<int>(png.image.width), static_cast<int>(png.image.height));
  if (!png_image_finish_read(&png.image, nullptr, img.pixels.data(), 0, nullptr))
    throw ImageIoError("cannot decode PNG '" + path + "': " + png.image.message);
  return img;
}

inline void write_png(const std::string& path, const ImageBuffer& img) {
  if (!img.consistent()) throw MalformedInput("image buffer size does not match dimensions");
  detail::PngImage png;
  png.image.width = static_cast<png_uint_32>(img.width);
  png.image.height = static_cast<png_uint_32>(img.height);
  png.image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, img.pixels.data(), 0, nullptr))
    throw ImageIoError("cannot write PNG '" + path + "': " + png.image.message);
}

}  // namespace advdet
