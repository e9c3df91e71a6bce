// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "depth.hpp"
#include "error.hpp"
#include "layers.hpp"
#include "raster_codec.hpp"
#include "tensor.hpp"

namespace depthstyle {

using WarningSink = std::function<void(std::string_view)>;

/// 8-bit RGB, row-major interleaved.
struct RasterImage
{
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(std::size_t h, std::size_t w, std::vector<std::uint8_t> px)
    : height(h), width(w), pixels(std::move(px))
  {
    if (pixels.size() != height * width * 3)
      throw InvalidInput("RasterImage: " + std::to_string(pixels.size()) + " bytes for " +
                         std::to_string(height) + "x" + std::to_string(width) + " RGB");
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Planar R, G, B in [0, 1].
inline Tensor3 to_tensor(const RasterImage& img)
{
  Tensor3 t(3, img.height, img.width);
  const std::size_t n = img.height * img.width;
  for (std::size_t c = 0; c < 3; ++c) {
    auto plane = t.plane(c);
    for (std::size_t k = 0; k < n; ++k)
      plane[k] = static_cast<float>(img.pixels[3 * k + c]) / 255.0f;
  }
  return t;
}

/// Clamp to [0, 1], scale by 255, round half away from zero.
inline RasterImage from_tensor(const Tensor3& t)
{
  if (t.channels() != 3)
    throw InvalidInput("from_tensor: expected 3 channels, got " + std::to_string(t.channels()));
  const std::size_t n = t.plane_size();
  std::vector<std::uint8_t> px(n * 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto plane = t.plane(c);
    for (std::size_t k = 0; k < n; ++k) {
      // NaN fails both comparisons and lands on 0.
      const float v = plane[k] > 0.0f ? std::min(plane[k], 1.0f) : 0.0f;
      px[3 * k + c] = static_cast<std::uint8_t>(std::round(static_cast<double>(v) * 255.0));
    }
  }
  return RasterImage(t.height(), t.width(), std::move(px));
}

struct PaddedTensor
{
  Tensor3 tensor;
  std::size_t original_height = 0;
  std::size_t original_width = 0;
};

/// Reflect-pads right and bottom so both spatial dims are multiples of m.
/// Reflection is edge-exclusive and folds repeatedly for pads wider than the input.
inline PaddedTensor pad_to_multiple(const Tensor3& t, std::size_t m)
{
  if (m == 0)
    throw InvalidInput("pad_to_multiple: multiple must be at least 1");
  const std::size_t h = t.height();
  const std::size_t w = t.width();
  const std::size_t ph = (h + m - 1) / m * m;
  const std::size_t pw = (w + m - 1) / m * m;
  if ((ph != h && h < 2) || (pw != w && w < 2))
    throw InvalidInput("pad_to_multiple: cannot reflect-pad a " + std::to_string(h) + "x" +
                       std::to_string(w) + " input");
  if (ph == h && pw == w)
    return {t, h, w};

  Tensor3 out(t.channels(), ph, pw);
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::size_t i = 0; i < ph; ++i) {
      const std::size_t si = reflect_index(static_cast<std::ptrdiff_t>(i), h);
      for (std::size_t j = 0; j < pw; ++j)
        out(c, i, j) = t(c, si, reflect_index(static_cast<std::ptrdiff_t>(j), w));
    }
  }
  return {std::move(out), h, w};
}

/// Top-left height x width window; undoes pad_to_multiple.
inline Tensor3 crop(const Tensor3& t, std::size_t height, std::size_t width)
{
  if (height > t.height() || width > t.width())
    throw InvalidInput("crop: window larger than tensor");
  if (height == t.height() && width == t.width())
    return t;
  Tensor3 out(t.channels(), height, width);
  for (std::size_t c = 0; c < t.channels(); ++c)
    for (std::size_t i = 0; i < height; ++i)
      for (std::size_t j = 0; j < width; ++j)
        out(c, i, j) = t(c, i, j);
  return out;
}

/// Same right/bottom reflection as pad_to_multiple, for masks.
inline DepthMask pad_mask(const DepthMask& mask, std::size_t height, std::size_t width)
{
  if (height == mask.height() && width == mask.width())
    return mask;
  if ((height != mask.height() && mask.height() < 2) || (width != mask.width() && mask.width() < 2))
    throw InvalidInput("pad_mask: cannot reflect-pad a 1-pixel mask");
  std::vector<float> out(height * width);
  for (std::size_t i = 0; i < height; ++i) {
    const std::size_t si = reflect_index(static_cast<std::ptrdiff_t>(i), mask.height());
    for (std::size_t j = 0; j < width; ++j)
      out[i * width + j] = mask(si, reflect_index(static_cast<std::ptrdiff_t>(j), mask.width()));
  }
  return DepthMask(height, width, std::move(out));
}

inline RasterImage load_image(const std::filesystem::path& path, const WarningSink& warn = {})
{
  auto rgb = codec::read_rgb(path);
  if (rgb.alpha_stripped && warn)
    warn(path.string() + ": alpha channel discarded");
  return RasterImage(rgb.height, rgb.width, std::move(rgb.pixels));
}

inline void save_image(const std::filesystem::path& path, const RasterImage& img)
{
  codec::write_rgb(path, {img.height, img.width, img.pixels, false});
}

/// Grayscale samples divided by the type maximum (255 or 65535; PGM maxval).
inline RawDepth load_depth(const std::filesystem::path& path)
{
  const auto gray = codec::read_gray(path);
  RawDepth raw{gray.height, gray.width, std::vector<double>(gray.samples.size())};
  const auto scale = static_cast<double>(gray.max_value);
  for (std::size_t k = 0; k < gray.samples.size(); ++k)
    raw.values[k] = static_cast<double>(gray.samples[k]) / scale;
  return raw;
}

/// An explicit strength mask: grayscale mapped to [0, 1], no min-max rescaling.
inline DepthMask load_mask(const std::filesystem::path& path)
{
  const auto raw = load_depth(path);
  std::vector<float> values(raw.values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    values[k] = static_cast<float>(raw.values[k]);
  return DepthMask(raw.height, raw.width, std::move(values));
}

} // namespace depthstyle
