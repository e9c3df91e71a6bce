// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "depthstyle/image_io.hpp"
#include "depthstyle/pipeline.hpp"
#include "depthstyle/synthetic_weights.hpp"

namespace depthstyle::test {

// Full-size encoder/decoder with He-initialized random weights.
inline const Engine& synthetic_engine()
{
  static const Engine engine(synthetic_encoder_weights(11), synthetic_decoder_weights(12));
  return engine;
}

inline RasterImage noise_image(std::size_t h, std::size_t w, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  std::vector<std::uint8_t> px(h * w * 3);
  for (auto& p : px)
    p = static_cast<std::uint8_t>(dist(rng));
  return RasterImage(h, w, std::move(px));
}

// Smooth color gradients with a few stripes; closer to photo statistics than noise.
inline RasterImage pattern_image(std::size_t h, std::size_t w, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 6.283);
  const double p0 = phase(rng), p1 = phase(rng), p2 = phase(rng);
  std::vector<std::uint8_t> px(h * w * 3);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const double y = static_cast<double>(i) / static_cast<double>(h);
      const double x = static_cast<double>(j) / static_cast<double>(w);
      const double r = 0.5 + 0.5 * std::sin(6.0 * x + p0);
      const double g = 0.5 + 0.5 * std::sin(9.0 * y + p1);
      const double b = 0.5 + 0.5 * std::sin(14.0 * (x + y) + p2);
      px[(i * w + j) * 3 + 0] = static_cast<std::uint8_t>(std::lround(255.0 * r));
      px[(i * w + j) * 3 + 1] = static_cast<std::uint8_t>(std::lround(255.0 * g));
      px[(i * w + j) * 3 + 2] = static_cast<std::uint8_t>(std::lround(255.0 * b));
    }
  }
  return RasterImage(h, w, std::move(px));
}

// Varies only down the rows: every column is identical.
inline RasterImage row_pattern_image(std::size_t h, std::size_t w, std::uint64_t seed)
{
  const auto base = pattern_image(h, 1, seed);
  std::vector<std::uint8_t> px(h * w * 3);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t c = 0; c < 3; ++c)
        px[(i * w + j) * 3 + c] = base.pixels[i * 3 + c];
  return RasterImage(h, w, std::move(px));
}

// Left-to-right linear ramp from 0 to 1.
inline DepthMask horizontal_gradient(std::size_t h, std::size_t w)
{
  std::vector<float> v(h * w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      v[i * w + j] = w == 1 ? 0.0f : static_cast<float>(static_cast<double>(j) / (w - 1));
  return DepthMask(h, w, std::move(v));
}

} // namespace depthstyle::test
