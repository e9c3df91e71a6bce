// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"
#include "tensor.hpp"

namespace depthstyle {

/// Edge-exclusive reflection of a possibly out-of-range index into [0, n).
/// Folds repeatedly, so any offset is valid as long as n >= 2.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) noexcept
{
  if (n == 1)
    return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0)
    i += period;
  if (i >= static_cast<std::ptrdiff_t>(n))
    i = period - i;
  return static_cast<std::size_t>(i);
}

/// 3x3, stride 1, reflection pad 1. Weights are (out, in, 3, 3) row-major.
struct ConvSpec
{
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::vector<float> weights;
  std::vector<float> bias;

  static constexpr std::size_t kernel_area = 9;

  void validate() const
  {
    if (in_channels == 0 || out_channels == 0)
      throw InvalidInput("ConvSpec: zero channel count");
    if (weights.size() != out_channels * in_channels * kernel_area)
      throw InvalidInput("ConvSpec: weights length " + std::to_string(weights.size()) +
                         ", expected " + std::to_string(out_channels * in_channels * kernel_area));
    if (bias.size() != out_channels)
      throw InvalidInput("ConvSpec: bias length " + std::to_string(bias.size()) + ", expected " +
                         std::to_string(out_channels));
  }
};

namespace detail {

// Writes one im2col row segment: dst[j] = src[reflect(j + dx)] for a row of width w.
inline void shifted_row(float* dst, const float* src, std::size_t w, int dx) noexcept
{
  if (dx == 0) {
    std::memcpy(dst, src, w * sizeof(float));
  } else if (dx < 0) {
    dst[0] = src[1];
    std::memcpy(dst + 1, src, (w - 1) * sizeof(float));
  } else {
    std::memcpy(dst, src + 1, (w - 1) * sizeof(float));
    dst[w - 1] = src[w - 2];
  }
}

// Upper bound on the im2col scratch buffer, in floats.
inline constexpr std::size_t im2col_budget = std::size_t{1} << 21;

} // namespace detail

/// Cross-correlation of the reflection-padded input with spec.weights, plus bias.
/// Row tiles of the input are unfolded into a (in*9) x (rows*W) patch matrix and
/// multiplied by the (out) x (in*9) weight matrix.
inline Tensor3 conv2d_reflect(const Tensor3& x, const ConvSpec& spec)
{
  spec.validate();
  if (x.channels() != spec.in_channels)
    throw InvalidInput("conv2d_reflect: input has " + std::to_string(x.channels()) +
                       " channels, layer expects " + std::to_string(spec.in_channels));
  if (x.height() < 2 || x.width() < 2)
    throw InvalidInput("conv2d_reflect: spatial size " + std::to_string(x.height()) + "x" +
                       std::to_string(x.width()) + " too small for reflection padding");

  using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  const std::size_t h = x.height();
  const std::size_t w = x.width();
  const std::size_t k = spec.in_channels * ConvSpec::kernel_area;
  const std::size_t plane = h * w;
  const std::size_t tile_rows = std::clamp<std::size_t>(detail::im2col_budget / (k * w), 1, h);

  Tensor3 out(spec.out_channels, h, w);
  std::vector<float> cols(k * tile_rows * w);
  const Eigen::Map<const RowMajor> weights(spec.weights.data(),
                                           static_cast<Eigen::Index>(spec.out_channels),
                                           static_cast<Eigen::Index>(k));

  for (std::size_t r0 = 0; r0 < h; r0 += tile_rows) {
    const std::size_t rows = std::min(tile_rows, h - r0);
    const std::size_t n = rows * w;

    for (std::size_t ci = 0; ci < spec.in_channels; ++ci) {
      const float* src = x.plane(ci).data();
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          float* dst = cols.data() + ((ci * 3 + ky) * 3 + kx) * n;
          for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t sy =
              reflect_index(static_cast<std::ptrdiff_t>(r0 + r) + ky - 1, h);
            detail::shifted_row(dst + r * w, src + sy * w, w, kx - 1);
          }
        }
      }
    }

    const Eigen::Map<const RowMajor> patches(cols.data(), static_cast<Eigen::Index>(k),
                                             static_cast<Eigen::Index>(n));
    Eigen::Map<RowMajor, Eigen::Unaligned, Eigen::OuterStride<>> dst(
      out.data().data() + r0 * w, static_cast<Eigen::Index>(spec.out_channels),
      static_cast<Eigen::Index>(n), Eigen::OuterStride<>(static_cast<Eigen::Index>(plane)));
    dst.noalias() = weights * patches;
  }

  for (std::size_t o = 0; o < spec.out_channels; ++o) {
    const float b = spec.bias[o];
    for (float& v : out.plane(o))
      v += b;
  }
  return out;
}

inline void relu_inplace(Tensor3& x) noexcept
{
  for (float& v : x.data())
    v = std::max(v, 0.0f);
}

inline Tensor3 relu(Tensor3 x)
{
  relu_inplace(x);
  return x;
}

inline Tensor3 maxpool2x2(const Tensor3& x)
{
  if (x.height() % 2 != 0 || x.width() % 2 != 0)
    throw InvalidInput("maxpool2x2: odd spatial size " + std::to_string(x.height()) + "x" +
                       std::to_string(x.width()));

  const std::size_t oh = x.height() / 2;
  const std::size_t ow = x.width() / 2;
  Tensor3 out(x.channels(), oh, ow);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j) {
        out(c, i, j) = std::max({x(c, 2 * i, 2 * j), x(c, 2 * i, 2 * j + 1),
                                 x(c, 2 * i + 1, 2 * j), x(c, 2 * i + 1, 2 * j + 1)});
      }
    }
  }
  return out;
}

inline Tensor3 upsample_nearest_2x(const Tensor3& x)
{
  const std::size_t oh = x.height() * 2;
  const std::size_t ow = x.width() * 2;
  Tensor3 out(x.channels(), oh, ow);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j)
        out(c, i, j) = x(c, i / 2, j / 2);
    }
  }
  return out;
}

} // namespace depthstyle
