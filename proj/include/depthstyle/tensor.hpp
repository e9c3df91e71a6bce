// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace depthstyle {

/// Dense channels x height x width array of 32-bit floats, row-major CHW.
class Tensor3
{
public:
  Tensor3() = default;

  Tensor3(std::size_t channels, std::size_t height, std::size_t width, float fill = 0.0f)
    : channels_(channels), height_(height), width_(width),
      data_(channels * height * width, fill)
  {}

  Tensor3(std::size_t channels, std::size_t height, std::size_t width, std::vector<float> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data))
  {
    if (data_.size() != channels_ * height_ * width_)
      throw InvalidInput("Tensor3: data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(std::size_t c, std::size_t i, std::size_t j) noexcept
  {
    return data_[(c * height_ + i) * width_ + j];
  }
  float operator()(std::size_t c, std::size_t i, std::size_t j) const noexcept
  {
    return data_[(c * height_ + i) * width_ + j];
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  std::span<float> plane(std::size_t c) noexcept
  {
    return std::span<float>(data_).subspan(c * plane_size(), plane_size());
  }
  std::span<const float> plane(std::size_t c) const noexcept
  {
    return std::span<const float>(data_).subspan(c * plane_size(), plane_size());
  }

  bool same_shape(const Tensor3& other) const noexcept
  {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }

  std::string shape_string() const
  {
    return std::to_string(channels_) + "x" + std::to_string(height_) + "x" + std::to_string(width_);
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
};

/// Per-channel spatial mean and (population) standard deviation.
struct ChannelStats
{
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t channels() const noexcept { return means.size(); }

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

inline bool all_finite(std::span<const float> values) noexcept
{
  for (float v : values)
    if (!std::isfinite(v))
      return false;
  return true;
}

inline bool all_finite(const Tensor3& x) noexcept { return all_finite(x.data()); }

/// Mean and sqrt of the divide-by-HW variance of every channel. Two passes,
/// accumulated in double.
inline ChannelStats channel_moments(const Tensor3& x)
{
  if (x.channels() == 0 || x.plane_size() == 0)
    throw InvalidInput("channel_moments: empty tensor " + x.shape_string());

  const auto n = static_cast<double>(x.plane_size());
  ChannelStats stats;
  stats.means.resize(x.channels());
  stats.stds.resize(x.channels());
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const auto p = x.plane(c);
    double sum = 0.0;
    for (float v : p)
      sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (float v : p) {
      const double d = static_cast<double>(v) - mean;
      sq += d * d;
    }
    stats.means[c] = mean;
    stats.stds[c] = std::sqrt(sq / n);
  }
  return stats;
}

/// out[c,i,j] = scale[c] * x[c,i,j] + shift[c]
inline Tensor3 elementwise_affine(const Tensor3& x, std::span<const float> scale,
                                  std::span<const float> shift)
{
  if (scale.size() != x.channels() || shift.size() != x.channels())
    throw InvalidInput("elementwise_affine: expected " + std::to_string(x.channels()) +
                       " scale/shift values, got " + std::to_string(scale.size()) + "/" +
                       std::to_string(shift.size()));

  Tensor3 out(x.channels(), x.height(), x.width());
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const auto src = x.plane(c);
    auto dst = out.plane(c);
    const float s = scale[c];
    const float b = shift[c];
    for (std::size_t k = 0; k < src.size(); ++k)
      dst[k] = s * src[k] + b;
  }
  return out;
}

} // namespace depthstyle
