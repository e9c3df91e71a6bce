// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace depthstyle {

/// Relative depth as read from disk, larger = farther. Any finite scale.
struct RawDepth
{
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const noexcept { return values[i * width + j]; }
};

/// Single-channel mask with every value in [0, 1].
class DepthMask
{
public:
  DepthMask() = default;

  DepthMask(std::size_t height, std::size_t width, float fill)
    : DepthMask(height, width, std::vector<float>(height * width, fill))
  {}

  DepthMask(std::size_t height, std::size_t width, std::vector<float> values)
    : height_(height), width_(width), values_(std::move(values))
  {
    if (height_ == 0 || width_ == 0)
      throw InvalidInput("DepthMask: dimensions must be at least 1x1");
    if (values_.size() != height_ * width_)
      throw InvalidInput("DepthMask: " + std::to_string(values_.size()) + " values for " +
                         std::to_string(height_) + "x" + std::to_string(width_));
    for (float v : values_)
      if (!(v >= 0.0f && v <= 1.0f))
        throw InvalidInput("DepthMask: value " + std::to_string(v) + " outside [0, 1]");
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  const std::vector<float>& values() const noexcept { return values_; }
  float operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * width_ + j]; }

  friend bool operator==(const DepthMask&, const DepthMask&) = default;

private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> values_;
};

/// Strength shaping: values are rescaled from [dmin, dmax] to [0, 1] with
/// saturation, then optionally flipped.
struct DepthControls
{
  double dmin = 0.0;
  double dmax = 1.0;
  bool invert = false;

  void validate() const
  {
    if (!(std::isfinite(dmin) && std::isfinite(dmax) && dmin < dmax))
      throw InvalidInput("depth controls: need finite dmin < dmax, got dmin=" +
                         std::to_string(dmin) + " dmax=" + std::to_string(dmax));
  }
};

/// Min-max rescale to [0, 1]: the nearest pixel maps to 0, the farthest to 1.
/// Throws DegenerateDepth for a constant map.
inline DepthMask normalize_depth(const RawDepth& raw)
{
  if (raw.values.empty() || raw.values.size() != raw.height * raw.width)
    throw InvalidInput("normalize_depth: malformed depth array");
  for (double v : raw.values)
    if (!std::isfinite(v))
      throw InvalidInput("normalize_depth: non-finite depth value");

  const auto [lo_it, hi_it] = std::minmax_element(raw.values.begin(), raw.values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0))
    throw DegenerateDepth("normalize_depth: depth map is constant");

  std::vector<float> out(raw.values.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = static_cast<float>(std::clamp((raw.values[k] - lo) / range, 0.0, 1.0));
  return DepthMask(raw.height, raw.width, std::move(out));
}

inline DepthMask shape_mask(const DepthMask& mask, const DepthControls& controls)
{
  controls.validate();
  const double span = controls.dmax - controls.dmin;
  std::vector<float> out(mask.values().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double v = std::clamp((mask.values()[k] - controls.dmin) / span, 0.0, 1.0);
    if (controls.invert)
      v = 1.0 - v;
    out[k] = static_cast<float>(v);
  }
  return DepthMask(mask.height(), mask.width(), std::move(out));
}

namespace detail {

// Corner-aligned source coordinate for output index i of n_out samples.
inline double aligned_coord(std::size_t i, std::size_t n_in, std::size_t n_out) noexcept
{
  if (n_out == 1 || n_in == 1)
    return 0.0;
  return static_cast<double>(i) * static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1);
}

// a + t (b - a), kept inside [min(a, b), max(a, b)].
inline double lerp_bounded(double a, double b, double t) noexcept
{
  return std::clamp(a + t * (b - a), std::min(a, b), std::max(a, b));
}

} // namespace detail

/// Bilinear resampling with corner-aligned sampling (first and last samples
/// of each axis coincide with the source corners).
inline DepthMask resample_to(const DepthMask& mask, std::size_t height, std::size_t width)
{
  if (height == 0 || width == 0)
    throw InvalidInput("resample_to: target dimensions must be at least 1x1");

  const std::size_t h_in = mask.height();
  const std::size_t w_in = mask.width();
  std::vector<float> out(height * width);
  for (std::size_t i = 0; i < height; ++i) {
    const double y = detail::aligned_coord(i, h_in, height);
    const auto y0 = std::min(static_cast<std::size_t>(y), h_in - 1);
    const auto y1 = std::min(y0 + 1, h_in - 1);
    const double ty = y - static_cast<double>(y0);
    for (std::size_t j = 0; j < width; ++j) {
      const double x = detail::aligned_coord(j, w_in, width);
      const auto x0 = std::min(static_cast<std::size_t>(x), w_in - 1);
      const auto x1 = std::min(x0 + 1, w_in - 1);
      const double tx = x - static_cast<double>(x0);
      const double top = detail::lerp_bounded(mask(y0, x0), mask(y0, x1), tx);
      const double bottom = detail::lerp_bounded(mask(y1, x0), mask(y1, x1), tx);
      out[i * width + j] = static_cast<float>(detail::lerp_bounded(top, bottom, ty));
    }
  }
  return DepthMask(height, width, std::move(out));
}

} // namespace depthstyle
