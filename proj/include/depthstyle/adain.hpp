// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "depth.hpp"
#include "error.hpp"
#include "tensor.hpp"

namespace depthstyle {

/// A style, as far as AdaIN is concerned: channel moments of its features.
struct StyleSummary
{
  ChannelStats stats;

  std::size_t channels() const noexcept { return stats.channels(); }

  friend bool operator==(const StyleSummary&, const StyleSummary&) = default;
};

inline constexpr double default_epsilon = 1e-5;

/// Renormalizes every channel of x to the style's mean and standard deviation:
///
///   out[c,i,j] = sigma_c(style) * (x[c,i,j] - mu_c(x)) / sqrt(sigma_c(x)^2 + eps) + mu_c(style)
///
/// A channel whose denominator is exactly zero (constant channel with eps = 0)
/// has an all-zero numerator and is set to mu_c(style).
inline Tensor3 adain(const Tensor3& x, const StyleSummary& style, double epsilon = default_epsilon)
{
  if (style.stats.means.size() != x.channels() || style.stats.stds.size() != x.channels())
    throw InvalidInput("adain: style has " + std::to_string(style.channels()) +
                       " channels, features have " + std::to_string(x.channels()));
  if (!(epsilon >= 0.0))
    throw InvalidInput("adain: epsilon must be non-negative");

  const ChannelStats content = channel_moments(x);
  Tensor3 out(x.channels(), x.height(), x.width());
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const double denom =
      std::sqrt(content.stds[c] * content.stds[c] + epsilon);
    const double scale = denom > 0.0 ? style.stats.stds[c] / denom : 0.0;
    const double mu_x = content.means[c];
    const double mu_y = style.stats.means[c];
    const auto src = x.plane(c);
    auto dst = out.plane(c);
    for (std::size_t k = 0; k < src.size(); ++k)
      dst[k] = static_cast<float>(scale * (static_cast<double>(src[k]) - mu_x) + mu_y);
  }
  return out;
}

namespace detail {

// m*s + (1-m)*c, returning s or c verbatim at m == 1 or m == 0.
inline float mix(float styled, float content, float m) noexcept
{
  if (m == 1.0f)
    return styled;
  if (m == 0.0f)
    return content;
  return m * styled + (1.0f - m) * content;
}

inline void require_same_shape(const Tensor3& a, const Tensor3& b, const char* op)
{
  if (!a.same_shape(b))
    throw InvalidInput(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                       b.shape_string());
}

} // namespace detail

/// alpha * styled + (1 - alpha) * content.
inline Tensor3 blend_global(const Tensor3& styled, const Tensor3& content, double alpha)
{
  detail::require_same_shape(styled, content, "blend_global");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InvalidInput("blend_global: alpha " + std::to_string(alpha) + " outside [0, 1]");
  const auto m = static_cast<float>(alpha);
  Tensor3 out(styled.channels(), styled.height(), styled.width());
  const auto s = styled.data();
  const auto c = content.data();
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k)
    o[k] = detail::mix(s[k], c[k], m);
  return out;
}

/// Per-location blend, mask broadcast over channels:
///   out[c,i,j] = mask[i,j] * styled[c,i,j] + (1 - mask[i,j]) * content[c,i,j]
inline Tensor3 blend_spatial(const Tensor3& styled, const Tensor3& content, const DepthMask& mask)
{
  detail::require_same_shape(styled, content, "blend_spatial");
  if (mask.height() != styled.height() || mask.width() != styled.width())
    throw InvalidInput("blend_spatial: mask is " + std::to_string(mask.height()) + "x" +
                       std::to_string(mask.width()) + ", features are " +
                       std::to_string(styled.height()) + "x" + std::to_string(styled.width()));
  // DepthMask enforces [0, 1] on construction.
  Tensor3 out(styled.channels(), styled.height(), styled.width());
  const auto& m = mask.values();
  for (std::size_t ch = 0; ch < styled.channels(); ++ch) {
    const auto s = styled.plane(ch);
    const auto c = content.plane(ch);
    auto o = out.plane(ch);
    for (std::size_t k = 0; k < o.size(); ++k)
      o[k] = detail::mix(s[k], c[k], m[k]);
  }
  return out;
}

/// Convex combination of style moments. Weights must be non-negative and sum
/// to 1 within 1e-6.
inline StyleSummary mix_styles(std::span<const StyleSummary> summaries,
                               std::span<const double> weights)
{
  if (summaries.empty())
    throw InvalidInput("mix_styles: no styles given");
  if (weights.size() != summaries.size())
    throw InvalidInput("mix_styles: " + std::to_string(summaries.size()) + " styles but " +
                       std::to_string(weights.size()) + " weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidInput("mix_styles: weights must be finite and non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw InvalidInput("mix_styles: weights sum to " + std::to_string(total) + ", expected 1");

  const std::size_t channels = summaries.front().channels();
  for (const auto& s : summaries)
    if (s.channels() != channels || s.stats.stds.size() != channels)
      throw InvalidInput("mix_styles: styles disagree on channel count");

  // A single style with weight 1, or any weight vector that selects one
  // style, returns that style exactly.
  for (std::size_t k = 0; k < weights.size(); ++k)
    if (weights[k] == 1.0)
      return summaries[k];

  StyleSummary mixed;
  mixed.stats.means.assign(channels, 0.0);
  mixed.stats.stds.assign(channels, 0.0);
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      mixed.stats.means[c] += weights[k] * summaries[k].stats.means[c];
      mixed.stats.stds[c] += weights[k] * summaries[k].stats.stds[c];
    }
  }
  return mixed;
}

} // namespace depthstyle
