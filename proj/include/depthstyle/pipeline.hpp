// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adain.hpp"
#include "depth.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "manifest.hpp"
#include "network.hpp"
#include "style_cache.hpp"
#include "weights.hpp"

// Depth-controlled AdaIN stylization:
//
//   out = g( M * AdaIN(f(content), style) + (1 - M) * f(content) ),  M = alpha * D
//
// f is the relu4_1 encoder, g the decoder, D the shaped depth (or explicit)
// mask resampled to feature resolution. Without a mask D is 1 everywhere.

namespace depthstyle {

struct StylizeParams
{
  double alpha = 1.0;
  DepthControls depth_controls{};
  /// One weight per style; empty means equal weights.
  std::vector<double> style_weights;
  /// Used instead of a depth map; mutually exclusive with one.
  std::optional<DepthMask> explicit_mask;
  double epsilon = default_epsilon;
};

/// Encoder/decoder pair plus the style-summary cache. One engine may serve
/// concurrent stylize calls.
class Engine
{
public:
  Engine(Network encoder, Network decoder)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)),
      cache_(std::make_shared<StyleCache>())
  {
    if (encoder_.count<MaxPool2x2>() != 3 || decoder_.count<UpsampleNearest2x>() != 3)
      throw InvalidInput("Engine: encoder needs 3 max-pool and decoder 3 upsample layers");
    if (encoder_.output_channels() != decoder_.input_channels())
      throw InvalidInput("Engine: encoder output and decoder input channels differ");
    if (encoder_.input_channels() != 3 || decoder_.output_channels() != 3)
      throw InvalidInput("Engine: networks must map RGB to RGB");
  }

  Engine(const WeightStore& encoder_weights, const WeightStore& decoder_weights)
    : Engine(build_encoder(encoder_weights), build_decoder(decoder_weights))
  {}

  /// Loads encoder.adsw and decoder.adsw from a directory.
  static Engine from_directory(const std::filesystem::path& dir)
  {
    return Engine(adsw::load_file(dir / "encoder.adsw"), adsw::load_file(dir / "decoder.adsw"));
  }

  const Network& encoder() const noexcept { return encoder_; }
  const Network& decoder() const noexcept { return decoder_; }
  StyleCache& cache() const noexcept { return *cache_; }

  /// relu4_1 features of a padded [0, 1] RGB tensor.
  Tensor3 encode(const Tensor3& rgb) const { return forward(encoder_, rgb); }
  Tensor3 decode(const Tensor3& features) const { return forward(decoder_, features); }

private:
  Network encoder_;
  Network decoder_;
  std::shared_ptr<StyleCache> cache_;
};

namespace detail {

inline void check_image(const RasterImage& img, const char* what)
{
  if (img.height == 0 || img.width == 0)
    throw InvalidInput(std::string(what) + " image is empty");
}

inline RasterImage decode_to_image(const Engine& engine, const Tensor3& features,
                                   std::size_t height, std::size_t width)
{
  return from_tensor(crop(engine.decode(features), height, width));
}

} // namespace detail

/// Channel moments of a style image's relu4_1 features, computed without
/// touching the cache.
inline StyleSummary summarize_style(const Engine& engine, const RasterImage& style)
{
  detail::check_image(style, "style");
  const auto padded = pad_to_multiple(to_tensor(style), manifest::downsample_factor);
  return StyleSummary{channel_moments(engine.encode(padded.tensor))};
}

/// Cached summarize_style, keyed by the SHA-256 of the decoded raster.
inline StyleSummary style_summary_cache(const Engine& engine, const RasterImage& style)
{
  const auto key = style_key(style);
  if (auto hit = engine.cache().find(key))
    return *std::move(hit);
  auto summary = summarize_style(engine, style);
  engine.cache().insert(key, summary);
  return summary;
}

/// Summaries of all styles mixed with params.style_weights.
inline StyleSummary mixed_style(const Engine& engine, std::span<const RasterImage> styles,
                                const StylizeParams& params)
{
  if (styles.empty())
    throw InvalidInput("stylize: at least one style image is required");
  std::vector<double> weights = params.style_weights;
  if (weights.empty())
    weights.assign(styles.size(), 1.0 / static_cast<double>(styles.size()));
  if (weights.size() != styles.size())
    throw InvalidInput("stylize: " + std::to_string(styles.size()) + " styles but " +
                       std::to_string(weights.size()) + " style weights");
  std::vector<StyleSummary> summaries;
  summaries.reserve(styles.size());
  for (const auto& s : styles)
    summaries.push_back(style_summary_cache(engine, s));
  return mix_styles(summaries, weights);
}

/// Everything up to (not including) decoding. Exposed for inspection.
struct FeatureBlend
{
  Tensor3 content;  ///< f(content), padded geometry
  Tensor3 styled;   ///< AdaIN(f(content), style)
  DepthMask mask;   ///< effective mask M = alpha * D at feature resolution
  Tensor3 blended;  ///< M * styled + (1 - M) * content
  std::size_t height = 0;
  std::size_t width = 0;
};

/// Image-resolution strength map D: normalized + shaped depth, the shaped
/// explicit mask, or nothing.
inline std::optional<DepthMask> strength_map(const RasterImage& content,
                                             const std::optional<RawDepth>& depth,
                                             const StylizeParams& params,
                                             const WarningSink& warn)
{
  if (depth && params.explicit_mask)
    throw InvalidInput("stylize: a depth map and an explicit mask are mutually exclusive");

  std::optional<DepthMask> d;
  if (depth) {
    if (depth->height != content.height || depth->width != content.width)
      throw InvalidInput("stylize: depth map is " + std::to_string(depth->height) + "x" +
                         std::to_string(depth->width) + ", content is " +
                         std::to_string(content.height) + "x" + std::to_string(content.width));
    try {
      d = normalize_depth(*depth);
    } catch (const DegenerateDepth&) {
      if (warn)
        warn("depth map is constant; stylizing uniformly");
      d = DepthMask(depth->height, depth->width, 1.0f);
    }
  } else if (params.explicit_mask) {
    if (params.explicit_mask->height() != content.height ||
        params.explicit_mask->width() != content.width)
      throw InvalidInput("stylize: mask is " + std::to_string(params.explicit_mask->height()) +
                         "x" + std::to_string(params.explicit_mask->width()) + ", content is " +
                         std::to_string(content.height) + "x" + std::to_string(content.width));
    d = *params.explicit_mask;
  }
  if (d)
    d = shape_mask(*d, params.depth_controls);
  return d;
}

inline FeatureBlend blend_features(const Engine& engine, const RasterImage& content,
                                   std::span<const RasterImage> styles,
                                   const std::optional<RawDepth>& depth,
                                   const StylizeParams& params, const WarningSink& warn = {})
{
  detail::check_image(content, "content");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw InvalidInput("stylize: alpha " + std::to_string(params.alpha) + " outside [0, 1]");
  params.depth_controls.validate();

  auto d = strength_map(content, depth, params, warn);
  const auto style = mixed_style(engine, styles, params);

  FeatureBlend out;
  out.height = content.height;
  out.width = content.width;
  const auto padded = pad_to_multiple(to_tensor(content), manifest::downsample_factor);
  out.content = engine.encode(padded.tensor);
  out.styled = adain(out.content, style, params.epsilon);

  const std::size_t fh = out.content.height();
  const std::size_t fw = out.content.width();
  const auto alpha = static_cast<float>(params.alpha);
  if (d) {
    auto at_features =
      resample_to(pad_mask(*d, padded.tensor.height(), padded.tensor.width()), fh, fw);
    std::vector<float> m = at_features.values();
    if (alpha != 1.0f)
      for (float& v : m)
        v *= alpha;
    out.mask = DepthMask(fh, fw, std::move(m));
  } else {
    out.mask = DepthMask(fh, fw, alpha);
  }
  out.blended = blend_spatial(out.styled, out.content, out.mask);
  return out;
}

/// Full depth-controlled stylization. Output has the content's dimensions.
inline RasterImage stylize(const Engine& engine, const RasterImage& content,
                           std::span<const RasterImage> styles,
                           const std::optional<RawDepth>& depth, const StylizeParams& params,
                           const WarningSink& warn = {})
{
  const auto f = blend_features(engine, content, styles, depth, params, warn);
  return detail::decode_to_image(engine, f.blended, f.height, f.width);
}

/// Plain AdaIN: g(AdaIN(f(content), style)), no strength control.
inline RasterImage stylize_adain(const Engine& engine, const RasterImage& content,
                                 std::span<const RasterImage> styles,
                                 const StylizeParams& params = {})
{
  detail::check_image(content, "content");
  const auto style = mixed_style(engine, styles, params);
  const auto padded = pad_to_multiple(to_tensor(content), manifest::downsample_factor);
  const auto styled = adain(engine.encode(padded.tensor), style, params.epsilon);
  return detail::decode_to_image(engine, styled, content.height, content.width);
}

/// g(f(content)): the zero-style baseline.
inline RasterImage reconstruct(const Engine& engine, const RasterImage& content)
{
  detail::check_image(content, "content");
  const auto padded = pad_to_multiple(to_tensor(content), manifest::downsample_factor);
  return detail::decode_to_image(engine, engine.encode(padded.tensor), content.height,
                                 content.width);
}

} // namespace depthstyle
