// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <thread>

#include <gtest/gtest.h>

#include "depthstyle/pipeline.hpp"
#include "support/fixtures.hpp"

namespace ds = depthstyle;
using ds::test::pattern_image;
using ds::test::synthetic_engine;

namespace {

std::vector<ds::RasterImage> one_style(std::uint64_t seed = 100)
{
  return {pattern_image(32, 24, seed)};
}

ds::RawDepth ramp_depth(std::size_t h, std::size_t w)
{
  ds::RawDepth d{h, w, std::vector<double>(h * w)};
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      d.values[i * w + j] = static_cast<double>(i + 2 * j);
  return d;
}

} // namespace

TEST(Stylize, AlphaZeroIsReconstruction)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(24, 40, 1);
  ds::StylizeParams params;
  params.alpha = 0.0;
  EXPECT_EQ(ds::stylize(engine, content, one_style(), std::nullopt, params),
            ds::reconstruct(engine, content));
  EXPECT_EQ(ds::stylize(engine, content, one_style(), ramp_depth(24, 40), params),
            ds::reconstruct(engine, content));
}

TEST(Stylize, UnitMaskIsPlainAdain)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(24, 40, 2);
  const auto styles = one_style();
  const auto plain = ds::stylize_adain(engine, content, styles);
  EXPECT_EQ(ds::stylize(engine, content, styles, std::nullopt, {}), plain);

  std::vector<std::string> warnings;
  const ds::RawDepth flat{24, 40, std::vector<double>(24 * 40, 0.6)};
  EXPECT_EQ(ds::stylize(engine, content, styles, flat, {},
                        [&](std::string_view w) { warnings.emplace_back(w); }),
            plain);
  EXPECT_EQ(warnings.size(), 1u);

  ds::StylizeParams explicit_ones;
  explicit_ones.explicit_mask = ds::DepthMask(24, 40, 1.0f);
  EXPECT_EQ(ds::stylize(engine, content, styles, std::nullopt, explicit_ones), plain);
}

TEST(Stylize, DepthChangesOutput)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(32, 32, 3);
  const auto with_depth = ds::stylize(engine, content, one_style(), ramp_depth(32, 32), {});
  EXPECT_NE(with_depth, ds::stylize_adain(engine, content, one_style()));
  EXPECT_NE(with_depth, ds::reconstruct(engine, content));
}

TEST(Stylize, OutputMatchesContentSize)
{
  const auto& engine = synthetic_engine();
  for (auto [h, w] : {std::pair{16, 16}, {17, 29}, {24, 40}, {37, 53}}) {
    const auto content = pattern_image(h, w, 4);
    const auto out = ds::stylize(engine, content, one_style(), ramp_depth(h, w), {});
    EXPECT_EQ(out.height, static_cast<std::size_t>(h));
    EXPECT_EQ(out.width, static_cast<std::size_t>(w));
    const auto rec = ds::reconstruct(engine, content);
    EXPECT_EQ(rec.height, static_cast<std::size_t>(h));
    EXPECT_EQ(rec.width, static_cast<std::size_t>(w));
  }
}

TEST(Stylize, Deterministic)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(24, 24, 5);
  ds::StylizeParams params;
  params.alpha = 0.7;
  params.depth_controls = {0.1, 0.8, true};
  const auto a = ds::stylize(engine, content, one_style(), ramp_depth(24, 24), params);
  engine.cache().clear();
  const auto b = ds::stylize(engine, content, one_style(), ramp_depth(24, 24), params);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ds::reconstruct(engine, content), ds::reconstruct(engine, content));
}

TEST(BlendFeatures, HardMaskSelectsPurePaths)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(32, 48, 6);
  // Left half 0, right half 1; at feature resolution (4x6) the boundary
  // falls between columns 2 and 3 after corner-aligned resampling.
  std::vector<float> m(32 * 48);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 48; ++j)
      m[i * 48 + j] = j < 24 ? 0.0f : 1.0f;
  ds::StylizeParams params;
  params.explicit_mask = ds::DepthMask(32, 48, m);
  const auto f = ds::blend_features(engine, content, one_style(), std::nullopt, params);
  std::size_t hard = 0;
  for (std::size_t c = 0; c < f.blended.channels(); ++c)
    for (std::size_t i = 0; i < f.blended.height(); ++i)
      for (std::size_t j = 0; j < f.blended.width(); ++j) {
        const float mv = f.mask(i, j);
        if (mv == 0.0f) {
          EXPECT_EQ(f.blended(c, i, j), f.content(c, i, j));
          ++hard;
        } else if (mv == 1.0f) {
          EXPECT_EQ(f.blended(c, i, j), f.styled(c, i, j));
          ++hard;
        }
      }
  EXPECT_GT(hard, 0u);
}

TEST(BlendFeatures, EffectiveMaskIsAlphaTimesDepth)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(32, 32, 7);
  ds::StylizeParams full;
  ds::StylizeParams half;
  half.alpha = 0.5;
  const auto a = ds::blend_features(engine, content, one_style(), ramp_depth(32, 32), full);
  const auto b = ds::blend_features(engine, content, one_style(), ramp_depth(32, 32), half);
  for (std::size_t k = 0; k < a.mask.values().size(); ++k)
    EXPECT_FLOAT_EQ(b.mask.values()[k], 0.5f * a.mask.values()[k]);
  // Corner-aligned: nearest corner 0, farthest corner 1.
  EXPECT_EQ(a.mask.values().front(), 0.0f);
  EXPECT_EQ(a.mask.values().back(), 1.0f);

  const auto none = ds::blend_features(engine, content, one_style(), std::nullopt, half);
  for (float v : none.mask.values())
    EXPECT_EQ(v, 0.5f);
}

TEST(Stylize, InputErrors)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(16, 16, 8);
  EXPECT_THROW(ds::stylize(engine, content, one_style(), ramp_depth(16, 17), {}),
               ds::InvalidInput);
  ds::StylizeParams both;
  both.explicit_mask = ds::DepthMask(16, 16, 0.5f);
  EXPECT_THROW(ds::stylize(engine, content, one_style(), ramp_depth(16, 16), both),
               ds::InvalidInput);
  EXPECT_THROW(ds::stylize(engine, content, {}, std::nullopt, {}), ds::InvalidInput);
  ds::StylizeParams bad_alpha;
  bad_alpha.alpha = 1.2;
  EXPECT_THROW(ds::stylize(engine, content, one_style(), std::nullopt, bad_alpha),
               ds::InvalidInput);
  ds::StylizeParams bad_weights;
  bad_weights.style_weights = {0.5};
  const std::vector<ds::RasterImage> two{pattern_image(16, 16, 9), pattern_image(16, 16, 10)};
  EXPECT_THROW(ds::stylize(engine, content, two, std::nullopt, bad_weights), ds::InvalidInput);
  bad_weights.style_weights = {0.5, 0.6};
  EXPECT_THROW(ds::stylize(engine, content, two, std::nullopt, bad_weights), ds::InvalidInput);
}

TEST(Stylize, StyleMixingSelectsSingleStyle)
{
  const auto& engine = synthetic_engine();
  const auto content = pattern_image(16, 24, 11);
  const std::vector<ds::RasterImage> two{pattern_image(24, 24, 12), pattern_image(16, 32, 13)};
  ds::StylizeParams first_only;
  first_only.style_weights = {1.0, 0.0};
  EXPECT_EQ(ds::stylize(engine, content, two, std::nullopt, first_only),
            ds::stylize(engine, content, std::vector{two[0]}, std::nullopt, {}));
  ds::StylizeParams even;
  EXPECT_NE(ds::stylize(engine, content, two, std::nullopt, even),
            ds::stylize(engine, content, std::vector{two[0]}, std::nullopt, {}));
}

TEST(StyleCache, CachedEqualsUncached)
{
  const auto& engine = synthetic_engine();
  const auto style = pattern_image(24, 32, 14);
  engine.cache().clear();
  const auto direct = ds::summarize_style(engine, style);
  EXPECT_EQ(direct.channels(), ds::manifest::feature_channels);
  const auto first = ds::style_summary_cache(engine, style);
  EXPECT_EQ(engine.cache().size(), 1u);
  const auto second = ds::style_summary_cache(engine, style);
  EXPECT_EQ(engine.cache().size(), 1u);
  EXPECT_EQ(first, direct);
  EXPECT_EQ(second, direct);

  const auto content = pattern_image(16, 16, 15);
  const auto cached = ds::stylize(engine, content, std::vector{style}, std::nullopt, {});
  engine.cache().clear();
  const auto uncached = ds::stylize(engine, content, std::vector{style}, std::nullopt, {});
  EXPECT_EQ(cached, uncached);
}

TEST(StyleCache, DistinctImagesGetDistinctKeys)
{
  const auto a = ds::test::noise_image(8, 8, 1);
  auto b = a;
  b.pixels[17] ^= 1;
  EXPECT_NE(ds::style_key(a), ds::style_key(b));
  EXPECT_EQ(ds::style_key(a), ds::style_key(ds::test::noise_image(8, 8, 1)));
  // Same bytes, different geometry.
  const ds::RasterImage wide(1, 4, std::vector<std::uint8_t>(12, 9));
  const ds::RasterImage tall(4, 1, std::vector<std::uint8_t>(12, 9));
  EXPECT_NE(ds::style_key(wide), ds::style_key(tall));

  const auto& engine = synthetic_engine();
  engine.cache().clear();
  const auto sa = ds::style_summary_cache(engine, pattern_image(16, 16, 20));
  const auto sb = ds::style_summary_cache(engine, pattern_image(16, 16, 21));
  EXPECT_EQ(engine.cache().size(), 2u);
  EXPECT_NE(sa, sb);
}

TEST(Engine, ConcurrentStylizeMatchesSerial)
{
  const auto& engine = synthetic_engine();
  engine.cache().clear();
  std::vector<ds::RasterImage> contents;
  for (std::uint64_t s = 0; s < 4; ++s)
    contents.push_back(pattern_image(16, 24, 30 + s));
  const std::vector<ds::RasterImage> styles{pattern_image(16, 16, 40), pattern_image(24, 16, 41)};
  ds::StylizeParams params;
  params.style_weights = {0.3, 0.7};

  std::vector<ds::RasterImage> parallel(contents.size());
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < contents.size(); ++k)
    threads.emplace_back([&, k] {
      parallel[k] = ds::stylize(engine, contents[k], styles, std::nullopt, params);
    });
  for (auto& t : threads)
    t.join();
  EXPECT_EQ(engine.cache().size(), 2u);
  for (std::size_t k = 0; k < contents.size(); ++k)
    EXPECT_EQ(parallel[k], ds::stylize(engine, contents[k], styles, std::nullopt, params));
}

TEST(Engine, RejectsMismatchedNetworks)
{
  EXPECT_THROW(ds::Engine(ds::Network("e", {}), ds::Network("d", {})), ds::InvalidInput);
  const auto enc = ds::build_encoder(ds::synthetic_encoder_weights(1));
  EXPECT_THROW(ds::Engine(enc, enc), ds::InvalidInput);
}
