// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "depthstyle/adain.hpp"
#include "support/oracles.hpp"

namespace ds = depthstyle;
using ds::test::random_tensor;

namespace {

ds::StyleSummary random_style(std::mt19937_64& rng, std::size_t channels, double min_std = 0.1)
{
  std::uniform_real_distribution<double> mean(-2.0, 2.0), sd(min_std, 3.0);
  ds::StyleSummary s;
  for (std::size_t c = 0; c < channels; ++c) {
    s.stats.means.push_back(mean(rng));
    s.stats.stds.push_back(sd(rng));
  }
  return s;
}

ds::StyleSummary summary(std::vector<double> means, std::vector<double> stds)
{
  return ds::StyleSummary{ds::ChannelStats{std::move(means), std::move(stds)}};
}

} // namespace

TEST(Adain, SelfStylizationIsIdentity)
{
  std::mt19937_64 rng(1);
  const auto x = random_tensor(rng, 8, 6, 6, -2.0f, 3.0f);
  const ds::StyleSummary self{ds::channel_moments(x)};
  const auto y = ds::adain(x, self, 1e-5);
  for (std::size_t k = 0; k < x.size(); ++k)
    EXPECT_NEAR(y.data()[k], x.data()[k], 1e-4);
}

TEST(Adain, HandEvaluatedExample)
{
  const ds::Tensor3 x(1, 2, 2, std::vector<float>{1, 2, 3, 4});
  const auto y = ds::adain(x, summary({0.0}, {1.0}), 0.0);
  const double expected[] = {-1.3416408, -0.4472136, 0.4472136, 1.3416408};
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(y.data()[k], expected[k], 1e-6);
}

TEST(Adain, MatchesScalarOracle)
{
  std::mt19937_64 rng(2);
  const auto x = random_tensor(rng, 5, 7, 4, -1.0f, 4.0f);
  const auto style = random_style(rng, 5);
  const auto y = ds::adain(x, style, 1e-5);
  for (std::size_t c = 0; c < 5; ++c) {
    const auto ref = ds::test::scalar_adain(ds::test::channel_values(x, c), style.stats.means[c],
                                            style.stats.stds[c], 1e-5);
    const auto got = ds::test::channel_values(y, c);
    for (std::size_t k = 0; k < ref.size(); ++k)
      EXPECT_NEAR(got[k], ref[k], 1e-5 * std::max(1.0, std::abs(ref[k])));
  }
}

TEST(Adain, ConstantChannelGoesToStyleMean)
{
  const ds::Tensor3 x(2, 3, 3, 4.0f);
  const auto style = summary({0.7, -1.5}, {2.0, 0.5});
  for (double eps : {1e-5, 0.0}) {
    const auto y = ds::adain(x, style, eps);
    ASSERT_TRUE(ds::all_finite(y));
    for (std::size_t k = 0; k < 9; ++k) {
      EXPECT_FLOAT_EQ(y.plane(0)[k], 0.7f);
      EXPECT_FLOAT_EQ(y.plane(1)[k], -1.5f);
    }
  }
}

TEST(Adain, ChannelMismatchIsInvalid)
{
  EXPECT_THROW(ds::adain(ds::Tensor3(3, 2, 2), summary({0, 0}, {1, 1})), ds::InvalidInput);
}

TEST(Adain, MomentMatching)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_tensor(rng, 16, 8, 8, -3.0f, 3.0f);
    const auto style = random_style(rng, 16);
    const auto m = ds::channel_moments(ds::adain(x, style, 1e-5));
    for (std::size_t c = 0; c < 16; ++c) {
      EXPECT_NEAR(m.means[c], style.stats.means[c], 1e-4);
      EXPECT_NEAR(m.stds[c], style.stats.stds[c], 1e-3 * style.stats.stds[c]);
    }
  }
}

TEST(Adain, StatisticsAreIdempotent)
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_tensor(rng, 6, 8, 8, -3.0f, 3.0f);
    const auto style = random_style(rng, 6);
    const auto once = ds::adain(x, style);
    const auto twice = ds::adain(once, style);
    for (std::size_t k = 0; k < once.size(); ++k)
      EXPECT_NEAR(twice.data()[k], once.data()[k], 1e-4);
  }
}

TEST(BlendGlobal, Limits)
{
  std::mt19937_64 rng(5);
  const auto s = random_tensor(rng, 3, 4, 4);
  const auto c = random_tensor(rng, 3, 4, 4);
  EXPECT_EQ(ds::blend_global(s, c, 1.0), s);
  EXPECT_EQ(ds::blend_global(s, c, 0.0), c);
  EXPECT_EQ(ds::blend_global(ds::Tensor3(2, 2, 2, 2.0f), ds::Tensor3(2, 2, 2, 0.0f), 0.5),
            ds::Tensor3(2, 2, 2, 1.0f));
}

TEST(BlendGlobal, Errors)
{
  EXPECT_THROW(ds::blend_global(ds::Tensor3(1, 2, 2), ds::Tensor3(1, 2, 3), 0.5), ds::InvalidInput);
  EXPECT_THROW(ds::blend_global(ds::Tensor3(1, 2, 2), ds::Tensor3(1, 2, 2), 1.5), ds::InvalidInput);
  EXPECT_THROW(ds::blend_global(ds::Tensor3(1, 2, 2), ds::Tensor3(1, 2, 2), -0.1), ds::InvalidInput);
}

TEST(BlendSpatial, UniformMasks)
{
  std::mt19937_64 rng(6);
  const auto s = random_tensor(rng, 3, 5, 4);
  const auto c = random_tensor(rng, 3, 5, 4);
  EXPECT_EQ(ds::blend_spatial(s, c, ds::DepthMask(5, 4, 1.0f)), s);
  EXPECT_EQ(ds::blend_spatial(s, c, ds::DepthMask(5, 4, 0.0f)), c);
  for (float a : {0.25f, 0.5f, 0.9f})
    EXPECT_EQ(ds::blend_spatial(s, c, ds::DepthMask(5, 4, a)), ds::blend_global(s, c, a));
}

TEST(BlendSpatial, SignedZeroPreservedAtMaskOne)
{
  const ds::Tensor3 s(1, 1, 2, std::vector<float>{-0.0f, 1.0f});
  const ds::Tensor3 c(1, 1, 2, std::vector<float>{5.0f, 5.0f});
  const auto out = ds::blend_spatial(s, c, ds::DepthMask(1, 2, 1.0f));
  EXPECT_TRUE(std::signbit(out.data()[0]));
}

TEST(BlendSpatial, HardMaskSelectsExactly)
{
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  const auto s = random_tensor(rng, 4, 6, 6);
  const auto c = random_tensor(rng, 4, 6, 6);
  std::vector<float> m(36);
  for (auto& v : m)
    v = coin(rng) ? 1.0f : 0.0f;
  const ds::DepthMask mask(6, 6, m);
  const auto out = ds::blend_spatial(s, c, mask);
  for (std::size_t ch = 0; ch < 4; ++ch)
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        EXPECT_EQ(out(ch, i, j), mask(i, j) == 1.0f ? s(ch, i, j) : c(ch, i, j));
}

TEST(BlendSpatial, MonotoneInMask)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  const auto s = random_tensor(rng, 2, 3, 3);
  const auto c = random_tensor(rng, 2, 3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<float> lo(9), hi(9);
    for (std::size_t k = 0; k < 9; ++k) {
      float a = u(rng), b = u(rng);
      lo[k] = std::min(a, b);
      hi[k] = std::max(a, b);
    }
    const auto out_lo = ds::blend_spatial(s, c, ds::DepthMask(3, 3, lo));
    const auto out_hi = ds::blend_spatial(s, c, ds::DepthMask(3, 3, hi));
    for (std::size_t ch = 0; ch < 2; ++ch)
      for (std::size_t k = 0; k < 9; ++k) {
        const float target = s.plane(ch)[k];
        // Higher mask is never farther from the styled value.
        EXPECT_LE(std::abs(out_hi.plane(ch)[k] - target),
                  std::abs(out_lo.plane(ch)[k] - target) + 1e-6f);
      }
  }
}

TEST(BlendSpatial, Errors)
{
  const ds::Tensor3 t(2, 4, 4);
  EXPECT_THROW(ds::blend_spatial(t, t, ds::DepthMask(4, 3, 0.5f)), ds::InvalidInput);
  EXPECT_THROW(ds::blend_spatial(t, ds::Tensor3(3, 4, 4), ds::DepthMask(4, 4, 0.5f)),
               ds::InvalidInput);
  EXPECT_THROW(ds::DepthMask(2, 2, std::vector<float>{0, 0.5f, 1.2f, 0}), ds::InvalidInput);
}

TEST(MixStyles, Cases)
{
  std::mt19937_64 rng(9);
  const auto a = random_style(rng, 4);
  const auto b = random_style(rng, 4);
  const std::vector<ds::StyleSummary> one{a};
  EXPECT_EQ(ds::mix_styles(one, std::vector<double>{1.0}), a);
  const std::vector<ds::StyleSummary> twins{a, a};
  EXPECT_EQ(ds::mix_styles(twins, std::vector<double>{0.5, 0.5}), a);
  const std::vector<ds::StyleSummary> pair{a, b};
  EXPECT_EQ(ds::mix_styles(pair, std::vector<double>{1.0, 0.0}), a);

  const std::vector<ds::StyleSummary> means{summary({0.0}, {1.0}), summary({2.0}, {3.0})};
  const auto mixed = ds::mix_styles(means, std::vector<double>{0.25, 0.75});
  EXPECT_DOUBLE_EQ(mixed.stats.means[0], 1.5);
  EXPECT_DOUBLE_EQ(mixed.stats.stds[0], 2.5);
}

TEST(MixStyles, Errors)
{
  const std::vector<ds::StyleSummary> none;
  EXPECT_THROW(ds::mix_styles(none, std::vector<double>{}), ds::InvalidInput);
  const std::vector<ds::StyleSummary> two{summary({0.0}, {1.0}), summary({1.0}, {1.0})};
  EXPECT_THROW(ds::mix_styles(two, std::vector<double>{0.5, 0.6}), ds::InvalidInput);
  EXPECT_THROW(ds::mix_styles(two, std::vector<double>{1.5, -0.5}), ds::InvalidInput);
  EXPECT_THROW(ds::mix_styles(two, std::vector<double>{1.0}), ds::InvalidInput);
  const std::vector<ds::StyleSummary> ragged{summary({0.0}, {1.0}), summary({0, 0}, {1, 1})};
  EXPECT_THROW(ds::mix_styles(ragged, std::vector<double>{0.5, 0.5}), ds::InvalidInput);
}
