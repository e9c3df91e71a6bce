// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "manifest.hpp"
#include "weights.hpp"

// Randomly initialized, manifest-conformant weight stores. Used by the test
// suites and for exercising the CLI without a converted checkpoint.

namespace depthstyle {

namespace detail {

template <std::size_t N>
WeightStore synthetic_store(const std::array<manifest::Step, N>& steps, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  WeightStore store;
  store.add(std::string(manifest::pixel_range_entry), {2},
            {manifest::pixel_range_low, manifest::pixel_range_high});
  for (const auto& s : steps) {
    if (s.kind != manifest::Step::Kind::conv)
      continue;
    // He-normal keeps activation scale roughly constant through the ReLU stack.
    std::normal_distribution<float> weight_dist(0.0f, std::sqrt(2.0f / (9.0f * s.in)));
    std::uniform_real_distribution<float> bias_dist(-0.05f, 0.05f);
    std::vector<float> w(std::size_t{s.out} * s.in * 9);
    for (auto& v : w)
      v = weight_dist(rng);
    std::vector<float> b(s.out);
    for (auto& v : b)
      v = bias_dist(rng);
    const std::string base(s.name);
    store.add(base + ".weight", {s.out, s.in, 3, 3}, std::move(w));
    store.add(base + ".bias", {s.out}, std::move(b));
  }
  return store;
}

} // namespace detail

inline WeightStore synthetic_encoder_weights(std::uint64_t seed = 1)
{
  return detail::synthetic_store(manifest::encoder_steps, seed);
}

inline WeightStore synthetic_decoder_weights(std::uint64_t seed = 2)
{
  return detail::synthetic_store(manifest::decoder_steps, seed);
}

} // namespace depthstyle
