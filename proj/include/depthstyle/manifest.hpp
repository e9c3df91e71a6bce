// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "network.hpp"
#include "weights.hpp"

// Fixed layer manifest for the encoder (VGG-19 prefix through relu4_1) and the
// mirrored decoder. docs/manifest.txt is rendered from these tables and a test
// keeps the two in sync.

namespace depthstyle::manifest {

inline constexpr std::string_view pixel_range_entry = "meta.pixel_range";
inline constexpr float pixel_range_low = 0.0f;
inline constexpr float pixel_range_high = 1.0f;
inline constexpr std::string_view vgg_variant =
  "normalized-vgg19 (AdaIN release); 1x1 input conv folded into enc.conv1_1 by the exporter";

/// One step of a network description: a named conv, or a parameter-free op.
struct Step
{
  enum class Kind { conv, relu, pool, upsample } kind;
  std::string_view name = {};
  std::uint32_t in = 0;
  std::uint32_t out = 0;
};

namespace detail {
using K = Step::Kind;
inline constexpr Step relu{K::relu};
inline constexpr Step pool{K::pool};
inline constexpr Step up{K::upsample};
constexpr Step conv(std::string_view name, std::uint32_t in, std::uint32_t out)
{
  return Step{K::conv, name, in, out};
}
} // namespace detail

inline constexpr auto encoder_steps = std::to_array<Step>({
  detail::conv("enc.conv1_1", 3, 64), detail::relu,
  detail::conv("enc.conv1_2", 64, 64), detail::relu,
  detail::pool,
  detail::conv("enc.conv2_1", 64, 128), detail::relu,
  detail::conv("enc.conv2_2", 128, 128), detail::relu,
  detail::pool,
  detail::conv("enc.conv3_1", 128, 256), detail::relu,
  detail::conv("enc.conv3_2", 256, 256), detail::relu,
  detail::conv("enc.conv3_3", 256, 256), detail::relu,
  detail::conv("enc.conv3_4", 256, 256), detail::relu,
  detail::pool,
  detail::conv("enc.conv4_1", 256, 512), detail::relu, // relu4_1
});

// No ReLU after the last conv.
inline constexpr auto decoder_steps = std::to_array<Step>({
  detail::conv("dec.conv4_1", 512, 256), detail::relu,
  detail::up,
  detail::conv("dec.conv3_4", 256, 256), detail::relu,
  detail::conv("dec.conv3_3", 256, 256), detail::relu,
  detail::conv("dec.conv3_2", 256, 256), detail::relu,
  detail::conv("dec.conv3_1", 256, 128), detail::relu,
  detail::up,
  detail::conv("dec.conv2_2", 128, 128), detail::relu,
  detail::conv("dec.conv2_1", 128, 64), detail::relu,
  detail::up,
  detail::conv("dec.conv1_2", 64, 64), detail::relu,
  detail::conv("dec.conv1_1", 64, 3),
});

inline constexpr std::size_t feature_channels = 512;
inline constexpr std::size_t downsample_factor = 8;

struct TensorSpec
{
  std::string name;
  std::vector<std::uint32_t> shape;
};

/// Every tensor a store must hold for the given steps, in canonical order.
template <std::size_t N>
std::vector<TensorSpec> tensor_specs(const std::array<Step, N>& steps)
{
  std::vector<TensorSpec> specs;
  specs.push_back({std::string(pixel_range_entry), {2}});
  for (const auto& s : steps) {
    if (s.kind != Step::Kind::conv)
      continue;
    specs.push_back({std::string(s.name) + ".weight", {s.out, s.in, 3, 3}});
    specs.push_back({std::string(s.name) + ".bias", {s.out}});
  }
  return specs;
}

inline std::string shape_string(const std::vector<std::uint32_t>& shape)
{
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i)
    s += (i ? "," : "") + std::to_string(shape[i]);
  return s + "]";
}

/// Checks presence and shape of every manifest tensor and the pixel range.
/// Extra entries are ignored.
template <std::size_t N>
void validate(const WeightStore& store, const std::array<Step, N>& steps, std::string_view what)
{
  for (const auto& spec : tensor_specs(steps)) {
    const auto* entry = store.find(spec.name);
    if (entry == nullptr)
      throw FormatError(std::string(what) + " weights: missing tensor '" + spec.name + "'");
    if (entry->shape != spec.shape)
      throw FormatError(std::string(what) + " weights: tensor '" + spec.name + "' has shape " +
                        shape_string(entry->shape) + ", manifest requires " +
                        shape_string(spec.shape));
  }
  const auto& range = store.at(pixel_range_entry).values;
  if (range[0] != pixel_range_low || range[1] != pixel_range_high)
    throw FormatError(std::string(what) + " weights: pixel_range [" + std::to_string(range[0]) +
                      ", " + std::to_string(range[1]) + "] does not match the engine's [0, 1]");
}

template <std::size_t N>
Network build(const WeightStore& store, const std::array<Step, N>& steps, std::string_view what)
{
  validate(store, steps, what);
  std::vector<Layer> layers;
  layers.reserve(N);
  for (const auto& s : steps) {
    switch (s.kind) {
    case Step::Kind::conv: {
      const std::string base(s.name);
      ConvSpec spec{s.in, s.out, store.at(base + ".weight").values, store.at(base + ".bias").values};
      layers.emplace_back(Conv{base, std::move(spec)});
      break;
    }
    case Step::Kind::relu:
      layers.emplace_back(Relu{});
      break;
    case Step::Kind::pool:
      layers.emplace_back(MaxPool2x2{});
      break;
    case Step::Kind::upsample:
      layers.emplace_back(UpsampleNearest2x{});
      break;
    }
  }
  return Network(std::string(what), std::move(layers));
}

/// Manifest as published in docs/manifest.txt.
inline std::string render()
{
  std::ostringstream os;
  os << "# depthstyle layer manifest\n"
     << "format ADSW 1\n"
     << "pixel_range " << pixel_range_low << " " << pixel_range_high << "\n"
     << "padding reflect 1\n"
     << "vgg_variant " << vgg_variant << "\n";
  auto section = [&](std::string_view title, const auto& steps) {
    os << "\n[" << title << "]\n";
    for (const auto& s : steps) {
      switch (s.kind) {
      case Step::Kind::conv:
        os << "conv " << s.name << " " << s.in << " " << s.out << "\n";
        break;
      case Step::Kind::relu:
        os << "relu\n";
        break;
      case Step::Kind::pool:
        os << "maxpool2x2\n";
        break;
      case Step::Kind::upsample:
        os << "upsample_nearest_2x\n";
        break;
      }
    }
    os << "tensors:\n";
    for (const auto& t : tensor_specs(steps))
      os << "  " << t.name << " " << shape_string(t.shape) << "\n";
  };
  section("encoder", encoder_steps);
  section("decoder", decoder_steps);
  return os.str();
}

} // namespace depthstyle::manifest

namespace depthstyle {

/// VGG-19 prefix through relu4_1. Store must satisfy the encoder manifest.
inline Network build_encoder(const WeightStore& store)
{
  return manifest::build(store, manifest::encoder_steps, "encoder");
}

/// Mirror of the encoder, upsampling in place of pooling, linear output layer.
inline Network build_decoder(const WeightStore& store)
{
  return manifest::build(store, manifest::decoder_steps, "decoder");
}

} // namespace depthstyle
