// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "layers.hpp"
#include "tensor.hpp"

namespace depthstyle {

struct Conv
{
  std::string name;
  ConvSpec spec;
};
struct Relu
{};
struct MaxPool2x2
{};
struct UpsampleNearest2x
{};

using Layer = std::variant<Conv, Relu, MaxPool2x2, UpsampleNearest2x>;

inline std::string layer_label(const Layer& layer)
{
  return std::visit(
    [](const auto& l) -> std::string {
      using T = std::decay_t<decltype(l)>;
      if constexpr (std::is_same_v<T, Conv>)
        return "conv " + l.name + " (" + std::to_string(l.spec.in_channels) + "->" +
               std::to_string(l.spec.out_channels) + ")";
      else if constexpr (std::is_same_v<T, Relu>)
        return "relu";
      else if constexpr (std::is_same_v<T, MaxPool2x2>)
        return "maxpool2x2";
      else
        return "upsample_nearest_2x";
    },
    layer);
}

/// Ordered layer list, read-only once built.
class Network
{
public:
  Network() = default;

  /// Throws InvalidInput if consecutive convolutions disagree on channel count.
  Network(std::string name, std::vector<Layer> layers)
    : name_(std::move(name)), layers_(std::move(layers))
  {
    std::optional<std::size_t> channels;
    for (const auto& layer : layers_) {
      if (const auto* conv = std::get_if<Conv>(&layer)) {
        conv->spec.validate();
        if (channels && *channels != conv->spec.in_channels)
          throw InvalidInput(name_ + ": " + conv->name + " expects " +
                             std::to_string(conv->spec.in_channels) + " input channels but receives " +
                             std::to_string(*channels));
        channels = conv->spec.out_channels;
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  template <class T>
  std::size_t count() const noexcept
  {
    std::size_t n = 0;
    for (const auto& l : layers_)
      n += std::holds_alternative<T>(l) ? 1 : 0;
    return n;
  }

  /// Input channels of the first convolution, if any.
  std::optional<std::size_t> input_channels() const noexcept
  {
    for (const auto& l : layers_)
      if (const auto* conv = std::get_if<Conv>(&l))
        return conv->spec.in_channels;
    return std::nullopt;
  }

  /// Output channels of the last convolution, if any.
  std::optional<std::size_t> output_channels() const noexcept
  {
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      if (const auto* conv = std::get_if<Conv>(&*it))
        return conv->spec.out_channels;
    return std::nullopt;
  }

private:
  std::string name_;
  std::vector<Layer> layers_;
};

inline Tensor3 forward(const Network& net, Tensor3 x)
{
  for (const auto& layer : net.layers()) {
    try {
      std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv>)
            x = conv2d_reflect(x, l.spec);
          else if constexpr (std::is_same_v<T, Relu>)
            relu_inplace(x);
          else if constexpr (std::is_same_v<T, MaxPool2x2>)
            x = maxpool2x2(x);
          else
            x = upsample_nearest_2x(x);
        },
        layer);
    } catch (const InvalidInput& e) {
      throw InvalidInput(net.name() + " / " + layer_label(layer) + ": " + e.what());
    }
  }
  return x;
}

} // namespace depthstyle
