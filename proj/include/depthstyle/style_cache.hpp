// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <openssl/evp.h>

#include "adain.hpp"
#include "error.hpp"
#include "image_io.hpp"

namespace depthstyle {

using StyleKey = std::array<std::uint8_t, 32>;

/// SHA-256 over (height, width, RGB bytes) of a decoded style image.
inline StyleKey style_key(const RasterImage& img)
{
  std::string buf;
  buf.reserve(16 + img.pixels.size());
  for (std::uint64_t dim : {std::uint64_t(img.height), std::uint64_t(img.width)})
    for (int i = 0; i < 8; ++i)
      buf.push_back(static_cast<char>(dim >> (8 * i)));
  buf.append(img.pixels.begin(), img.pixels.end());

  StyleKey key{};
  unsigned int len = 0;
  if (EVP_Digest(buf.data(), buf.size(), key.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != key.size())
    throw Error("style_key: SHA-256 failed");
  return key;
}

/// Content-addressed StyleSummary store; safe for concurrent lookup/insert.
class StyleCache
{
public:
  std::optional<StyleSummary> find(const StyleKey& key) const
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end())
      return std::nullopt;
    return it->second;
  }

  /// Keeps the first summary stored under a key.
  void insert(const StyleKey& key, StyleSummary summary)
  {
    std::unique_lock lock(mutex_);
    entries_.try_emplace(key, std::move(summary));
  }

  std::size_t size() const
  {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  void clear()
  {
    std::unique_lock lock(mutex_);
    entries_.clear();
  }

private:
  mutable std::shared_mutex mutex_;
  std::map<StyleKey, StyleSummary> entries_;
};

} // namespace depthstyle
