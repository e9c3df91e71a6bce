// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include <zlib.h>

#include "error.hpp"

// ADSW weight file layout, all integers little-endian:
//
//   "ADSW" | u32 version (=1) | u32 entry count |
//   entries: u16 name length, UTF-8 name, u8 ndim, ndim x u32 dims,
//            product(dims) x binary32 payload (row-major) |
//   u32 CRC-32 over every byte after the magic.

namespace depthstyle {

struct WeightEntry
{
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> values;

  std::size_t element_count() const noexcept
  {
    std::size_t n = 1;
    for (auto d : shape)
      n *= d;
    return n;
  }

  friend bool operator==(const WeightEntry& a, const WeightEntry& b) noexcept
  {
    // Bitwise payload comparison so NaN payloads and signed zeros count.
    return a.name == b.name && a.shape == b.shape && a.values.size() == b.values.size() &&
           (a.values.empty() ||
            std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) == 0);
  }
};

/// Named tensors in insertion order. Names are unique.
class WeightStore
{
public:
  void add(std::string name, std::vector<std::uint32_t> shape, std::vector<float> values)
  {
    WeightEntry entry{std::move(name), std::move(shape), std::move(values)};
    if (entry.name.empty())
      throw FormatError("weight store: empty tensor name");
    if (entry.name.size() > std::numeric_limits<std::uint16_t>::max())
      throw FormatError("weight store: tensor name too long: " + entry.name.substr(0, 32) + "...");
    if (entry.shape.size() > std::numeric_limits<std::uint8_t>::max())
      throw FormatError("weight store: too many dimensions for '" + entry.name + "'");
    if (entry.values.size() != entry.element_count())
      throw FormatError("weight store: '" + entry.name + "' has " +
                        std::to_string(entry.values.size()) + " values but its shape holds " +
                        std::to_string(entry.element_count()));
    if (index_.contains(entry.name))
      throw FormatError("weight store: duplicate tensor name '" + entry.name + "'");
    index_.emplace(entry.name, entries_.size());
    entries_.push_back(std::move(entry));
  }

  const WeightEntry* find(std::string_view name) const
  {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  const WeightEntry& at(std::string_view name) const
  {
    if (const auto* e = find(name))
      return *e;
    throw FormatError("weight store: missing tensor '" + std::string(name) + "'");
  }

  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<WeightEntry>& entries() const noexcept { return entries_; }

  friend bool operator==(const WeightStore& a, const WeightStore& b) noexcept
  {
    return a.entries_ == b.entries_;
  }

private:
  std::vector<WeightEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace adsw {

inline constexpr std::string_view magic = "ADSW";
inline constexpr std::uint32_t version = 1;

inline std::uint32_t crc32(std::span<const std::uint8_t> bytes) noexcept
{
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t chunk = std::size_t{1} << 30;
  for (std::size_t off = 0; off < bytes.size(); off += chunk) {
    const auto len = static_cast<uInt>(std::min(chunk, bytes.size() - off));
    crc = ::crc32(crc, bytes.data() + off, len);
  }
  return static_cast<std::uint32_t>(crc);
}

namespace detail {

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v)
{
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader
{
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <class T>
  T get(std::string_view what)
  {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, std::string_view what)
  {
    need(n, what);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
  void need(std::size_t n, std::string_view what) const
  {
    if (remaining() < n)
      throw FormatError("ADSW: truncated payload while reading " + std::string(what));
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::uint8_t> save(const WeightStore& store)
{
  std::vector<std::uint8_t> out(magic.begin(), magic.end());
  detail::put_le(out, version);
  detail::put_le(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& e : store.entries()) {
    detail::put_le(out, static_cast<std::uint16_t>(e.name.size()));
    out.insert(out.end(), e.name.begin(), e.name.end());
    out.push_back(static_cast<std::uint8_t>(e.shape.size()));
    for (auto d : e.shape)
      detail::put_le(out, d);
    for (float v : e.values)
      detail::put_le(out, std::bit_cast<std::uint32_t>(v));
  }
  const auto crc = crc32(std::span(out).subspan(magic.size()));
  detail::put_le(out, crc);
  return out;
}

inline WeightStore load(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < magic.size() ||
      std::memcmp(bytes.data(), magic.data(), magic.size()) != 0)
    throw FormatError("ADSW: bad magic signature");
  if (bytes.size() < magic.size() + 4 + 4 + 4)
    throw FormatError("ADSW: truncated header");

  const auto body = bytes.subspan(magic.size(), bytes.size() - magic.size() - 4);
  detail::Reader crc_reader(bytes.subspan(bytes.size() - 4));
  const auto stored_crc = crc_reader.get<std::uint32_t>("crc");

  detail::Reader in(body);
  const auto ver = in.get<std::uint32_t>("version");
  if (ver != version)
    throw FormatError("ADSW: unsupported format version " + std::to_string(ver));
  const auto count = in.get<std::uint32_t>("entry count");

  WeightStore store;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::string where = "entry " + std::to_string(k);
    const auto name_len = in.get<std::uint16_t>(where + " name length");
    const auto name_bytes = in.take(name_len, where + " name");
    std::string name(name_bytes.begin(), name_bytes.end());
    const std::string label = "'" + name + "'";
    const auto ndim = in.get<std::uint8_t>(label + " ndim");
    std::vector<std::uint32_t> shape(ndim);
    for (auto& d : shape)
      d = in.get<std::uint32_t>(label + " dims");
    // Saturating product; anything past the remaining bytes is truncation.
    const std::size_t limit = in.remaining() / sizeof(float);
    std::size_t count_values = 1;
    for (auto d : shape) {
      if (d == 0) {
        count_values = 0;
        break;
      }
      count_values = count_values > limit / d ? limit + 1 : count_values * d;
    }
    if (count_values > limit)
      throw FormatError("ADSW: truncated payload while reading " + label + " values");
    const auto payload = in.take(count_values * sizeof(float), label + " values");
    std::vector<float> values(count_values);
    for (std::size_t i = 0; i < count_values; ++i) {
      const auto* p = payload.data() + 4 * i;
      const auto bits = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                        static_cast<std::uint32_t>(p[2]) << 16 |
                        static_cast<std::uint32_t>(p[3]) << 24;
      values[i] = std::bit_cast<float>(bits);
    }
    if (store.contains(name))
      throw FormatError("ADSW: duplicate tensor name " + label);
    store.add(std::move(name), std::move(shape), std::move(values));
  }
  if (in.remaining() != 0)
    throw FormatError("ADSW: " + std::to_string(in.remaining()) +
                      " unexpected bytes after the last entry");
  if (crc32(body) != stored_crc)
    throw FormatError("ADSW: CRC mismatch (file corrupted)");
  return store;
}

inline WeightStore load_file(const std::filesystem::path& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot open weight file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  try {
    return load(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void save_file(const WeightStore& store, const std::filesystem::path& path)
{
  const auto bytes = save(store);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot write weight file " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw IoError("short write to " + path.string());
}

} // namespace adsw
} // namespace depthstyle
