// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "error.hpp"

// Minimal raster codecs: binary PNM (P5/P6) and PNG via libpng. Samples are
// returned as-is (8-bit, or 16-bit host-order for 16-bit grayscale); callers
// decide how to map them to reals.

namespace depthstyle::codec {

struct Rgb8
{
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels; // interleaved RGB
  bool alpha_stripped = false;
};

struct Gray
{
  std::size_t height = 0;
  std::size_t width = 0;
  std::uint32_t max_value = 255; // 255 or 65535 for PNG, the header maxval for PGM
  std::vector<std::uint16_t> samples;
};

enum class Format { png, pnm };

inline Format format_for_extension(const std::filesystem::path& path)
{
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png")
    return Format::png;
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm")
    return Format::pnm;
  throw InvalidInput("unsupported image extension '" + ext + "' for " + path.string() +
                     " (use .png, .ppm or .pgm)");
}

namespace detail {

inline std::vector<std::uint8_t> read_all(const std::filesystem::path& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_all(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw IoError("short write to " + path.string());
}

inline bool is_png(const std::vector<std::uint8_t>& bytes)
{
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

// ---- PNM ----------------------------------------------------------------

struct PnmHeader
{
  char kind = 0; // '5' or '6'
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t max_value = 0;
  std::size_t data_offset = 0;
};

inline PnmHeader parse_pnm_header(const std::vector<std::uint8_t>& bytes, const std::string& what)
{
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw InvalidInput(what + ": not a binary PGM/PPM or PNG file");
  PnmHeader h;
  h.kind = static_cast<char>(bytes[1]);
  std::size_t pos = 2;
  auto next_number = [&]() -> std::uint64_t {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n')
          ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      throw InvalidInput(what + ": malformed PNM header");
    std::uint64_t v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > (std::uint64_t{1} << 32))
        throw InvalidInput(what + ": PNM header value out of range");
    }
    return v;
  };
  h.width = next_number();
  h.height = next_number();
  const auto maxval = next_number();
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw InvalidInput(what + ": malformed PNM header");
  ++pos; // single whitespace before the raster
  if (h.width == 0 || h.height == 0 || maxval == 0 || maxval > 65535)
    throw InvalidInput(what + ": invalid PNM dimensions or maxval");
  h.max_value = static_cast<std::uint32_t>(maxval);
  h.data_offset = pos;
  return h;
}

inline std::vector<std::uint16_t> pnm_samples(const std::vector<std::uint8_t>& bytes,
                                              const PnmHeader& h, std::size_t count,
                                              const std::string& what)
{
  const std::size_t bps = h.max_value > 255 ? 2 : 1;
  if (bytes.size() - h.data_offset < count * bps)
    throw InvalidInput(what + ": truncated PNM raster");
  std::vector<std::uint16_t> out(count);
  const auto* p = bytes.data() + h.data_offset;
  for (std::size_t k = 0; k < count; ++k)
    out[k] = bps == 2 ? static_cast<std::uint16_t>(p[2 * k] << 8 | p[2 * k + 1]) : p[k];
  for (auto v : out)
    if (v > h.max_value)
      throw InvalidInput(what + ": PNM sample exceeds maxval");
  return out;
}

// ---- PNG ----------------------------------------------------------------
//
// libpng reports errors by longjmp. The functions that call setjmp keep no
// non-trivial locals of their own; all state lives in caller-owned objects.

struct PngContext
{
  png_structp png = nullptr;
  png_infop info = nullptr;
  bool reading = true;
  std::array<char, 256> message{};

  ~PngContext()
  {
    if (reading)
      png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    else
      png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

inline void png_error_handler(png_structp png, png_const_charp msg)
{
  auto* ctx = static_cast<PngContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message.data(), ctx->message.size(), "%s", msg);
  png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

struct MemoryReader
{
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos = 8;
};

inline void png_read_callback(png_structp png, png_bytep out, png_size_t n)
{
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->bytes->size() - r->pos < n)
    png_error(png, "unexpected end of PNG data");
  std::memcpy(out, r->bytes->data() + r->pos, n);
  r->pos += n;
}

inline void png_write_callback(png_structp png, png_bytep data, png_size_t n)
{
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

inline void png_flush_callback(png_structp) {}

struct PngHeader
{
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  bool has_trns = false;
};

inline bool png_read_header(PngContext& ctx, MemoryReader& reader, PngHeader& header)
{
  if (setjmp(png_jmpbuf(ctx.png)))
    return false;
  png_set_read_fn(ctx.png, &reader, png_read_callback);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);
  header.width = png_get_image_width(ctx.png, ctx.info);
  header.height = png_get_image_height(ctx.png, ctx.info);
  header.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  header.color_type = png_get_color_type(ctx.png, ctx.info);
  header.has_trns = png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS) != 0;
  return true;
}

enum class PngTarget { rgb8, gray };

inline bool png_read_rows(PngContext& ctx, const PngHeader& header, PngTarget target,
                          std::vector<std::uint8_t>& data, std::vector<png_bytep>& rows)
{
  if (setjmp(png_jmpbuf(ctx.png)))
    return false;
  if (target == PngTarget::rgb8) {
    if (header.color_type == PNG_COLOR_TYPE_PALETTE)
      png_set_palette_to_rgb(ctx.png);
    if ((header.color_type & PNG_COLOR_MASK_COLOR) == 0) {
      if (header.bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
      png_set_gray_to_rgb(ctx.png);
    }
    if (header.bit_depth == 16)
      png_set_strip_16(ctx.png);
    if (header.color_type & PNG_COLOR_MASK_ALPHA)
      png_set_strip_alpha(ctx.png);
  } else if (header.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  png_read_update_info(ctx.png, ctx.info);
  const std::size_t stride = png_get_rowbytes(ctx.png, ctx.info);
  data.resize(stride * header.height);
  rows.resize(header.height);
  for (std::size_t i = 0; i < header.height; ++i)
    rows[i] = data.data() + i * stride;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return true;
}

inline PngHeader open_png(PngContext& ctx, MemoryReader& reader, const std::string& what)
{
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, png_error_handler,
                                   png_warning_handler);
  if (ctx.png == nullptr)
    throw IoError(what + ": cannot initialise libpng");
  ctx.info = png_create_info_struct(ctx.png);
  if (ctx.info == nullptr)
    throw IoError(what + ": cannot initialise libpng");
  PngHeader header;
  if (!png_read_header(ctx, reader, header))
    throw IoError(what + ": " + ctx.message.data());
  return header;
}

struct PngImage
{
  png_uint_32 width;
  png_uint_32 height;
  int bit_depth;
  int color_type;
  const std::uint8_t* data;
};

inline bool png_write_rows(PngContext& ctx, const PngImage& image, std::vector<std::uint8_t>& out,
                           std::vector<png_bytep>& rows)
{
  if (setjmp(png_jmpbuf(ctx.png)))
    return false;
  png_set_write_fn(ctx.png, &out, png_write_callback, png_flush_callback);
  png_set_IHDR(ctx.png, ctx.info, image.width, image.height, image.bit_depth, image.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  const int channels = image.color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t stride = std::size_t{image.width} * channels * (image.bit_depth / 8);
  rows.resize(image.height);
  for (std::size_t i = 0; i < image.height; ++i)
    rows[i] = const_cast<png_bytep>(image.data + i * stride);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
  return true;
}

inline std::vector<std::uint8_t> encode_png(const PngImage& image)
{
  PngContext ctx;
  ctx.reading = false;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, png_error_handler,
                                    png_warning_handler);
  if (ctx.png == nullptr)
    throw IoError("cannot initialise libpng");
  ctx.info = png_create_info_struct(ctx.png);
  if (ctx.info == nullptr)
    throw IoError("cannot initialise libpng");
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows;
  if (!png_write_rows(ctx, image, out, rows))
    throw IoError(std::string("PNG encoding failed: ") + ctx.message.data());
  return out;
}

} // namespace detail

/// Decodes a PNG (any color type) or binary PPM into 8-bit RGB. Alpha is
/// dropped and reported via alpha_stripped; 16-bit PNGs are reduced to 8 bits.
inline Rgb8 read_rgb(const std::filesystem::path& path)
{
  const auto bytes = detail::read_all(path);
  const std::string what = path.string();
  Rgb8 img;
  if (detail::is_png(bytes)) {
    detail::PngContext ctx;
    detail::MemoryReader reader{&bytes};
    const auto header = detail::open_png(ctx, reader, what);
    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    if (!detail::png_read_rows(ctx, header, detail::PngTarget::rgb8, data, rows))
      throw IoError(what + ": " + ctx.message.data());
    img.height = header.height;
    img.width = header.width;
    img.pixels = std::move(data);
    img.alpha_stripped = (header.color_type & PNG_COLOR_MASK_ALPHA) != 0;
    return img;
  }

  const auto h = detail::parse_pnm_header(bytes, what);
  if (h.kind != '6')
    throw InvalidInput(what + ": expected a color image (P6), found grayscale P5");
  const auto samples = detail::pnm_samples(bytes, h, h.width * h.height * 3, what);
  img.height = h.height;
  img.width = h.width;
  img.pixels.resize(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k)
    img.pixels[k] = static_cast<std::uint8_t>((samples[k] * 255u * 2 + h.max_value) /
                                              (2 * h.max_value));
  return img;
}

/// Decodes a single-channel PNG (8 or 16 bit, lower depths widened to 8) or a
/// binary PGM. Anything with more than one channel is rejected.
inline Gray read_gray(const std::filesystem::path& path)
{
  const auto bytes = detail::read_all(path);
  const std::string what = path.string();
  Gray img;
  if (detail::is_png(bytes)) {
    detail::PngContext ctx;
    detail::MemoryReader reader{&bytes};
    const auto header = detail::open_png(ctx, reader, what);
    if (header.color_type != PNG_COLOR_TYPE_GRAY)
      throw InvalidInput(what + ": expected a single-channel grayscale PNG");
    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    if (!detail::png_read_rows(ctx, header, detail::PngTarget::gray, data, rows))
      throw IoError(what + ": " + ctx.message.data());
    img.height = header.height;
    img.width = header.width;
    const std::size_t n = img.height * img.width;
    img.samples.resize(n);
    if (header.bit_depth == 16) {
      img.max_value = 65535;
      for (std::size_t k = 0; k < n; ++k)
        img.samples[k] = static_cast<std::uint16_t>(data[2 * k] << 8 | data[2 * k + 1]);
    } else {
      img.max_value = 255;
      std::copy(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(n), img.samples.begin());
    }
    return img;
  }

  const auto h = detail::parse_pnm_header(bytes, what);
  if (h.kind != '5')
    throw InvalidInput(what + ": expected a single-channel image (P5), found color P6");
  img.height = h.height;
  img.width = h.width;
  img.max_value = h.max_value;
  img.samples = detail::pnm_samples(bytes, h, h.width * h.height, what);
  return img;
}

inline void write_rgb(const std::filesystem::path& path, const Rgb8& img)
{
  if (img.pixels.size() != img.height * img.width * 3)
    throw InvalidInput("write_rgb: pixel buffer does not match dimensions");
  std::vector<std::uint8_t> bytes;
  if (format_for_extension(path) == Format::png) {
    bytes = detail::encode_png({static_cast<png_uint_32>(img.width),
                                static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                                img.pixels.data()});
  } else {
    const auto header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                        "\n255\n";
    bytes.assign(header.begin(), header.end());
    bytes.insert(bytes.end(), img.pixels.begin(), img.pixels.end());
  }
  detail::write_all(path, bytes);
}

/// Writes 8-bit samples when max_value <= 255, 16-bit otherwise.
inline void write_gray(const std::filesystem::path& path, const Gray& img)
{
  if (img.samples.size() != img.height * img.width)
    throw InvalidInput("write_gray: sample buffer does not match dimensions");
  const bool wide = img.max_value > 255;
  std::vector<std::uint8_t> raster;
  raster.reserve(img.samples.size() * (wide ? 2 : 1));
  for (auto s : img.samples) {
    if (wide)
      raster.push_back(static_cast<std::uint8_t>(s >> 8));
    raster.push_back(static_cast<std::uint8_t>(s & 0xff));
  }

  std::vector<std::uint8_t> bytes;
  if (format_for_extension(path) == Format::png) {
    if (img.max_value != 255 && img.max_value != 65535)
      throw InvalidInput("write_gray: PNG needs max_value 255 or 65535");
    bytes = detail::encode_png({static_cast<png_uint_32>(img.width),
                                static_cast<png_uint_32>(img.height), wide ? 16 : 8,
                                PNG_COLOR_TYPE_GRAY, raster.data()});
  } else {
    const auto header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                        "\n" + std::to_string(img.max_value) + "\n";
    bytes.assign(header.begin(), header.end());
    bytes.insert(bytes.end(), raster.begin(), raster.end());
  }
  detail::write_all(path, bytes);
}

} // namespace depthstyle::codec
