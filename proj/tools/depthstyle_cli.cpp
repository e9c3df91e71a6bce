// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: stylize, reconstruct, inspect-weights and
// synthetic-weights (random manifest-conformant weights for smoke tests).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "depthstyle/depthstyle.hpp"
#include "depthstyle/synthetic_weights.hpp"

namespace fs = std::filesystem;
namespace ds = depthstyle;

namespace {

void warn(std::string_view msg) { std::cerr << "depthstyle: warning: " << msg << "\n"; }

int inspect_weights(const fs::path& file)
{
  const auto store = ds::adsw::load_file(file);
  std::cout << file.string() << ": " << store.size() << " tensors\n";
  bool has_enc = false;
  bool has_dec = false;
  for (const auto& e : store.entries()) {
    std::cout << "  " << e.name << " " << ds::manifest::shape_string(e.shape) << "\n";
    has_enc |= e.name.starts_with("enc.");
    has_dec |= e.name.starts_with("dec.");
  }
  if (has_enc == has_dec)
    throw ds::FormatError(file.string() +
                          ": cannot tell encoder from decoder (expected enc.* or dec.* tensors)");
  if (has_enc)
    ds::manifest::validate(store, ds::manifest::encoder_steps, "encoder");
  else
    ds::manifest::validate(store, ds::manifest::decoder_steps, "decoder");
  std::cout << "manifest: " << (has_enc ? "encoder" : "decoder") << " OK\n";
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Depth-controlled AdaIN style transfer"};
  app.require_subcommand(1);

  // stylize
  auto* stylize = app.add_subcommand("stylize", "Render content in one or more styles");
  fs::path content_path;
  std::vector<fs::path> style_paths;
  std::vector<double> style_weights;
  std::optional<fs::path> depth_path;
  std::optional<fs::path> mask_path;
  double alpha = 1.0;
  double depth_min = 0.0;
  double depth_max = 1.0;
  bool invert_depth = false;
  fs::path out_path = "stylized.png";
  fs::path weights_dir = "weights";

  stylize->add_option("--content", content_path, "Content image (PNG or PPM)")->required();
  stylize->add_option("--style", style_paths, "Style image; repeat to mix styles")->required();
  stylize->add_option("--style-weight", style_weights,
                      "Mixing weight per --style, in order; must sum to 1");
  auto* depth_opt =
    stylize->add_option("--depth", depth_path, "Grayscale depth map, larger = farther");
  auto* mask_opt =
    stylize->add_option("--mask", mask_path, "Grayscale strength mask used as-is (0..1)");
  depth_opt->excludes(mask_opt);
  stylize->add_option("--alpha", alpha, "Global strength in [0, 1]")->check(CLI::Range(0.0, 1.0));
  stylize->add_option("--depth-min", depth_min, "Normalized depth mapped to zero strength");
  stylize->add_option("--depth-max", depth_max, "Normalized depth mapped to full strength");
  stylize->add_flag("--invert-depth", invert_depth, "Stylize near regions more than far ones");
  stylize->add_option("--out", out_path, "Output image (.png or .ppm)");
  stylize->add_option("--weights", weights_dir, "Directory with encoder.adsw and decoder.adsw");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Decode unmodified content features");
  rec->add_option("--content", content_path, "Content image")->required();
  rec->add_option("--out", out_path, "Output image")->required();
  rec->add_option("--weights", weights_dir, "Directory with encoder.adsw and decoder.adsw");

  // inspect-weights
  auto* inspect = app.add_subcommand("inspect-weights", "List and validate an ADSW file");
  fs::path inspect_path;
  inspect->add_option("file", inspect_path, "ADSW weight file")->required();

  // synthetic-weights
  auto* synth =
    app.add_subcommand("synthetic-weights", "Write random manifest-conformant weights");
  fs::path synth_dir;
  std::uint64_t seed = 1;
  synth->add_option("--out", synth_dir, "Output directory")->required();
  synth->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*stylize) {
      const auto engine = ds::Engine::from_directory(weights_dir);
      const auto content = ds::load_image(content_path, warn);
      std::vector<ds::RasterImage> styles;
      for (const auto& p : style_paths)
        styles.push_back(ds::load_image(p, warn));

      ds::StylizeParams params;
      params.alpha = alpha;
      params.depth_controls = {depth_min, depth_max, invert_depth};
      params.style_weights = style_weights;
      std::optional<ds::RawDepth> depth;
      if (depth_path)
        depth = ds::load_depth(*depth_path);
      if (mask_path)
        params.explicit_mask = ds::load_mask(*mask_path);

      const auto out = ds::stylize(engine, content, styles, depth, params, warn);
      ds::save_image(out_path, out);
      return 0;
    }
    if (*rec) {
      const auto engine = ds::Engine::from_directory(weights_dir);
      ds::save_image(out_path, ds::reconstruct(engine, ds::load_image(content_path, warn)));
      return 0;
    }
    if (*inspect)
      return inspect_weights(inspect_path);
    if (*synth) {
      fs::create_directories(synth_dir);
      ds::adsw::save_file(ds::synthetic_encoder_weights(seed), synth_dir / "encoder.adsw");
      ds::adsw::save_file(ds::synthetic_decoder_weights(seed + 1), synth_dir / "decoder.adsw");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "depthstyle: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
