#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "landpat/grid.hpp"

namespace landpat {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Parses `#RRGGBB` (leading `#` optional). Throws ParseError.
Rgb parse_hex_color(std::string_view text);

struct Palette {
  std::map<int, Rgb> colors;
  Rgb nodata{0x66, 0x66, 0x66};
  /// When set, classes without an entry take colors from the default cycle.
  bool use_default_cycle = true;
};

/// Five-color land-cover scheme keyed by classes 1..5 (urban, agriculture,
/// vegetation, marshes, water).
Palette default_palette();

/// CSV `class,color` with colors as `#RRGGBB`; a `nodata` row sets the
/// missing-cell color. Default cycling is disabled for loaded palettes.
Palette load_palette_csv(const std::filesystem::path& path);

/// Binary PPM (P6), one pixel per cell, first image row = northmost row.
/// Throws RenderError naming the first class without a color.
std::string render_ppm_bytes(const CategoricalGrid& grid, const Palette& palette);
void render_ppm(const CategoricalGrid& grid, const Palette& palette, const std::filesystem::path& path);

}  // namespace landpat
