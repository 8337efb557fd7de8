#include "landpat/render.hpp"

#include <array>
#include <cctype>
#include <sstream>

#include "landpat/errors.hpp"
#include "landpat/grid_io.hpp"

namespace landpat {

namespace {

constexpr std::array<Rgb, 5> kCycle{{
    {0xC8, 0x60, 0x58},
    {0xFC, 0xE5, 0x69},
    {0x44, 0xA3, 0x21},
    {0xA3, 0xA6, 0xFF},
    {0x00, 0xCF, 0xFD},
}};

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

Rgb parse_hex_color(std::string_view text) {
  if (!text.empty() && text.front() == '#') text.remove_prefix(1);
  if (text.size() != 6) throw ParseError("color '" + std::string(text) + "' is not #RRGGBB");
  std::array<std::uint8_t, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    const int hi = hex_digit(text[2 * i]);
    const int lo = hex_digit(text[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("color '" + std::string(text) + "' is not #RRGGBB");
    v[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return {v[0], v[1], v[2]};
}

Palette default_palette() {
  Palette p;
  for (std::size_t i = 0; i < kCycle.size(); ++i) p.colors[static_cast<int>(i) + 1] = kCycle[i];
  return p;
}

Palette load_palette_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  Palette p;
  p.use_default_cycle = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string() + ": expected class,color", lineno);
    const std::string key = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    if (key == "class") continue;
    if (key == "nodata") {
      p.nodata = parse_hex_color(value);
      continue;
    }
    try {
      std::size_t used = 0;
      const int cls = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
      p.colors[cls] = parse_hex_color(value);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": class '" + key + "' is not an integer", lineno);
    }
  }
  return p;
}

std::string render_ppm_bytes(const CategoricalGrid& grid, const Palette& palette) {
  std::map<int, Rgb> lut = palette.colors;
  const auto classes = grid.classes();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (lut.count(classes[i])) continue;
    if (!palette.use_default_cycle)
      throw RenderError("no palette color for class " + std::to_string(classes[i]));
    lut[classes[i]] = kCycle[i % kCycle.size()];
  }
  std::string out = "P6\n" + std::to_string(grid.ncols()) + " " + std::to_string(grid.nrows()) + "\n255\n";
  out.reserve(out.size() + grid.size() * 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Rgb c = grid.is_missing(i) ? palette.nodata : lut.at(grid[i]);
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

void render_ppm(const CategoricalGrid& grid, const Palette& palette, const std::filesystem::path& path) {
  write_text_file(path, render_ppm_bytes(grid, palette));
}

}  // namespace landpat
