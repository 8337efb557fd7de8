#include "landpat/grid_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "landpat/errors.hpp"
#include "landpat/format.hpp"

namespace landpat {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_full(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

/// Walks whitespace-separated tokens while tracking line numbers.
class TokenCursor {
 public:
  explicit TokenCursor(std::string_view text) : text_(text) {}

  bool next(std::string_view& token) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    token = text_.substr(start, pos_ - start);
    return true;
  }

  /// Next token's first character without consuming it (0 at end).
  char peek() {
    std::size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() ? text_[p] : '\0';
  }

  std::string_view rest_of_line() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct Header {
  GridGeometry geometry;
  std::string nodata_token;
};

Header parse_header(TokenCursor& cur, const std::string& source) {
  std::optional<double> ncols, nrows, xll, yll, xcenter, ycenter, cellsize, dx, dy;
  std::optional<std::string> nodata;
  while (std::isalpha(static_cast<unsigned char>(cur.peek()))) {
    std::string_view key_token;
    cur.next(key_token);
    const std::size_t line = cur.line();
    const std::string key = lower(key_token);
    const std::string value(trim(cur.rest_of_line()));
    if (value.empty() || value.find_first_of(" \t") != std::string::npos)
      throw ParseError(source + ": header key '" + std::string(key_token) + "' needs exactly one value", line);
    if (key == "nodata_value") {
      nodata = value;
      continue;
    }
    double v = 0.0;
    if (!parse_full(std::string_view(value), v))
      throw ParseError(source + ": header value '" + value + "' for " + std::string(key_token) + " is not a number", line);
    if (key == "ncols") ncols = v;
    else if (key == "nrows") nrows = v;
    else if (key == "xllcorner") xll = v;
    else if (key == "yllcorner") yll = v;
    else if (key == "xllcenter") xcenter = v;
    else if (key == "yllcenter") ycenter = v;
    else if (key == "cellsize") cellsize = v;
    else if (key == "dx") dx = v;
    else if (key == "dy") dy = v;
    else throw ParseError(source + ": unknown header key '" + std::string(key_token) + "'", line);
  }
  const std::size_t line = cur.line();
  if (!cellsize && dx && dy) {
    if (*dx != *dy) throw ParseError(source + ": rectangular cells (DX != DY) are not supported", line);
    cellsize = dx;
  }
  auto require = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw ParseError(source + ": header is missing " + std::string(name), line);
    return *v;
  };
  Header h;
  const double nc = require(ncols, "NCOLS");
  const double nr = require(nrows, "NROWS");
  if (nc < 1 || nr < 1 || nc != std::floor(nc) || nr != std::floor(nr))
    throw ParseError(source + ": NCOLS and NROWS must be positive integers", line);
  h.geometry.ncols = static_cast<std::size_t>(nc);
  h.geometry.nrows = static_cast<std::size_t>(nr);
  h.geometry.cellsize = require(cellsize, "CELLSIZE");
  if (!(h.geometry.cellsize > 0)) throw ParseError(source + ": CELLSIZE must be positive", line);
  if (xll) h.geometry.xll = *xll;
  else h.geometry.xll = require(xcenter, "XLLCORNER") - 0.5 * h.geometry.cellsize;
  if (yll) h.geometry.yll = *yll;
  else h.geometry.yll = require(ycenter, "YLLCORNER") - 0.5 * h.geometry.cellsize;
  if (!nodata) throw ParseError(source + ": header is missing NODATA_VALUE", line);
  h.nodata_token = *nodata;
  return h;
}

void check_count(std::size_t got, std::size_t expected, std::size_t line, const std::string& source) {
  if (got != expected)
    throw ParseError(source + ": expected " + std::to_string(expected) + " cell values, found " +
                         std::to_string(got), line);
}

std::filesystem::path meta_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".meta";
  return p;
}

void append_number(std::string& out, double v) { out += format_number(v); }

std::string header_text(const GridGeometry& g, const std::string& nodata) {
  std::string out;
  out += "ncols " + std::to_string(g.ncols) + "\n";
  out += "nrows " + std::to_string(g.nrows) + "\n";
  out += "xllcorner ";
  append_number(out, g.xll);
  out += "\nyllcorner ";
  append_number(out, g.yll);
  out += "\ncellsize ";
  append_number(out, g.cellsize);
  out += "\nNODATA_value " + nodata + "\n";
  return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

CategoricalGrid parse_ascii_grid(std::string_view text, const std::string& source) {
  TokenCursor cur(text);
  Header h = parse_header(cur, source);
  int nodata = 0;
  if (!parse_full(std::string_view(h.nodata_token), nodata))
    throw ParseError(source + ": NODATA_VALUE '" + h.nodata_token + "' is not an integer", cur.line());
  std::vector<int> cells;
  cells.reserve(h.geometry.size());
  std::string_view token;
  while (cur.next(token)) {
    int v = 0;
    if (!parse_full(token, v))
      throw ParseError(source + ": cell value '" + std::string(token) + "' is not an integer", cur.line());
    if (v != nodata && v < 0)
      throw ParseError(source + ": negative class code " + std::string(token), cur.line());
    if (cells.size() == h.geometry.size()) check_count(cells.size() + 1, h.geometry.size(), cur.line(), source);
    cells.push_back(v);
  }
  check_count(cells.size(), h.geometry.size(), cur.line(), source);
  return CategoricalGrid(h.geometry, std::move(cells), nodata);
}

NumericGrid parse_numeric_ascii_grid(std::string_view text, const std::string& source) {
  TokenCursor cur(text);
  Header h = parse_header(cur, source);
  double nodata = 0.0;
  if (!parse_full(std::string_view(h.nodata_token), nodata))
    throw ParseError(source + ": NODATA_VALUE '" + h.nodata_token + "' is not a number", cur.line());
  std::vector<double> values;
  values.reserve(h.geometry.size());
  std::string_view token;
  while (cur.next(token)) {
    double v = 0.0;
    if (!parse_full(token, v))
      throw ParseError(source + ": cell value '" + std::string(token) + "' is not a number", cur.line());
    if (values.size() == h.geometry.size()) check_count(values.size() + 1, h.geometry.size(), cur.line(), source);
    values.push_back(v == nodata ? std::numeric_limits<double>::quiet_NaN() : v);
  }
  check_count(values.size(), h.geometry.size(), cur.line(), source);
  return NumericGrid(h.geometry, std::move(values));
}

CategoricalGrid load_ascii_grid(const std::filesystem::path& path) {
  CategoricalGrid grid = parse_ascii_grid(read_text_file(path), path.string());
  const auto mp = meta_path(path);
  if (std::filesystem::exists(mp)) return grid.with_meta(load_meta(mp));
  return grid;
}

NumericGrid load_numeric_ascii_grid(const std::filesystem::path& path) {
  return parse_numeric_ascii_grid(read_text_file(path), path.string());
}

std::string to_ascii_grid_text(const CategoricalGrid& grid) {
  std::string out = header_text(grid.geometry(), std::to_string(grid.nodata_code()));
  out.reserve(out.size() + grid.size() * 3);
  std::array<char, 16> buf{};
  for (std::size_t r = 0; r < grid.nrows(); ++r) {
    for (std::size_t c = 0; c < grid.ncols(); ++c) {
      if (c) out.push_back(' ');
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), grid.at(r, c));
      out.append(buf.data(), end);
    }
    out.push_back('\n');
  }
  return out;
}

std::string to_ascii_grid_text(const NumericGrid& grid, double nodata_value) {
  const std::string nodata = format_number(nodata_value);
  std::string out = header_text(grid.geometry(), nodata);
  std::array<char, 32> buf{};
  for (std::size_t r = 0; r < grid.nrows(); ++r) {
    for (std::size_t c = 0; c < grid.ncols(); ++c) {
      if (c) out.push_back(' ');
      const double v = grid.at(r, c);
      if (std::isnan(v)) {
        out += nodata;
      } else {
        const int n = std::snprintf(buf.data(), buf.size(), "%.10g", v);
        out.append(buf.data(), static_cast<std::size_t>(n));
      }
    }
    out.push_back('\n');
  }
  return out;
}

void write_ascii_grid(const CategoricalGrid& grid, const std::filesystem::path& path) {
  write_text_file(path, to_ascii_grid_text(grid));
  if (!grid.meta().empty()) write_meta(grid.meta(), meta_path(path));
}

void write_ascii_grid(const NumericGrid& grid, const std::filesystem::path& path, double nodata_value) {
  write_text_file(path, to_ascii_grid_text(grid, nodata_value));
}

Metadata load_meta(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  Metadata meta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string() + ": expected key=value", lineno);
    meta[lower(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }
  return meta;
}

void write_meta(const Metadata& meta, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [k, v] : meta) out += k + "=" + v + "\n";
  write_text_file(path, out);
}

PointSet parse_points_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<PointRecord> points;
  std::unordered_set<int> ids;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    std::array<std::string_view, 3> fields;
    std::size_t n = 0;
    std::string_view rest = t;
    while (true) {
      const auto comma = rest.find(',');
      if (n == fields.size()) throw ParseError("points CSV: expected 3 fields", lineno);
      fields[n++] = trim(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (n != 3) throw ParseError("points CSV: expected 3 fields", lineno);
    if (!have_header) {
      if (lower(fields[0]) != "id" || lower(fields[1]) != "x" || lower(fields[2]) != "y")
        throw ParseError("points CSV: header must be id,x,y", lineno);
      have_header = true;
      continue;
    }
    PointRecord p;
    if (!parse_full(fields[0], p.id)) throw ParseError("points CSV: id '" + std::string(fields[0]) + "' is not an integer", lineno);
    if (!parse_full(fields[1], p.x) || !parse_full(fields[2], p.y))
      throw ParseError("points CSV: non-numeric coordinate", lineno);
    if (!ids.insert(p.id).second) throw ParseError("points CSV: duplicate id " + std::to_string(p.id), lineno);
    points.push_back(p);
  }
  if (!have_header) throw ParseError("points CSV: missing header id,x,y", lineno);
  return PointSet(std::move(points));
}

PointSet load_points_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return parse_points_csv(in);
}

}  // namespace landpat
