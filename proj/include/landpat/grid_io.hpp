#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "landpat/grid.hpp"

namespace landpat {

/// Reads an ESRI ASCII grid (NCOLS, NROWS, XLLCORNER, YLLCORNER, CELLSIZE,
/// NODATA_VALUE; keys case-insensitive, XLLCENTER/YLLCENTER accepted) and the
/// optional `<path>.meta` sidecar of `key=value` lines. Throws ParseError
/// with a line number on malformed input and IoError when unreadable.
CategoricalGrid load_ascii_grid(const std::filesystem::path& path);

/// Same header rules, but cells are real numbers; nodata cells become NaN.
NumericGrid load_numeric_ascii_grid(const std::filesystem::path& path);

/// Parses grid text already in memory. `source` names the input in errors.
CategoricalGrid parse_ascii_grid(std::string_view text, const std::string& source = "<memory>");
NumericGrid parse_numeric_ascii_grid(std::string_view text, const std::string& source = "<memory>");

/// Writes header and cells; a `.meta` sidecar is written when the grid carries
/// metadata. Throws IoError when the path cannot be written.
void write_ascii_grid(const CategoricalGrid& grid, const std::filesystem::path& path);

/// Numeric cells use 10 significant digits; NaN is written as `nodata_value`.
void write_ascii_grid(const NumericGrid& grid, const std::filesystem::path& path,
                      double nodata_value = -9999.0);

std::string to_ascii_grid_text(const CategoricalGrid& grid);
std::string to_ascii_grid_text(const NumericGrid& grid, double nodata_value = -9999.0);

Metadata load_meta(const std::filesystem::path& path);
void write_meta(const Metadata& meta, const std::filesystem::path& path);

/// CSV with header `id,x,y`. Duplicate ids or non-numeric fields throw ParseError.
PointSet load_points_csv(const std::filesystem::path& path);
PointSet parse_points_csv(std::istream& in);

/// Whole file as a string; IoError on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace landpat
