#pragma once

#include <cstddef>
#include <string>

#include "landpat/errors.hpp"
#include "landpat/grid.hpp"

namespace landpat {

enum class CrsKind { projected, geographic, unknown };
enum class ClassValueKind { integer, non_integer };

std::string to_string(CrsKind kind);
std::string to_string(ClassValueKind kind);
CrsKind parse_crs_kind(std::string_view text);

inline constexpr std::size_t kDefaultMaxClasses = 30;

/// Outcome of the pre-flight checks run before computing metrics. Failing
/// checks produce warnings, never errors.
struct LandscapeCheck {
  CrsKind crs_kind = CrsKind::unknown;
  std::string units = "unknown";
  ClassValueKind class_value_kind = ClassValueKind::integer;
  std::size_t n_classes = 0;
  bool ok = false;
  Warnings warnings;
};

/// CRS kind and units come from grid metadata (`crs_kind`, `units`).
LandscapeCheck check_landscape(const CategoricalGrid& grid, std::size_t max_classes = kDefaultMaxClasses);

/// Variant for rasters read as real numbers, so non-integer class values can
/// be reported instead of rejected.
LandscapeCheck check_landscape(const NumericGrid& grid, const Metadata& meta,
                               std::size_t max_classes = kDefaultMaxClasses);

/// One-row table: `layer crs units class n_classes OK`.
std::string format_check_table(const LandscapeCheck& check);

}  // namespace landpat
