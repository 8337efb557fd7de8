#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "landpat/errors.hpp"
#include "landpat/grid.hpp"
#include "landpat/metrics.hpp"

namespace landpat {

struct ExtractRecord {
  MetricRecord record;
  int extract_id = 0;
};

/// Patch metrics of the patch under each point, tagged with the point id.
/// Points outside the raster or on missing cells produce no rows and a warning.
std::vector<ExtractRecord> extract_at_points(const CategoricalGrid& grid, const PointSet& points,
                                             const std::vector<std::string>& patch_metrics,
                                             Connectivity connectivity, Warnings* warnings = nullptr);

enum class BufferShape { circle, square };
BufferShape parse_buffer_shape(std::string_view text);

/// `size` is the circle radius or the square half-side, in meters.
struct SamplePlan {
  PointSet points;
  BufferShape shape = BufferShape::circle;
  double size = 0.0;
};

struct SampleRecord {
  MetricRecord record;
  int plot_id = 0;
  double percentage_inside = 0.0;
};

/// Cells whose centers fall in a buffer form a clipped sub-landscape on which
/// class and landscape metrics are computed. percentage_inside relates the
/// sampled (non-missing) cell area to the nominal buffer area.
std::vector<SampleRecord> sample_buffers(const CategoricalGrid& grid, const SamplePlan& plan,
                                         std::span<const MetricDescriptor> metrics, Connectivity connectivity,
                                         Warnings* warnings = nullptr);

/// Per patch metric, a raster whose labeled cells carry their patch's value.
using MetricRasters = std::map<std::string, NumericGrid>;

MetricRasters spatialize_patch_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                       const std::vector<std::string>& patch_metrics);

/// Nested layer -> metric result for several rasters, keys `layer_1`, `layer_2`, ...
std::map<std::string, MetricRasters> spatialize_patch_metrics(std::span<const CategoricalGrid> layers,
                                                              Connectivity connectivity,
                                                              const std::vector<std::string>& patch_metrics);

/// Binary focal neighborhood with odd dimensions.
struct WindowMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  static WindowMask square(std::size_t size);
  /// Non-zero, non-missing cells are part of the neighborhood.
  static WindowMask from_grid(const CategoricalGrid& grid);
};

/// Landscape metric of each focal cell's masked neighborhood. Positions
/// outside the raster count as missing; missing focal cells give NaN.
/// UsageError on even mask dimensions or a non-landscape metric.
NumericGrid moving_window(const CategoricalGrid& grid, const WindowMask& mask, const std::string& landscape_metric,
                          Connectivity connectivity = Connectivity::queen8);

void write_extract_csv(std::ostream& out, std::span<const ExtractRecord> rows);
void write_sample_csv(std::ostream& out, std::span<const SampleRecord> rows);

}  // namespace landpat
