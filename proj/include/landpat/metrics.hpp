#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landpat/grid.hpp"
#include "landpat/patches.hpp"

namespace landpat {

enum class Level { patch, class_level, landscape };
enum class MetricType { area_and_edge, shape, core_area, aggregation, diversity };

std::string to_string(Level level);
std::string to_string(MetricType type);
/// Accepts `patch|class|landscape`; UsageError otherwise.
Level parse_level(std::string_view text);
/// Accepts the type name with or without a trailing " metric".
MetricType parse_metric_type(std::string_view text);

struct MetricDescriptor {
  std::string metric;         // short name, e.g. "area_mn"
  std::string name;           // long name
  MetricType type;
  Level level;
  std::string function_name;  // e.g. "lsm_c_area_mn"

  bool operator==(const MetricDescriptor&) const = default;
};

/// All implemented metrics, in registry order.
std::span<const MetricDescriptor> metric_registry();

/// Registry rows matching every given filter, sorted by metric name then level.
std::vector<MetricDescriptor> list_metrics(std::optional<Level> level = std::nullopt,
                                           std::optional<MetricType> type = std::nullopt);

/// Lookup by function name such as "lsm_p_area".
std::optional<MetricDescriptor> find_metric(std::string_view function_name);

/// One tidy result row. `class_code` is empty at landscape level; `patch_id`
/// is set only at patch level. `value` may be NaN (written as NA).
struct MetricRecord {
  int layer = 1;
  Level level = Level::landscape;
  std::optional<int> class_code;
  std::optional<int> patch_id;
  std::string metric;
  double value = 0.0;

  bool operator==(const MetricRecord&) const = default;
};

/// Patch metrics from {area, perim, shape, frac, cai}; empty `which` means all.
/// Rows are ordered by class, patch id, metric name.
std::vector<MetricRecord> compute_patch_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                const std::vector<std::string>& which = {});

/// Class metrics from {np, area_mn, area_sd, area_cv, pland, ca}.
std::vector<MetricRecord> compute_class_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                const std::vector<std::string>& which = {});

/// Landscape metrics from {ta, lpi, pr, shdi, np}.
std::vector<MetricRecord> compute_landscape_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                    const std::vector<std::string>& which = {});

/// Any mix of descriptors; labels each class once and emits patch, class,
/// then landscape rows.
std::vector<MetricRecord> compute_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                          std::span<const MetricDescriptor> which);

/// Minimum perimeter, in cell sides, of any n-cell patch.
std::size_t min_perimeter_sides(std::size_t n);

struct CorrelationMatrix {
  std::vector<std::string> metrics;  // sorted
  std::vector<double> values;        // row-major; NaN where a column is constant

  std::size_t dimension() const noexcept { return metrics.size(); }
  double at(std::size_t i, std::size_t j) const { return values.at(i * metrics.size() + j); }
};

/// Pearson correlation between metrics across patches or classes. Records must
/// share one level and pivot to a complete table with at least 3 units.
CorrelationMatrix correlation_matrix(std::span<const MetricRecord> records);

inline constexpr std::string_view kRecordCsvHeader = "layer,level,class,id,metric,value";

/// `layer,level,class,id,metric,value` fields of one record, no newline.
std::string format_record_fields(const MetricRecord& record);
void write_records_csv(std::ostream& out, std::span<const MetricRecord> records);

}  // namespace landpat
