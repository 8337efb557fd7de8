#include "landpat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "landpat/format.hpp"
#include "landpat/parallel.hpp"

namespace landpat {

std::vector<ExtractRecord> extract_at_points(const CategoricalGrid& grid, const PointSet& points,
                                             const std::vector<std::string>& patch_metrics,
                                             Connectivity connectivity, Warnings* warnings) {
  const auto& g = grid.geometry();
  std::map<int, PatchLabeling> labelings;
  std::vector<std::pair<int, int>> hits;  // (class, patch id) per point, class -1 when none
  for (const auto& p : points) {
    CellPos pos;
    if (!g.locate({p.x, p.y}, pos)) {
      warn(warnings, "point " + std::to_string(p.id) + " lies outside the raster extent");
      hits.emplace_back(-1, 0);
      continue;
    }
    const std::size_t i = g.index(pos.row, pos.col);
    if (grid.is_missing(i)) {
      warn(warnings, "point " + std::to_string(p.id) + " falls on a missing cell");
      hits.emplace_back(-1, 0);
      continue;
    }
    const int cls = grid[i];
    auto it = labelings.find(cls);
    if (it == labelings.end()) it = labelings.emplace(cls, label_patches(grid, cls, connectivity)).first;
    hits.emplace_back(cls, it->second.labels[i]);
  }

  std::map<std::pair<int, int>, std::vector<MetricRecord>> by_patch;
  if (!labelings.empty()) {
    for (auto& r : compute_patch_metrics(grid, connectivity, patch_metrics)) {
      if (labelings.count(*r.class_code)) by_patch[{*r.class_code, *r.patch_id}].push_back(std::move(r));
    }
  }
  std::vector<ExtractRecord> out;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (hits[k].first < 0) continue;
    for (const auto& r : by_patch[hits[k]]) out.push_back({r, points[k].id});
  }
  return out;
}

BufferShape parse_buffer_shape(std::string_view text) {
  if (text == "circle") return BufferShape::circle;
  if (text == "square") return BufferShape::square;
  throw UsageError("buffer shape must be circle or square, got '" + std::string(text) + "'");
}

std::vector<SampleRecord> sample_buffers(const CategoricalGrid& grid, const SamplePlan& plan,
                                         std::span<const MetricDescriptor> metrics, Connectivity connectivity,
                                         Warnings* warnings) {
  if (!(plan.size > 0.0)) throw UsageError("buffer size must be positive");
  for (const auto& d : metrics)
    if (d.level == Level::patch) throw UsageError("sample_buffers takes class or landscape metrics, got " + d.function_name);
  const auto& g = grid.geometry();
  const double r = g.cellsize;
  const double s = plan.size;
  const double eps = 1e-9 * r;
  const double nominal = plan.shape == BufferShape::circle ? std::numbers::pi * s * s : 4.0 * s * s;

  std::vector<SampleRecord> out;
  for (const auto& p : plan.points) {
    if (p.x - s < g.xll || p.x + s > g.xmax() || p.y - s < g.yll || p.y + s > g.ymax())
      warn(warnings, "buffer around point " + std::to_string(p.id) + " extends beyond the raster");
    // Column/row ranges whose centers may lie within the buffer's bounding box.
    const double c_lo = std::ceil((p.x - s - g.xll) / r - 0.5 - 1e-9);
    const double c_hi = std::floor((p.x + s - g.xll) / r - 0.5 + 1e-9);
    const double r_lo = std::ceil((g.ymax() - (p.y + s)) / r - 0.5 - 1e-9);
    const double r_hi = std::floor((g.ymax() - (p.y - s)) / r - 0.5 + 1e-9);
    const auto clamp_index = [](double v, std::size_t n) {
      return static_cast<std::int64_t>(std::clamp(v, -1.0, static_cast<double>(n)));
    };
    const std::int64_t col0 = std::max<std::int64_t>(0, clamp_index(c_lo, g.ncols));
    const std::int64_t col1 = std::min<std::int64_t>(static_cast<std::int64_t>(g.ncols) - 1, clamp_index(c_hi, g.ncols));
    const std::int64_t row0 = std::max<std::int64_t>(0, clamp_index(r_lo, g.nrows));
    const std::int64_t row1 = std::min<std::int64_t>(static_cast<std::int64_t>(g.nrows) - 1, clamp_index(r_hi, g.nrows));
    if (col0 > col1 || row0 > row1) {
      warn(warnings, "buffer around point " + std::to_string(p.id) + " contains no raster cells");
      continue;
    }
    GridGeometry sub;
    sub.nrows = static_cast<std::size_t>(row1 - row0 + 1);
    sub.ncols = static_cast<std::size_t>(col1 - col0 + 1);
    sub.cellsize = r;
    sub.xll = g.xll + static_cast<double>(col0) * r;
    sub.yll = g.yll + static_cast<double>(g.nrows - 1 - static_cast<std::size_t>(row1)) * r;
    std::vector<int> cells(sub.size(), grid.nodata_code());
    std::size_t members = 0;
    for (std::int64_t rr = row0; rr <= row1; ++rr) {
      for (std::int64_t cc = col0; cc <= col1; ++cc) {
        const auto row = static_cast<std::size_t>(rr), col = static_cast<std::size_t>(cc);
        const MapPoint center = g.cell_center(row, col);
        const double dx = center.x - p.x, dy = center.y - p.y;
        const bool inside = plan.shape == BufferShape::circle
                                ? std::hypot(dx, dy) <= s + eps
                                : std::abs(dx) <= s + eps && std::abs(dy) <= s + eps;
        if (!inside) continue;
        const std::size_t src = g.index(row, col);
        if (grid.is_missing(src)) continue;
        cells[sub.index(row - static_cast<std::size_t>(row0), col - static_cast<std::size_t>(col0))] = grid[src];
        ++members;
      }
    }
    if (members == 0) {
      warn(warnings, "buffer around point " + std::to_string(p.id) + " contains no non-missing cells");
      continue;
    }
    const CategoricalGrid clipped(sub, std::move(cells), grid.nodata_code());
    const double pct = 100.0 * static_cast<double>(members) * r * r / nominal;
    for (auto& rec : compute_metrics(clipped, connectivity, metrics)) out.push_back({std::move(rec), p.id, pct});
  }
  return out;
}

MetricRasters spatialize_patch_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                       const std::vector<std::string>& patch_metrics) {
  const auto labelings = label_all_classes(grid, connectivity);
  std::map<int, std::size_t> slot;
  for (std::size_t k = 0; k < labelings.size(); ++k) slot[labelings[k].class_code] = k;
  MetricRasters out;
  std::map<std::string, std::map<std::pair<int, int>, double>> values;
  for (const auto& r : compute_patch_metrics(grid, connectivity, patch_metrics))
    values[r.metric][{*r.class_code, *r.patch_id}] = r.value;
  for (const auto& [metric, table] : values) {
    NumericGrid raster(grid.geometry());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.is_missing(i)) continue;
      const int cls = grid[i];
      const int id = labelings[slot.at(cls)].labels[i];
      raster[i] = table.at({cls, id});
    }
    out.emplace("lsm_p_" + metric, std::move(raster));
  }
  return out;
}

std::map<std::string, MetricRasters> spatialize_patch_metrics(std::span<const CategoricalGrid> layers,
                                                              Connectivity connectivity,
                                                              const std::vector<std::string>& patch_metrics) {
  std::map<std::string, MetricRasters> out;
  for (std::size_t k = 0; k < layers.size(); ++k)
    out.emplace("layer_" + std::to_string(k + 1), spatialize_patch_metrics(layers[k], connectivity, patch_metrics));
  return out;
}

WindowMask WindowMask::square(std::size_t size) {
  return {size, size, std::vector<std::uint8_t>(size * size, 1)};
}

WindowMask WindowMask::from_grid(const CategoricalGrid& grid) {
  WindowMask m{grid.nrows(), grid.ncols(), std::vector<std::uint8_t>(grid.size(), 0)};
  for (std::size_t i = 0; i < grid.size(); ++i) m.cells[i] = !grid.is_missing(i) && grid[i] != 0;
  return m;
}

NumericGrid moving_window(const CategoricalGrid& grid, const WindowMask& mask, const std::string& landscape_metric,
                          Connectivity connectivity) {
  if (mask.rows % 2 == 0 || mask.cols % 2 == 0)
    throw UsageError("moving window mask dimensions must be odd, got " + std::to_string(mask.rows) + "x" +
                     std::to_string(mask.cols));
  if (mask.cells.size() != mask.rows * mask.cols) throw UsageError("moving window mask is malformed");
  bool known = false;
  for (const auto& d : metric_registry()) known |= d.level == Level::landscape && d.metric == landscape_metric;
  if (!known) throw UsageError("moving windows support landscape metrics only, got '" + landscape_metric + "'");

  const auto& g = grid.geometry();
  const auto half_r = static_cast<std::int64_t>(mask.rows / 2);
  const auto half_c = static_cast<std::int64_t>(mask.cols / 2);
  GridGeometry local;
  local.nrows = mask.rows;
  local.ncols = mask.cols;
  local.cellsize = g.cellsize;
  NumericGrid out(g);
  const std::vector<std::string> which{landscape_metric};
  parallel_for(g.nrows, [&](std::size_t row) {
    std::vector<int> cells(local.size());
    for (std::size_t col = 0; col < g.ncols; ++col) {
      const std::size_t focal = g.index(row, col);
      if (grid.is_missing(focal)) continue;
      for (std::size_t mr = 0; mr < mask.rows; ++mr) {
        const auto rr = static_cast<std::int64_t>(row) + static_cast<std::int64_t>(mr) - half_r;
        for (std::size_t mc = 0; mc < mask.cols; ++mc) {
          const auto cc = static_cast<std::int64_t>(col) + static_cast<std::int64_t>(mc) - half_c;
          const bool inside = rr >= 0 && cc >= 0 && rr < static_cast<std::int64_t>(g.nrows) &&
                              cc < static_cast<std::int64_t>(g.ncols);
          int v = grid.nodata_code();
          if (inside && mask.cells[mr * mask.cols + mc])
            v = grid[g.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc))];
          cells[mr * mask.cols + mc] = v;
        }
      }
      const CategoricalGrid neighborhood(local, cells, grid.nodata_code());
      out[focal] = compute_landscape_metrics(neighborhood, connectivity, which).front().value;
    }
  });
  return out;
}

void write_extract_csv(std::ostream& out, std::span<const ExtractRecord> rows) {
  out << kRecordCsvHeader << ",extract_id\n";
  for (const auto& r : rows) out << format_record_fields(r.record) << ',' << r.extract_id << '\n';
}

void write_sample_csv(std::ostream& out, std::span<const SampleRecord> rows) {
  out << kRecordCsvHeader << ",plot_id,percentage_inside\n";
  for (const auto& r : rows)
    out << format_record_fields(r.record) << ',' << r.plot_id << ',' << format_number(r.percentage_inside) << '\n';
}

}  // namespace landpat
