#include "landpat/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "landpat/errors.hpp"
#include "landpat/format.hpp"
#include "landpat/parallel.hpp"

namespace landpat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSquareMetersPerHectare = 10000.0;

const std::vector<MetricDescriptor>& registry() {
  using enum MetricType;
  static const std::vector<MetricDescriptor> r = {
      {"area", "patch area", area_and_edge, Level::patch, "lsm_p_area"},
      {"perim", "patch perimeter", area_and_edge, Level::patch, "lsm_p_perim"},
      {"shape", "shape index", shape, Level::patch, "lsm_p_shape"},
      {"frac", "fractal dimension index", shape, Level::patch, "lsm_p_frac"},
      {"cai", "core area index", core_area, Level::patch, "lsm_p_cai"},
      {"np", "number of patches", aggregation, Level::class_level, "lsm_c_np"},
      {"area_mn", "patch area", area_and_edge, Level::class_level, "lsm_c_area_mn"},
      {"area_sd", "patch area", area_and_edge, Level::class_level, "lsm_c_area_sd"},
      {"area_cv", "patch area", area_and_edge, Level::class_level, "lsm_c_area_cv"},
      {"pland", "percentage of landscape", area_and_edge, Level::class_level, "lsm_c_pland"},
      {"ca", "total (class) area", area_and_edge, Level::class_level, "lsm_c_ca"},
      {"ta", "total area", area_and_edge, Level::landscape, "lsm_l_ta"},
      {"lpi", "largest patch index", area_and_edge, Level::landscape, "lsm_l_lpi"},
      {"pr", "patch richness", diversity, Level::landscape, "lsm_l_pr"},
      {"shdi", "shannon's diversity index", diversity, Level::landscape, "lsm_l_shdi"},
      {"np", "number of patches", aggregation, Level::landscape, "lsm_l_np"},
  };
  return r;
}

/// Selected metric names for one level, sorted, validated against the registry.
std::vector<std::string> select(Level level, const std::vector<std::string>& which) {
  std::set<std::string> known;
  for (const auto& d : registry())
    if (d.level == level) known.insert(d.metric);
  if (which.empty()) return {known.begin(), known.end()};
  std::set<std::string> chosen;
  for (const auto& w : which) {
    if (!known.count(w)) throw UsageError("unknown " + to_string(level) + " metric '" + w + "'");
    chosen.insert(w);
  }
  return {chosen.begin(), chosen.end()};
}

struct PatchGeometry {
  int id = 0;
  std::size_t cells = 0;
  std::size_t exposed_sides = 0;
  std::size_t core_cells = 0;
};

struct ClassSummary {
  int class_code = 0;
  std::size_t cells = 0;
  std::vector<PatchGeometry> patches;
};

struct LandscapeSummary {
  double cellsize = 1.0;
  std::size_t valid_cells = 0;
  std::vector<ClassSummary> classes;
};

LandscapeSummary summarize(const CategoricalGrid& grid, Connectivity connectivity) {
  LandscapeSummary s;
  s.cellsize = grid.cellsize();
  s.valid_cells = grid.size() - grid.missing_count();
  const auto classes = grid.classes();
  s.classes.resize(classes.size());
  const auto& g = grid.geometry();
  parallel_for(classes.size(), [&](std::size_t k) {
    const int cls = classes[k];
    const PatchLabeling labeling = label_patches(grid, cls, connectivity);
    ClassSummary& cs = s.classes[k];
    cs.class_code = cls;
    for (const auto& p : labeling.patches) {
      PatchGeometry pg{p.id, p.cells.size(), 0, 0};
      for (std::size_t i : p.cells) {
        const auto [r, c] = g.position(i);
        std::size_t exposed = 0;
        exposed += (r == 0 || grid[i - g.ncols] != cls);
        exposed += (r + 1 == g.nrows || grid[i + g.ncols] != cls);
        exposed += (c == 0 || grid[i - 1] != cls);
        exposed += (c + 1 == g.ncols || grid[i + 1] != cls);
        pg.exposed_sides += exposed;
        if (exposed == 0) ++pg.core_cells;
      }
      cs.cells += pg.cells;
      cs.patches.push_back(pg);
    }
  });
  return s;
}

double patch_value(const std::string& metric, const PatchGeometry& p, double cellsize) {
  const double area_m2 = static_cast<double>(p.cells) * cellsize * cellsize;
  const double perim_m = static_cast<double>(p.exposed_sides) * cellsize;
  if (metric == "area") return area_m2 / kSquareMetersPerHectare;
  if (metric == "perim") return perim_m;
  if (metric == "shape")
    return static_cast<double>(p.exposed_sides) / static_cast<double>(min_perimeter_sides(p.cells));
  if (metric == "frac") {
    if (p.cells == 1) return 1.0;
    return 2.0 * std::log(0.25 * perim_m) / std::log(area_m2);
  }
  if (metric == "cai") return 100.0 * static_cast<double>(p.core_cells) / static_cast<double>(p.cells);
  throw UsageError("unknown patch metric '" + metric + "'");
}

std::vector<MetricRecord> patch_records(const LandscapeSummary& s, const std::vector<std::string>& metrics) {
  std::vector<MetricRecord> out;
  for (const auto& cs : s.classes)
    for (const auto& p : cs.patches)
      for (const auto& m : metrics)
        out.push_back({1, Level::patch, cs.class_code, p.id, m, patch_value(m, p, s.cellsize)});
  return out;
}

double class_value(const std::string& metric, const ClassSummary& cs, const LandscapeSummary& s) {
  const double cell_ha = s.cellsize * s.cellsize / kSquareMetersPerHectare;
  const double np = static_cast<double>(cs.patches.size());
  if (metric == "np") return np;
  if (metric == "ca") return static_cast<double>(cs.cells) * cell_ha;
  if (metric == "pland") return 100.0 * static_cast<double>(cs.cells) / static_cast<double>(s.valid_cells);
  double sum = 0.0;
  for (const auto& p : cs.patches) sum += static_cast<double>(p.cells) * cell_ha;
  const double mean = sum / np;
  if (metric == "area_mn") return mean;
  double ss = 0.0;
  for (const auto& p : cs.patches) {
    const double d = static_cast<double>(p.cells) * cell_ha - mean;
    ss += d * d;
  }
  const double sd = cs.patches.size() > 1 ? std::sqrt(ss / (np - 1.0)) : kNaN;
  if (metric == "area_sd") return sd;
  if (metric == "area_cv") return 100.0 * sd / mean;
  throw UsageError("unknown class metric '" + metric + "'");
}

std::vector<MetricRecord> class_records(const LandscapeSummary& s, const std::vector<std::string>& metrics) {
  std::vector<MetricRecord> out;
  for (const auto& cs : s.classes)
    for (const auto& m : metrics) out.push_back({1, Level::class_level, cs.class_code, std::nullopt, m, class_value(m, cs, s)});
  return out;
}

double landscape_value(const std::string& metric, const LandscapeSummary& s) {
  const double cell_ha = s.cellsize * s.cellsize / kSquareMetersPerHectare;
  if (metric == "ta") return static_cast<double>(s.valid_cells) * cell_ha;
  if (metric == "pr") return static_cast<double>(s.classes.size());
  if (metric == "np") {
    std::size_t n = 0;
    for (const auto& cs : s.classes) n += cs.patches.size();
    return static_cast<double>(n);
  }
  if (s.valid_cells == 0) return kNaN;
  if (metric == "lpi") {
    std::size_t largest = 0;
    for (const auto& cs : s.classes)
      for (const auto& p : cs.patches) largest = std::max(largest, p.cells);
    return 100.0 * static_cast<double>(largest) / static_cast<double>(s.valid_cells);
  }
  if (metric == "shdi") {
    double h = 0.0;
    for (const auto& cs : s.classes) {
      const double q = static_cast<double>(cs.cells) / static_cast<double>(s.valid_cells);
      h -= q * std::log(q);
    }
    return h == 0.0 ? 0.0 : h;  // avoid -0
  }
  throw UsageError("unknown landscape metric '" + metric + "'");
}

std::vector<MetricRecord> landscape_records(const LandscapeSummary& s, const std::vector<std::string>& metrics) {
  std::vector<MetricRecord> out;
  for (const auto& m : metrics) out.push_back({1, Level::landscape, std::nullopt, std::nullopt, m, landscape_value(m, s)});
  return out;
}

}  // namespace

std::string to_string(Level level) {
  switch (level) {
    case Level::patch: return "patch";
    case Level::class_level: return "class";
    case Level::landscape: break;
  }
  return "landscape";
}

std::string to_string(MetricType type) {
  switch (type) {
    case MetricType::area_and_edge: return "area and edge";
    case MetricType::shape: return "shape";
    case MetricType::core_area: return "core area";
    case MetricType::aggregation: return "aggregation";
    case MetricType::diversity: break;
  }
  return "diversity";
}

Level parse_level(std::string_view text) {
  if (text == "patch") return Level::patch;
  if (text == "class") return Level::class_level;
  if (text == "landscape") return Level::landscape;
  throw UsageError("unknown level '" + std::string(text) + "' (expected patch, class or landscape)");
}

MetricType parse_metric_type(std::string_view text) {
  constexpr std::string_view suffix = " metric";
  if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix)
    text.remove_suffix(suffix.size());
  for (auto t : {MetricType::area_and_edge, MetricType::shape, MetricType::core_area, MetricType::aggregation,
                 MetricType::diversity})
    if (to_string(t) == text) return t;
  throw UsageError("unknown metric type '" + std::string(text) + "'");
}

std::span<const MetricDescriptor> metric_registry() { return registry(); }

std::vector<MetricDescriptor> list_metrics(std::optional<Level> level, std::optional<MetricType> type) {
  std::vector<MetricDescriptor> out;
  for (const auto& d : registry())
    if ((!level || d.level == *level) && (!type || d.type == *type)) out.push_back(d);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.metric, a.level) < std::tie(b.metric, b.level);
  });
  return out;
}

std::optional<MetricDescriptor> find_metric(std::string_view function_name) {
  for (const auto& d : registry())
    if (d.function_name == function_name) return d;
  return std::nullopt;
}

std::size_t min_perimeter_sides(std::size_t n) {
  auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (m * m > n) --m;
  while ((m + 1) * (m + 1) <= n) ++m;
  if (m * m == n) return 4 * m;
  if (n <= m * (m + 1)) return 4 * m + 2;
  return 4 * m + 4;
}

std::vector<MetricRecord> compute_patch_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                const std::vector<std::string>& which) {
  const auto metrics = select(Level::patch, which);
  return patch_records(summarize(grid, connectivity), metrics);
}

std::vector<MetricRecord> compute_class_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                const std::vector<std::string>& which) {
  const auto metrics = select(Level::class_level, which);
  return class_records(summarize(grid, connectivity), metrics);
}

std::vector<MetricRecord> compute_landscape_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                                    const std::vector<std::string>& which) {
  const auto metrics = select(Level::landscape, which);
  return landscape_records(summarize(grid, connectivity), metrics);
}

std::vector<MetricRecord> compute_metrics(const CategoricalGrid& grid, Connectivity connectivity,
                                          std::span<const MetricDescriptor> which) {
  std::array<std::vector<std::string>, 3> per_level;
  for (const auto& d : which) per_level[static_cast<std::size_t>(d.level)].push_back(d.metric);
  const LandscapeSummary s = summarize(grid, connectivity);
  std::vector<MetricRecord> out;
  if (!per_level[0].empty()) {
    auto r = patch_records(s, select(Level::patch, per_level[0]));
    out.insert(out.end(), r.begin(), r.end());
  }
  if (!per_level[1].empty()) {
    auto r = class_records(s, select(Level::class_level, per_level[1]));
    out.insert(out.end(), r.begin(), r.end());
  }
  if (!per_level[2].empty()) {
    auto r = landscape_records(s, select(Level::landscape, per_level[2]));
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

CorrelationMatrix correlation_matrix(std::span<const MetricRecord> records) {
  if (records.empty()) throw UsageError("correlation needs at least one record");
  const Level level = records.front().level;
  using Unit = std::tuple<int, std::optional<int>, std::optional<int>>;
  std::map<Unit, std::map<std::string, double>> table;
  std::set<std::string> metric_names;
  for (const auto& r : records) {
    if (r.level != level) throw UsageError("correlation records mix levels");
    table[{r.layer, r.class_code, r.patch_id}][r.metric] = r.value;
    metric_names.insert(r.metric);
  }
  if (table.size() < 3)
    throw UsageError("correlation needs at least 3 units, got " + std::to_string(table.size()));
  CorrelationMatrix m;
  m.metrics.assign(metric_names.begin(), metric_names.end());
  const std::size_t k = m.metrics.size();
  const std::size_t n = table.size();
  std::vector<double> columns(k * n);
  std::size_t u = 0;
  for (const auto& [unit, values] : table) {
    for (std::size_t j = 0; j < k; ++j) {
      auto it = values.find(m.metrics[j]);
      if (it == values.end()) {
        const auto& [layer, cls, id] = unit;
        throw UsageError("metric '" + m.metrics[j] + "' missing for layer " + std::to_string(layer) +
                         " class " + format_optional(cls) + " id " + format_optional(id));
      }
      columns[j * n + u] = it->second;
    }
    ++u;
  }
  std::vector<double> centered(k * n);
  std::vector<double> norm(k);
  for (std::size_t j = 0; j < k; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += columns[j * n + i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = columns[j * n + i] - mean;
      centered[j * n + i] = d;
      ss += d * d;
    }
    norm[j] = std::sqrt(ss);
  }
  m.values.assign(k * k, kNaN);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      if (norm[a] == 0.0 || norm[b] == 0.0) continue;
      double r = 1.0;
      if (a != b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += centered[a * n + i] * centered[b * n + i];
        r = std::clamp(s / (norm[a] * norm[b]), -1.0, 1.0);
      }
      m.values[a * k + b] = m.values[b * k + a] = r;
    }
  }
  return m;
}

std::string format_record_fields(const MetricRecord& r) {
  return std::to_string(r.layer) + "," + to_string(r.level) + "," + format_optional(r.class_code) + "," +
         format_optional(r.patch_id) + "," + r.metric + "," + format_number(r.value);
}

void write_records_csv(std::ostream& out, std::span<const MetricRecord> records) {
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) out << format_record_fields(r) << '\n';
}

}  // namespace landpat
