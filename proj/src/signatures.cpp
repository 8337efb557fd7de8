#include "landpat/signatures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "landpat/errors.hpp"
#include "landpat/format.hpp"
#include "landpat/parallel.hpp"

namespace landpat {

std::string to_string(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::composition: return "composition";
    case SignatureKind::cove: return "cove";
    case SignatureKind::wecove: return "wecove";
    case SignatureKind::incove: break;
  }
  return "incove";
}

SignatureKind parse_signature_kind(std::string_view text) {
  for (auto k : {SignatureKind::composition, SignatureKind::cove, SignatureKind::wecove, SignatureKind::incove})
    if (to_string(k) == text) return k;
  throw UsageError("unknown signature type '" + std::string(text) + "' (expected composition, cove, wecove or incove)");
}

std::size_t signature_length(SignatureKind kind, std::size_t slots) {
  if (kind == SignatureKind::composition) return slots;
  return (slots * slots - slots) / 2 + slots;
}

bool Signature::is_zero() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

WindowSpec WindowSpec::blocks(std::size_t k) {
  if (k == 0) throw UsageError("window size must be at least 1 cell");
  WindowSpec s;
  s.mode = Mode::block;
  s.block_size = k;
  return s;
}

WindowSpec WindowSpec::zoned(CategoricalGrid zone_grid) {
  WindowSpec s;
  s.mode = Mode::zones;
  s.zones = std::move(zone_grid);
  return s;
}

WindowGrid::WindowGrid(const GridGeometry& geometry, const WindowSpec& spec)
    : mode_(spec.mode), geometry_(geometry) {
  geometry_.validate();
  switch (mode_) {
    case WindowSpec::Mode::whole:
      block_rows_ = geometry.nrows;
      block_cols_ = geometry.ncols;
      ids_ = {1};
      break;
    case WindowSpec::Mode::block: {
      if (spec.block_size == 0) throw UsageError("window size must be at least 1 cell");
      block_rows_ = block_cols_ = spec.block_size;
      lattice_rows_ = (geometry.nrows + block_rows_ - 1) / block_rows_;
      lattice_cols_ = (geometry.ncols + block_cols_ - 1) / block_cols_;
      ids_.resize(lattice_rows_ * lattice_cols_);
      for (std::size_t w = 0; w < ids_.size(); ++w) ids_[w] = static_cast<int>(w + 1);
      break;
    }
    case WindowSpec::Mode::zones: {
      if (!spec.zones) throw UsageError("zone windows need a zone raster");
      const CategoricalGrid& z = *spec.zones;
      if (z.nrows() != geometry.nrows || z.ncols() != geometry.ncols)
        throw UsageError("zone raster is " + std::to_string(z.nrows()) + "x" + std::to_string(z.ncols()) +
                         ", expected " + std::to_string(geometry.nrows) + "x" + std::to_string(geometry.ncols));
      if (std::abs(z.geometry().xll - geometry.xll) > 1e-6 * geometry.cellsize ||
          std::abs(z.geometry().yll - geometry.yll) > 1e-6 * geometry.cellsize ||
          std::abs(z.cellsize() - geometry.cellsize) > 1e-9 * geometry.cellsize)
        throw UsageError("zone raster is not co-registered with the input raster");
      ids_ = z.classes();
      zone_values_.assign(z.cells().begin(), z.cells().end());
      zone_nodata_ = z.nodata_code();
      zone_cells_.resize(ids_.size());
      std::map<int, std::size_t> slot;
      for (std::size_t w = 0; w < ids_.size(); ++w) slot[ids_[w]] = w;
      for (std::size_t i = 0; i < zone_values_.size(); ++i)
        if (zone_values_[i] != zone_nodata_) zone_cells_[slot[zone_values_[i]]].push_back(i);
      break;
    }
  }
}

std::optional<std::size_t> WindowGrid::index_of(int id) const {
  if (mode_ == WindowSpec::Mode::zones) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
  }
  if (id < 1 || static_cast<std::size_t>(id) > ids_.size()) return std::nullopt;
  return static_cast<std::size_t>(id - 1);
}

std::optional<std::size_t> WindowGrid::window_of(std::size_t cell) const noexcept {
  if (mode_ == WindowSpec::Mode::zones) {
    const int v = zone_values_[cell];
    if (v == zone_nodata_) return std::nullopt;
    return static_cast<std::size_t>(std::lower_bound(ids_.begin(), ids_.end(), v) - ids_.begin());
  }
  const auto pos = geometry_.position(cell);
  return (pos.row / block_rows_) * lattice_cols_ + pos.col / block_cols_;
}

CellBox WindowGrid::extent(std::size_t w) const {
  if (mode_ == WindowSpec::Mode::zones) {
    const auto& cells = zone_cells_.at(w);
    CellBox b{geometry_.nrows, 0, geometry_.ncols, 0};
    for (std::size_t i : cells) {
      const auto p = geometry_.position(i);
      b.row_min = std::min(b.row_min, p.row);
      b.row_max = std::max(b.row_max, p.row);
      b.col_min = std::min(b.col_min, p.col);
      b.col_max = std::max(b.col_max, p.col);
    }
    return b;
  }
  const std::size_t br = w / lattice_cols_, bc = w % lattice_cols_;
  CellBox b;
  b.row_min = br * block_rows_;
  b.col_min = bc * block_cols_;
  b.row_max = std::min(geometry_.nrows, b.row_min + block_rows_) - 1;
  b.col_max = std::min(geometry_.ncols, b.col_min + block_cols_) - 1;
  return b;
}

std::size_t WindowGrid::cell_count(std::size_t w) const {
  if (mode_ == WindowSpec::Mode::zones) return zone_cells_.at(w).size();
  const CellBox b = extent(w);
  return b.height() * b.width();
}

GridGeometry WindowGrid::lattice_geometry() const {
  if (mode_ == WindowSpec::Mode::zones) return geometry_;
  GridGeometry lat;
  lat.nrows = lattice_rows_;
  lat.ncols = lattice_cols_;
  const std::size_t side = mode_ == WindowSpec::Mode::whole ? std::max(geometry_.nrows, geometry_.ncols) : block_rows_;
  lat.cellsize = geometry_.cellsize * static_cast<double>(side);
  lat.xll = geometry_.xll;
  lat.yll = geometry_.ymax() - static_cast<double>(lattice_rows_) * lat.cellsize;
  return lat;
}

NumericGrid WindowGrid::rasterize(std::span<const double> per_window) const {
  if (per_window.size() != window_count()) throw UsageError("one value per window expected");
  if (mode_ == WindowSpec::Mode::zones) {
    NumericGrid out(geometry_);
    for (std::size_t w = 0; w < window_count(); ++w)
      for (std::size_t i : zone_cells_[w]) out[i] = per_window[w];
    return out;
  }
  return NumericGrid(lattice_geometry(), std::vector<double>(per_window.begin(), per_window.end()));
}

std::vector<int> union_classes(std::span<const CategoricalGrid> grids) {
  std::set<int> all;
  for (const auto& g : grids) {
    const auto c = g.classes();
    all.insert(c.begin(), c.end());
  }
  return {all.begin(), all.end()};
}

namespace {

bool same_lattice(const GridGeometry& a, const GridGeometry& b) {
  return a.nrows == b.nrows && a.ncols == b.ncols && std::abs(a.cellsize - b.cellsize) <= 1e-9 * a.cellsize &&
         std::abs(a.xll - b.xll) <= 1e-6 * a.cellsize && std::abs(a.yll - b.yll) <= 1e-6 * a.cellsize;
}

/// Maps each cell to a slot index in [0, slots), or -1 when missing.
struct SlotRaster {
  std::vector<int> slot;
  std::size_t slots = 0;
  std::vector<std::string> labels;
};

std::vector<int> slots_for(const CategoricalGrid& grid, const std::vector<int>& basis) {
  std::vector<int> out(grid.size(), -1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_missing(i)) continue;
    auto it = std::lower_bound(basis.begin(), basis.end(), grid[i]);
    if (it == basis.end() || *it != grid[i])
      throw UsageError("class " + std::to_string(grid[i]) + " is not part of the class basis");
    out[i] = static_cast<int>(it - basis.begin());
  }
  return out;
}

SlotRaster build_slots(std::span<const CategoricalGrid> layers, const std::vector<std::vector<int>>& bases) {
  SlotRaster s;
  s.slot.assign(layers.front().size(), 0);
  s.slots = 1;
  s.labels = {""};
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& basis = bases[k];
    const auto layer_slots = slots_for(layers[k], basis);
    for (std::size_t i = 0; i < s.slot.size(); ++i) {
      if (s.slot[i] < 0 || layer_slots[i] < 0) {
        s.slot[i] = -1;
      } else {
        s.slot[i] = s.slot[i] * static_cast<int>(basis.size()) + layer_slots[i];
      }
    }
    std::vector<std::string> labels;
    for (const auto& prefix : s.labels)
      for (int c : basis) labels.push_back(prefix.empty() ? std::to_string(c) : prefix + ":" + std::to_string(c));
    s.labels = std::move(labels);
    s.slots *= basis.size();
  }
  return s;
}

}  // namespace

SignatureTable compute_signatures(std::span<const CategoricalGrid> layers, SignatureKind kind,
                                  const WindowGrid& windows, const NumericGrid* weights,
                                  std::vector<std::vector<int>> bases) {
  if (layers.empty()) throw UsageError("at least one raster is required");
  if (kind == SignatureKind::incove && layers.size() < 2)
    throw UsageError("incove needs two or more co-registered rasters");
  if (kind != SignatureKind::incove && layers.size() != 1)
    throw UsageError(to_string(kind) + " takes exactly one raster");
  if (kind == SignatureKind::wecove && !weights) throw UsageError("wecove needs a weight raster");
  const GridGeometry& g = layers.front().geometry();
  for (const auto& l : layers)
    if (!same_lattice(l.geometry(), g)) throw UsageError("rasters do not share the same geometry");
  if (!same_lattice(windows.geometry(), g)) throw UsageError("window tiling does not match the raster geometry");
  if (weights) {
    if (!same_lattice(weights->geometry(), g)) throw UsageError("weight raster is not co-registered with the input");
    for (double v : weights->values())
      if (v < 0.0) throw UsageError("weights must be non-negative");
  }
  if (bases.empty())
    for (const auto& l : layers) bases.push_back(l.classes());
  if (bases.size() != layers.size()) throw UsageError("one class basis per raster expected");
  for (auto& b : bases) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }

  const SlotRaster sr = build_slots(layers, bases);
  SignatureTable table;
  table.kind = kind;
  table.class_labels = sr.labels;
  const std::size_t length = signature_length(kind, sr.slots);
  table.rows.resize(windows.window_count());

  parallel_for(windows.window_count(), [&](std::size_t w) {
    Signature& sig = table.rows[w];
    sig.id = windows.id(w);
    sig.values.assign(length, 0.0);
    std::size_t total = 0, missing = 0;
    const auto& slot = sr.slot;
    windows.for_each_cell(w, [&](std::size_t a) {
      ++total;
      const int sa = slot[a];
      if (sa < 0) {
        ++missing;
        return;
      }
      if (kind == SignatureKind::composition) {
        sig.values[static_cast<std::size_t>(sa)] += 1.0;
        return;
      }
      const auto pos = g.position(a);
      auto pair = [&](std::size_t b) {
        const int sb = slot[b];
        if (sb < 0 || windows.window_of(b) != w) return;
        double contribution = 1.0;
        if (weights) {
          const double wa = (*weights)[a], wb = (*weights)[b];
          if (std::isnan(wa) || std::isnan(wb)) return;
          contribution = 0.5 * (wa + wb);
        }
        sig.values[pair_slot(static_cast<std::size_t>(sa), static_cast<std::size_t>(sb))] += contribution;
      };
      if (pos.col + 1 < g.ncols) pair(a + 1);
      if (pos.row + 1 < g.nrows) pair(a + g.ncols);
    });
    sig.na_prop = total ? static_cast<double>(missing) / static_cast<double>(total) : 1.0;
    double sum = 0.0;
    for (double v : sig.values) sum += v;
    if (sum > 0.0)
      for (double& v : sig.values) v /= sum;
  });
  return table;
}

SignatureTable windowed_signatures(std::span<const CategoricalGrid> layers, SignatureKind kind,
                                   const WindowSpec& spec, const NumericGrid* weights,
                                   std::vector<std::vector<int>> bases) {
  if (layers.empty()) throw UsageError("at least one raster is required");
  const WindowGrid windows(layers.front().geometry(), spec);
  return compute_signatures(layers, kind, windows, weights, std::move(bases));
}

Signature composition_signature(const CategoricalGrid& grid, const std::vector<int>& class_basis) {
  return windowed_signatures(std::span(&grid, 1), SignatureKind::composition, WindowSpec::whole(), nullptr,
                             {class_basis}).rows.front();
}

Signature cove_signature(const CategoricalGrid& grid, const std::vector<int>& class_basis) {
  return windowed_signatures(std::span(&grid, 1), SignatureKind::cove, WindowSpec::whole(), nullptr, {class_basis})
      .rows.front();
}

Signature wecove_signature(const CategoricalGrid& grid, const NumericGrid& weights,
                           const std::vector<int>& class_basis) {
  return windowed_signatures(std::span(&grid, 1), SignatureKind::wecove, WindowSpec::whole(), &weights,
                             {class_basis}).rows.front();
}

Signature incove_signature(std::span<const CategoricalGrid> layers, const std::vector<std::vector<int>>& bases) {
  return windowed_signatures(layers, SignatureKind::incove, WindowSpec::whole(), nullptr, bases).rows.front();
}

void write_signature_csv(std::ostream& out, const SignatureTable& table) {
  out << "# kind=" << to_string(table.kind) << " classes=";
  for (std::size_t i = 0; i < table.class_labels.size(); ++i) out << (i ? "," : "") << table.class_labels[i];
  out << "\nid,na_prop";
  const std::size_t length = table.length();
  for (std::size_t j = 0; j < length; ++j) out << ",v" << j + 1;
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.id << ',' << format_number(row.na_prop);
    for (double v : row.values) out << ',' << format_number(v);
    out << '\n';
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(s.substr(0, p));
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

double parse_double(std::string_view token, std::size_t line) {
  if (token == kMissingToken) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("signature CSV: '" + std::string(token) + "' is not a number", line);
  return v;
}

}  // namespace

SignatureTable read_signature_csv(std::istream& in) {
  SignatureTable table;
  bool have_kind = false, have_header = false;
  std::size_t width = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ss(line.substr(1));
      std::string field;
      while (ss >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const auto key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "kind") {
          table.kind = parse_signature_kind(value);
          have_kind = true;
        } else if (key == "classes") {
          table.class_labels.clear();
          if (!value.empty())
            for (auto part : split(value, ',')) table.class_labels.emplace_back(part);
        }
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "id" || fields[1] != "na_prop")
        throw ParseError("signature CSV: header must start with id,na_prop", lineno);
      width = fields.size() - 2;
      have_header = true;
      continue;
    }
    if (fields.size() != width + 2) throw ParseError("signature CSV: wrong number of fields", lineno);
    Signature s;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), s.id);
    if (ec != std::errc() || ptr != fields[0].data() + fields[0].size())
      throw ParseError("signature CSV: id '" + std::string(fields[0]) + "' is not an integer", lineno);
    s.na_prop = parse_double(fields[1], lineno);
    for (std::size_t j = 0; j < width; ++j) s.values.push_back(parse_double(fields[j + 2], lineno));
    table.rows.push_back(std::move(s));
  }
  if (!have_header) throw ParseError("signature CSV: missing header", lineno);
  if (!have_kind) table.kind = SignatureKind::composition;
  if (table.class_labels.empty() || table.length() != width) {
    // Without usable metadata, treat every column as its own slot.
    table.kind = SignatureKind::composition;
    table.class_labels.clear();
    for (std::size_t j = 0; j < width; ++j) table.class_labels.push_back("v" + std::to_string(j + 1));
  }
  return table;
}

}  // namespace landpat
