#include "landpat/grid.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "landpat/errors.hpp"

namespace landpat {

bool GridGeometry::locate(MapPoint p, CellPos& out) const noexcept {
  const double fx = (p.x - xll) / cellsize;
  const double fy = (ymax() - p.y) / cellsize;
  if (!(fx >= 0.0) || !(fy >= 0.0)) return false;
  const auto col = static_cast<std::size_t>(std::floor(fx));
  const auto row = static_cast<std::size_t>(std::floor(fy));
  if (col >= ncols || row >= nrows) return false;
  out = {row, col};
  return true;
}

void GridGeometry::validate() const {
  if (nrows == 0 || ncols == 0) throw UsageError("grid must have at least one row and one column");
  if (!(cellsize > 0.0) || !std::isfinite(cellsize)) throw UsageError("cellsize must be positive");
}

CategoricalGrid::CategoricalGrid(GridGeometry geometry, std::vector<int> cells, int nodata_code,
                                 Metadata meta)
    : geometry_(geometry), cells_(std::move(cells)), nodata_(nodata_code), meta_(std::move(meta)) {
  geometry_.validate();
  if (cells_.size() != geometry_.size()) {
    throw UsageError("cell count " + std::to_string(cells_.size()) + " does not match " +
                     std::to_string(geometry_.nrows) + "x" + std::to_string(geometry_.ncols));
  }
  for (int v : cells_) {
    if (v != nodata_ && v < 0) throw UsageError("class codes must be non-negative, got " + std::to_string(v));
  }
}

std::vector<int> CategoricalGrid::classes() const {
  // Class codes are usually few and small; a flag table beats a set there.
  std::vector<int> out;
  int max_code = -1;
  for (int v : cells_)
    if (v != nodata_) max_code = std::max(max_code, v);
  if (max_code < 0) return out;
  if (max_code <= (1 << 20)) {
    std::vector<char> seen(static_cast<std::size_t>(max_code) + 1, 0);
    for (int v : cells_)
      if (v != nodata_) seen[static_cast<std::size_t>(v)] = 1;
    for (std::size_t c = 0; c < seen.size(); ++c)
      if (seen[c]) out.push_back(static_cast<int>(c));
    return out;
  }
  std::set<int> s;
  for (int v : cells_)
    if (v != nodata_) s.insert(v);
  return {s.begin(), s.end()};
}

std::size_t CategoricalGrid::missing_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), nodata_));
}

CategoricalGrid CategoricalGrid::with_geometry(GridGeometry geometry) const {
  if (geometry.nrows != geometry_.nrows || geometry.ncols != geometry_.ncols)
    throw UsageError("with_geometry cannot change dimensions");
  return CategoricalGrid(geometry, cells_, nodata_, meta_);
}

CategoricalGrid CategoricalGrid::with_meta(Metadata meta) const {
  CategoricalGrid copy = *this;
  copy.meta_ = std::move(meta);
  return copy;
}

NumericGrid::NumericGrid(GridGeometry geometry, double fill)
    : geometry_(geometry), values_(geometry.size(), fill) {
  geometry_.validate();
}

NumericGrid::NumericGrid(GridGeometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::move(values)) {
  geometry_.validate();
  if (values_.size() != geometry_.size()) throw UsageError("value count does not match grid dimensions");
}

PointSet::PointSet(std::vector<PointRecord> points) : points_(std::move(points)) {
  std::unordered_set<int> ids;
  for (const auto& p : points_) {
    if (!ids.insert(p.id).second) throw UsageError("duplicate point id " + std::to_string(p.id));
  }
}

}  // namespace landpat
