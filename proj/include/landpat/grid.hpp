#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace landpat {

using Metadata = std::map<std::string, std::string>;

struct MapPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Row/column position of a cell. Row 0 is the northmost row.
struct CellPos {
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Regular square-cell lattice anchored at its lower-left corner.
struct GridGeometry {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cellsize = 1.0;

  std::size_t size() const noexcept { return nrows * ncols; }
  std::size_t index(std::size_t row, std::size_t col) const noexcept { return row * ncols + col; }
  CellPos position(std::size_t index) const noexcept { return {index / ncols, index % ncols}; }

  double xmax() const noexcept { return xll + static_cast<double>(ncols) * cellsize; }
  double ymax() const noexcept { return yll + static_cast<double>(nrows) * cellsize; }

  MapPoint cell_center(std::size_t row, std::size_t col) const noexcept {
    return {xll + (static_cast<double>(col) + 0.5) * cellsize,
            yll + (static_cast<double>(nrows - 1 - row) + 0.5) * cellsize};
  }

  /// Map coordinate of the top-left corner of a cell.
  MapPoint cell_corner(std::size_t row, std::size_t col) const noexcept {
    return {xll + static_cast<double>(col) * cellsize,
            yll + static_cast<double>(nrows - row) * cellsize};
  }

  /// Cell containing a map point, or false when outside [xll,xmax) x (yll,ymax].
  bool locate(MapPoint p, CellPos& out) const noexcept;

  /// Throws UsageError unless dimensions are positive and cellsize > 0.
  void validate() const;

  bool operator==(const GridGeometry&) const = default;
};

/// Integer-class raster. Cells equal to the nodata code are missing.
/// Immutable after construction.
class CategoricalGrid {
 public:
  static constexpr int kDefaultNodata = -9999;

  CategoricalGrid() = default;
  /// Throws UsageError when the cell count disagrees with the geometry or a
  /// non-missing cell is negative.
  CategoricalGrid(GridGeometry geometry, std::vector<int> cells, int nodata_code = kDefaultNodata,
                  Metadata meta = {});

  const GridGeometry& geometry() const noexcept { return geometry_; }
  std::size_t nrows() const noexcept { return geometry_.nrows; }
  std::size_t ncols() const noexcept { return geometry_.ncols; }
  std::size_t size() const noexcept { return cells_.size(); }
  double cellsize() const noexcept { return geometry_.cellsize; }
  int nodata_code() const noexcept { return nodata_; }
  const Metadata& meta() const noexcept { return meta_; }

  int operator[](std::size_t index) const noexcept { return cells_[index]; }
  int at(std::size_t row, std::size_t col) const noexcept { return cells_[geometry_.index(row, col)]; }
  bool is_missing(std::size_t index) const noexcept { return cells_[index] == nodata_; }
  std::span<const int> cells() const noexcept { return cells_; }

  /// Sorted distinct non-missing class codes.
  std::vector<int> classes() const;
  std::size_t missing_count() const;

  /// Copy with the same cells and a different geotransform or metadata.
  CategoricalGrid with_geometry(GridGeometry geometry) const;
  CategoricalGrid with_meta(Metadata meta) const;

 private:
  GridGeometry geometry_{};
  std::vector<int> cells_;
  int nodata_ = kDefaultNodata;
  Metadata meta_;
};

/// Real-valued raster; NaN marks missing cells.
class NumericGrid {
 public:
  NumericGrid() = default;
  explicit NumericGrid(GridGeometry geometry,
                       double fill = std::numeric_limits<double>::quiet_NaN());
  NumericGrid(GridGeometry geometry, std::vector<double> values);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  std::size_t nrows() const noexcept { return geometry_.nrows; }
  std::size_t ncols() const noexcept { return geometry_.ncols; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t index) const noexcept { return values_[index]; }
  double& operator[](std::size_t index) noexcept { return values_[index]; }
  double at(std::size_t row, std::size_t col) const noexcept { return values_[geometry_.index(row, col)]; }
  bool is_missing(std::size_t index) const noexcept { return std::isnan(values_[index]); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  GridGeometry geometry_{};
  std::vector<double> values_;
};

struct PointRecord {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Sample points with unique ids, kept in input order.
class PointSet {
 public:
  PointSet() = default;
  /// Throws UsageError on duplicate ids.
  explicit PointSet(std::vector<PointRecord> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const PointRecord& operator[](std::size_t i) const noexcept { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

 private:
  std::vector<PointRecord> points_;
};

}  // namespace landpat
