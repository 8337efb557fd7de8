#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landpat/grid.hpp"
#include "landpat/patches.hpp"

namespace landpat {

enum class SignatureKind { composition, cove, wecove, incove };

std::string to_string(SignatureKind kind);
SignatureKind parse_signature_kind(std::string_view text);

/// Vector length for `slots` classes (combined classes for incove).
std::size_t signature_length(SignatureKind kind, std::size_t slots);

/// Position of the unordered class pair (i, j) in a co-occurrence vector:
/// row-major lower triangle including the diagonal.
inline std::size_t pair_slot(std::size_t i, std::size_t j) noexcept {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

struct Signature {
  int id = 0;
  double na_prop = 0.0;
  std::vector<double> values;  // sums to 1, or all zero when nothing was counted

  bool is_zero() const noexcept;
};

struct SignatureTable {
  SignatureKind kind = SignatureKind::composition;
  /// Label of each class slot; `a:b` tuples for incove.
  std::vector<std::string> class_labels;
  std::vector<Signature> rows;  // ordered by id

  std::size_t length() const noexcept { return signature_length(kind, class_labels.size()); }
};

/// How a raster is cut into local landscapes: the whole raster, square blocks
/// of `block_size` cells, or the zones of a co-registered zone raster.
struct WindowSpec {
  enum class Mode { whole, block, zones };
  Mode mode = Mode::whole;
  std::size_t block_size = 0;
  std::optional<CategoricalGrid> zones;

  static WindowSpec whole() { return {}; }
  static WindowSpec blocks(std::size_t k);
  static WindowSpec zoned(CategoricalGrid zone_grid);
};

/// Realized tiling of a grid. Block ids run row-major over the block lattice
/// starting at 1 (edge blocks truncated); zone ids are the sorted zone values.
class WindowGrid {
 public:
  WindowGrid(const GridGeometry& geometry, const WindowSpec& spec);

  WindowSpec::Mode mode() const noexcept { return mode_; }
  const GridGeometry& geometry() const noexcept { return geometry_; }
  std::size_t window_count() const noexcept { return ids_.size(); }
  int id(std::size_t w) const { return ids_.at(w); }
  std::optional<std::size_t> index_of(int id) const;

  /// Window index of a cell; nullopt for cells outside every zone.
  std::optional<std::size_t> window_of(std::size_t cell) const noexcept;

  /// Cells of the window's bounding rectangle (exact extent for blocks).
  CellBox extent(std::size_t w) const;
  /// Number of member cells.
  std::size_t cell_count(std::size_t w) const;

  template <class Fn>
  void for_each_cell(std::size_t w, Fn&& fn) const {
    if (mode_ == WindowSpec::Mode::zones) {
      for (std::size_t i : zone_cells_[w]) fn(i);
      return;
    }
    const CellBox b = extent(w);
    for (std::size_t r = b.row_min; r <= b.row_max; ++r)
      for (std::size_t c = b.col_min; c <= b.col_max; ++c) fn(geometry_.index(r, c));
  }

  std::size_t lattice_rows() const noexcept { return lattice_rows_; }
  std::size_t lattice_cols() const noexcept { return lattice_cols_; }

  /// Geometry of the window lattice (block or whole mode): one cell per window,
  /// aligned to the raster's top-left corner. Whole mode uses a square cell
  /// of the raster's longer side. Zone mode returns the raster geometry.
  GridGeometry lattice_geometry() const;

  /// Spreads one value per window onto the lattice (or onto zone cells).
  NumericGrid rasterize(std::span<const double> per_window) const;

 private:
  WindowSpec::Mode mode_;
  GridGeometry geometry_;
  std::size_t block_rows_ = 0, block_cols_ = 0;
  std::size_t lattice_rows_ = 1, lattice_cols_ = 1;
  std::vector<int> ids_;
  std::vector<int> zone_values_;
  int zone_nodata_ = 0;
  std::vector<std::vector<std::size_t>> zone_cells_;
};

/// Signatures of every window. `layers` holds one raster, or two or more for
/// incove; `weights` is required for wecove. `bases` optionally fixes the
/// sorted class list of each layer (defaults to the layer's own classes) so
/// that several rasters can share slot meaning.
SignatureTable compute_signatures(std::span<const CategoricalGrid> layers, SignatureKind kind,
                                  const WindowGrid& windows, const NumericGrid* weights = nullptr,
                                  std::vector<std::vector<int>> bases = {});

SignatureTable windowed_signatures(std::span<const CategoricalGrid> layers, SignatureKind kind,
                                   const WindowSpec& spec, const NumericGrid* weights = nullptr,
                                   std::vector<std::vector<int>> bases = {});

/// Single-window forms over a whole grid.
Signature composition_signature(const CategoricalGrid& grid, const std::vector<int>& class_basis);
Signature cove_signature(const CategoricalGrid& grid, const std::vector<int>& class_basis);
Signature wecove_signature(const CategoricalGrid& grid, const NumericGrid& weights,
                           const std::vector<int>& class_basis);
Signature incove_signature(std::span<const CategoricalGrid> layers, const std::vector<std::vector<int>>& bases);

/// Sorted union of the classes of all grids.
std::vector<int> union_classes(std::span<const CategoricalGrid> grids);

/// `# kind=<kind> classes=<labels>` comment, then `id,na_prop,v1..vL`.
void write_signature_csv(std::ostream& out, const SignatureTable& table);
SignatureTable read_signature_csv(std::istream& in);

}  // namespace landpat
