#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "landpat/errors.hpp"
#include "landpat/grid.hpp"

namespace landpat {

/// Neighborhood used to decide whether two same-class cells belong to one patch.
enum class Connectivity { rook4 = 4, queen8 = 8 };

/// Maps a `directions` value (4 or 8) to a Connectivity; UsageError otherwise.
Connectivity connectivity_from_directions(int directions);

struct CellBox {
  std::size_t row_min = 0, row_max = 0, col_min = 0, col_max = 0;
  std::size_t height() const noexcept { return row_max - row_min + 1; }
  std::size_t width() const noexcept { return col_max - col_min + 1; }
};

struct PatchInfo {
  int id = 0;
  std::size_t cell_count = 0;
  CellBox bbox;
  /// Member cell indices in raster scan order.
  std::vector<std::size_t> cells;
};

/// Patches of one class. `labels[i]` is the patch id (1..P) of cell i, or 0
/// when the cell does not belong to the class.
struct PatchLabeling {
  int class_code = 0;
  Connectivity connectivity = Connectivity::queen8;
  GridGeometry geometry;
  std::vector<int> labels;
  std::vector<PatchInfo> patches;  // patches[id - 1]

  std::size_t patch_count() const noexcept { return patches.size(); }
  const PatchInfo& patch(int id) const { return patches.at(static_cast<std::size_t>(id - 1)); }
};

/// Connected components of `class_code`. Ids are dense and follow raster scan
/// order of each patch's first cell. A class absent from the grid gives P = 0.
PatchLabeling label_patches(const CategoricalGrid& grid, int class_code, Connectivity connectivity);

/// One labeling per class in ascending class order, computed in parallel.
std::vector<PatchLabeling> label_all_classes(const CategoricalGrid& grid, Connectivity connectivity);

/// Offsets turning per-class ids into landscape-unique ids:
/// global = offsets[k] + local for the k-th labeling.
std::vector<int> global_id_offsets(std::span<const PatchLabeling> labelings);

/// Per-cell edge flag of a labeling: 1 when a labeled cell has a rook
/// neighbor that is outside the raster, missing, or of another class.
std::vector<std::uint8_t> edge_flags(const PatchLabeling& labeling, const CategoricalGrid& grid);

/// Boundary raster: 1 = edge cell, 0 = core cell, nodata elsewhere.
CategoricalGrid get_boundaries(const PatchLabeling& labeling, const CategoricalGrid& grid);

/// Counts of ordered rook-adjacent cell pairs per class pair (symmetric).
struct AdjacencyMatrix {
  std::vector<int> classes;
  std::vector<std::int64_t> counts;  // row-major, classes.size()^2

  std::size_t dimension() const noexcept { return classes.size(); }
  std::int64_t at(std::size_t i, std::size_t j) const { return counts.at(i * classes.size() + j); }
};

std::vector<int> get_unique_values(const CategoricalGrid& grid);
AdjacencyMatrix get_adjacencies(const CategoricalGrid& grid);

struct NearestNeighbor {
  int patch_id = 0;
  std::optional<double> distance;  // meters, between edge-cell centers
  std::optional<int> neighbor_id;  // smallest id among equally near patches
};

/// Minimum center-to-center distance from each patch to any other patch of
/// the same labeling. With fewer than two patches every distance is missing
/// and a warning is recorded.
std::vector<NearestNeighbor> nearest_neighbor_distances(const PatchLabeling& labeling,
                                                        Warnings* warnings = nullptr);

struct Circle {
  MapPoint center;
  double radius = 0.0;
};

/// Smallest circle containing every point (randomized incremental method,
/// expected linear time, deterministic seed). Empty input gives radius 0.
Circle min_enclosing_circle(std::span<const MapPoint> points);

struct EnclosingCircle {
  int patch_id = 0;
  double diameter = 0.0;
  MapPoint center;
};

/// Smallest circle around the corner points of every cell of each patch.
std::vector<EnclosingCircle> circumscribing_circles(const PatchLabeling& labeling);

struct Centroid {
  int patch_id = 0;
  MapPoint point;
};

/// Mean of member cell centers.
std::vector<Centroid> centroids(const PatchLabeling& labeling);

}  // namespace landpat
