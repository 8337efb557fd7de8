#include "landpat/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "landpat/parallel.hpp"

namespace landpat {

Connectivity connectivity_from_directions(int directions) {
  if (directions == 4) return Connectivity::rook4;
  if (directions == 8) return Connectivity::queen8;
  throw UsageError("directions must be 4 or 8, got " + std::to_string(directions));
}

namespace {

class UnionFind {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

PatchLabeling label_patches(const CategoricalGrid& grid, int class_code, Connectivity connectivity) {
  const auto& g = grid.geometry();
  PatchLabeling out;
  out.class_code = class_code;
  out.connectivity = connectivity;
  out.geometry = g;
  out.labels.assign(g.size(), 0);
  if (class_code == grid.nodata_code()) return out;

  // First pass: provisional labels (1-based) merged through union-find.
  constexpr std::uint32_t kNone = 0;
  std::vector<std::uint32_t> provisional(g.size(), kNone);
  UnionFind uf;
  uf.make();  // slot 0 unused
  const bool queen = connectivity == Connectivity::queen8;
  for (std::size_t r = 0; r < g.nrows; ++r) {
    for (std::size_t c = 0; c < g.ncols; ++c) {
      const std::size_t i = g.index(r, c);
      if (grid[i] != class_code) continue;
      std::uint32_t label = kNone;
      auto join = [&](std::size_t j) {
        const std::uint32_t other = provisional[j];
        if (other == kNone) return;
        label = label == kNone ? uf.find(other) : uf.unite(label, other);
      };
      if (c > 0) join(i - 1);
      if (r > 0) {
        join(i - g.ncols);
        if (queen) {
          if (c > 0) join(i - g.ncols - 1);
          if (c + 1 < g.ncols) join(i - g.ncols + 1);
        }
      }
      provisional[i] = label == kNone ? uf.make() : label;
    }
  }

  // Second pass: dense ids in scan order of first encounter.
  std::vector<int> final_id;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (provisional[i] == kNone) continue;
    const std::uint32_t root = uf.find(provisional[i]);
    if (final_id.size() <= root) final_id.resize(root + 1, 0);
    int& id = final_id[root];
    if (id == 0) {
      out.patches.push_back(PatchInfo{});
      id = static_cast<int>(out.patches.size());
      auto& p = out.patches.back();
      p.id = id;
      const auto pos = g.position(i);
      p.bbox = {pos.row, pos.row, pos.col, pos.col};
    }
    out.labels[i] = id;
    auto& p = out.patches[static_cast<std::size_t>(id - 1)];
    const auto pos = g.position(i);
    p.bbox.row_max = std::max(p.bbox.row_max, pos.row);
    p.bbox.col_min = std::min(p.bbox.col_min, pos.col);
    p.bbox.col_max = std::max(p.bbox.col_max, pos.col);
    p.cells.push_back(i);
  }
  for (auto& p : out.patches) p.cell_count = p.cells.size();
  return out;
}

std::vector<PatchLabeling> label_all_classes(const CategoricalGrid& grid, Connectivity connectivity) {
  const auto classes = grid.classes();
  std::vector<PatchLabeling> out(classes.size());
  parallel_for(classes.size(), [&](std::size_t k) { out[k] = label_patches(grid, classes[k], connectivity); });
  return out;
}

std::vector<int> global_id_offsets(std::span<const PatchLabeling> labelings) {
  std::vector<int> offsets;
  int running = 0;
  for (const auto& l : labelings) {
    offsets.push_back(running);
    running += static_cast<int>(l.patch_count());
  }
  return offsets;
}

std::vector<std::uint8_t> edge_flags(const PatchLabeling& labeling, const CategoricalGrid& grid) {
  const auto& g = labeling.geometry;
  std::vector<std::uint8_t> edge(g.size(), 0);
  const int cls = labeling.class_code;
  for (const auto& p : labeling.patches) {
    for (std::size_t i : p.cells) {
      const auto [r, c] = g.position(i);
      const bool exposed = r == 0 || c == 0 || r + 1 == g.nrows || c + 1 == g.ncols ||
                           grid[i - 1] != cls || grid[i + 1] != cls || grid[i - g.ncols] != cls ||
                           grid[i + g.ncols] != cls;
      edge[i] = exposed ? 1 : 0;
    }
  }
  return edge;
}

CategoricalGrid get_boundaries(const PatchLabeling& labeling, const CategoricalGrid& grid) {
  const auto edge = edge_flags(labeling, grid);
  std::vector<int> cells(labeling.geometry.size(), CategoricalGrid::kDefaultNodata);
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (labeling.labels[i] != 0) cells[i] = edge[i];
  return CategoricalGrid(labeling.geometry, std::move(cells), CategoricalGrid::kDefaultNodata);
}

std::vector<int> get_unique_values(const CategoricalGrid& grid) { return grid.classes(); }

AdjacencyMatrix get_adjacencies(const CategoricalGrid& grid) {
  AdjacencyMatrix m;
  m.classes = grid.classes();
  const std::size_t n = m.classes.size();
  m.counts.assign(n * n, 0);
  if (n == 0) return m;
  const int max_code = m.classes.back();
  std::vector<int> slot(static_cast<std::size_t>(max_code) + 1, -1);
  for (std::size_t k = 0; k < n; ++k) slot[static_cast<std::size_t>(m.classes[k])] = static_cast<int>(k);

  const auto& g = grid.geometry();
  auto bump = [&](std::size_t a, std::size_t b) {
    if (grid.is_missing(a) || grid.is_missing(b)) return;
    const auto sa = static_cast<std::size_t>(slot[static_cast<std::size_t>(grid[a])]);
    const auto sb = static_cast<std::size_t>(slot[static_cast<std::size_t>(grid[b])]);
    ++m.counts[sa * n + sb];
    ++m.counts[sb * n + sa];
  };
  for (std::size_t r = 0; r < g.nrows; ++r) {
    for (std::size_t c = 0; c < g.ncols; ++c) {
      const std::size_t i = g.index(r, c);
      if (c + 1 < g.ncols) bump(i, i + 1);
      if (r + 1 < g.nrows) bump(i, i + g.ncols);
    }
  }
  return m;
}

std::vector<NearestNeighbor> nearest_neighbor_distances(const PatchLabeling& labeling, Warnings* warnings) {
  std::vector<NearestNeighbor> out(labeling.patch_count());
  for (std::size_t k = 0; k < out.size(); ++k) out[k].patch_id = labeling.patches[k].id;
  if (labeling.patch_count() < 2) {
    warn(warnings, "class " + std::to_string(labeling.class_code) +
                       ": fewer than two patches, nearest-neighbor distance undefined");
    return out;
  }
  const auto& g = labeling.geometry;
  const auto& labels = labeling.labels;
  const auto nrows = static_cast<std::int64_t>(g.nrows);
  const auto ncols = static_cast<std::int64_t>(g.ncols);

  // The nearest cell of another patch is never a core cell of it (a step
  // toward the query point stays inside that patch), so searching all
  // labeled cells from this patch's edge cells is equivalent to edge-to-edge.
  parallel_for(out.size(), [&](std::size_t k) {
    const auto& patch = labeling.patches[k];
    const int self = patch.id;
    std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
    int best_id = 0;
    for (std::size_t i : patch.cells) {
      const auto pos = g.position(i);
      const auto r = static_cast<std::int64_t>(pos.row);
      const auto c = static_cast<std::int64_t>(pos.col);
      // Interior cells of this patch cannot be strictly nearer than its edge.
      const bool interior = r > 0 && c > 0 && r + 1 < nrows && c + 1 < ncols && labels[i - 1] == self &&
                            labels[i + 1] == self && labels[i - g.ncols] == self && labels[i + g.ncols] == self;
      if (interior) continue;
      auto consider = [&](std::int64_t rr, std::int64_t cc) {
        const int other = labels[static_cast<std::size_t>(rr * ncols + cc)];
        if (other == 0 || other == self) return;
        const std::int64_t d2 = (rr - r) * (rr - r) + (cc - c) * (cc - c);
        if (d2 < best_d2 || (d2 == best_d2 && other < best_id)) {
          best_d2 = d2;
          best_id = other;
        }
      };
      for (std::int64_t ring = 1;; ++ring) {
        if (ring * ring > best_d2) break;
        const std::int64_t r0 = r - ring, r1 = r + ring, c0 = c - ring, c1 = c + ring;
        if (r0 < 0 && c0 < 0 && r1 >= nrows && c1 >= ncols) break;
        const std::int64_t cs = std::max<std::int64_t>(c0, 0), ce = std::min<std::int64_t>(c1, ncols - 1);
        if (r0 >= 0)
          for (std::int64_t cc = cs; cc <= ce; ++cc) consider(r0, cc);
        if (r1 < nrows)
          for (std::int64_t cc = cs; cc <= ce; ++cc) consider(r1, cc);
        const std::int64_t rs = std::max<std::int64_t>(r0 + 1, 0), re = std::min<std::int64_t>(r1 - 1, nrows - 1);
        if (c0 >= 0)
          for (std::int64_t rr = rs; rr <= re; ++rr) consider(rr, c0);
        if (c1 < ncols)
          for (std::int64_t rr = rs; rr <= re; ++rr) consider(rr, c1);
      }
    }
    out[k].distance = std::sqrt(static_cast<double>(best_d2)) * g.cellsize;
    out[k].neighbor_id = best_id;
  });
  return out;
}

namespace {

double dist(MapPoint a, MapPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

Circle circle_from(MapPoint a, MapPoint b) {
  const MapPoint c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {c, 0.5 * dist(a, b)};
}

Circle circle_from(MapPoint a, MapPoint b, MapPoint c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (std::abs(d) < 1e-300) {
    // Collinear: the widest pair spans all three.
    Circle best = circle_from(a, b);
    for (Circle cand : {circle_from(a, c), circle_from(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const MapPoint center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
  return {center, std::max({dist(center, a), dist(center, b), dist(center, c)})};
}

bool contains(const Circle& circle, MapPoint p) {
  return dist(circle.center, p) <= circle.radius * (1.0 + 1e-12) + 1e-12;
}

}  // namespace

Circle min_enclosing_circle(std::span<const MapPoint> input) {
  if (input.empty()) return {};
  std::vector<MapPoint> pts(input.begin(), input.end());
  std::mt19937 rng(0x5EC1);
  std::shuffle(pts.begin(), pts.end(), rng);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (contains(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (contains(c, pts[j])) continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (contains(c, pts[k])) continue;
        c = circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

std::vector<EnclosingCircle> circumscribing_circles(const PatchLabeling& labeling) {
  const auto& g = labeling.geometry;
  std::vector<EnclosingCircle> out(labeling.patch_count());
  parallel_for(out.size(), [&](std::size_t k) {
    const auto& patch = labeling.patches[k];
    // Only the outermost cell of each row can contribute hull corners.
    const std::size_t h = patch.bbox.height();
    std::vector<std::size_t> lo(h, std::numeric_limits<std::size_t>::max()), hi(h, 0);
    for (std::size_t i : patch.cells) {
      const auto [r, c] = g.position(i);
      lo[r - patch.bbox.row_min] = std::min(lo[r - patch.bbox.row_min], c);
      hi[r - patch.bbox.row_min] = std::max(hi[r - patch.bbox.row_min], c);
    }
    // Local frame in cell units relative to the bbox corner keeps the
    // arithmetic exact-ish regardless of map coordinate magnitude.
    std::vector<MapPoint> corners;
    corners.reserve(4 * h);
    for (std::size_t dr = 0; dr < h; ++dr) {
      if (lo[dr] > hi[dr]) continue;
      const double x0 = static_cast<double>(lo[dr] - patch.bbox.col_min);
      const double x1 = static_cast<double>(hi[dr] - patch.bbox.col_min + 1);
      const double y0 = static_cast<double>(dr);
      const double y1 = static_cast<double>(dr + 1);
      corners.insert(corners.end(), {{x0, y0}, {x1, y0}, {x0, y1}, {x1, y1}});
    }
    const Circle local = min_enclosing_circle(corners);
    const MapPoint origin = g.cell_corner(patch.bbox.row_min, patch.bbox.col_min);
    out[k].patch_id = patch.id;
    out[k].diameter = 2.0 * local.radius * g.cellsize;
    out[k].center = {origin.x + local.center.x * g.cellsize, origin.y - local.center.y * g.cellsize};
  });
  return out;
}

std::vector<Centroid> centroids(const PatchLabeling& labeling) {
  const auto& g = labeling.geometry;
  std::vector<Centroid> out;
  out.reserve(labeling.patch_count());
  for (const auto& patch : labeling.patches) {
    double sr = 0.0, sc = 0.0;
    for (std::size_t i : patch.cells) {
      const auto [r, c] = g.position(i);
      sr += static_cast<double>(r);
      sc += static_cast<double>(c);
    }
    const double n = static_cast<double>(patch.cells.size());
    const double mean_row = sr / n, mean_col = sc / n;
    out.push_back({patch.id,
                   {g.xll + (mean_col + 0.5) * g.cellsize,
                    g.yll + (static_cast<double>(g.nrows) - 1.0 - mean_row + 0.5) * g.cellsize}});
  }
  return out;
}

}  // namespace landpat
