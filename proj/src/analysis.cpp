#include "landpat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "landpat/errors.hpp"
#include "landpat/format.hpp"
#include "landpat/parallel.hpp"

namespace landpat {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::jensen_shannon: return "jensen-shannon";
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::manhattan: break;
  }
  return "manhattan";
}

DistanceKind parse_distance_kind(std::string_view text) {
  for (auto k : {DistanceKind::jensen_shannon, DistanceKind::euclidean, DistanceKind::manhattan})
    if (to_string(k) == text) return k;
  throw UsageError("unknown distance '" + std::string(text) + "' (expected jensen-shannon, euclidean or manhattan)");
}

std::optional<double> distance(std::span<const double> p, std::span<const double> q, DistanceKind kind) {
  if (p.size() != q.size())
    throw UsageError("signature lengths differ: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
  const auto zero = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (zero(p) || zero(q)) return std::nullopt;
  double acc = 0.0;
  switch (kind) {
    case DistanceKind::jensen_shannon:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        const double tp = p[i] > 0.0 ? p[i] * std::log(p[i] / m) : 0.0;
        const double tq = q[i] > 0.0 ? q[i] * std::log(q[i] / m) : 0.0;
        acc += 0.5 * (tp + tq);  // one commutative sum keeps d(p,q) == d(q,p) bit for bit
      }
      return std::clamp(acc, 0.0, std::numbers::ln2);
    case DistanceKind::euclidean:
      for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(acc);
    case DistanceKind::manhattan:
      for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
      return acc;
  }
  return std::nullopt;
}

namespace {

void require_same_geometry(const GridGeometry& a, const GridGeometry& b, const char* what) {
  const bool same = a.nrows == b.nrows && a.ncols == b.ncols &&
                    std::abs(a.cellsize - b.cellsize) <= 1e-9 * a.cellsize &&
                    std::abs(a.xll - b.xll) <= 1e-6 * a.cellsize && std::abs(a.yll - b.yll) <= 1e-6 * a.cellsize;
  if (!same)
    throw UsageError(std::string(what) + ": raster geometries differ (" + std::to_string(a.nrows) + "x" +
                     std::to_string(a.ncols) + " vs " + std::to_string(b.nrows) + "x" + std::to_string(b.ncols) +
                     ")");
}

void require_single_raster_kind(SignatureKind kind) {
  if (kind == SignatureKind::incove) throw UsageError("incove needs several rasters per side; not supported here");
}

}  // namespace

ComparisonResult compare_rasters(const CategoricalGrid& x, const CategoricalGrid& y, SignatureKind kind,
                                 DistanceKind distance_kind, const WindowSpec& spec, const NumericGrid* weights) {
  require_same_geometry(x.geometry(), y.geometry(), "compare");
  require_single_raster_kind(kind);
  const std::vector<CategoricalGrid> both{x, y};
  const std::vector<int> basis = union_classes(both);
  const WindowGrid windows(x.geometry(), spec);
  const auto sx = compute_signatures(std::span(&x, 1), kind, windows, weights, {basis});
  const auto sy = compute_signatures(std::span(&y, 1), kind, windows, weights, {basis});

  ComparisonResult out;
  out.records.resize(windows.window_count());
  parallel_for(windows.window_count(), [&](std::size_t w) {
    auto& rec = out.records[w];
    rec.id = sx.rows[w].id;
    rec.na_prop_x = sx.rows[w].na_prop;
    rec.na_prop_y = sy.rows[w].na_prop;
    rec.dist = distance(sx.rows[w].values, sy.rows[w].values, distance_kind);
  });
  std::vector<double> ids, nx, ny, d;
  for (const auto& r : out.records) {
    ids.push_back(r.id);
    nx.push_back(r.na_prop_x);
    ny.push_back(r.na_prop_y);
    d.push_back(r.dist.value_or(kNaN));
  }
  out.id = windows.rasterize(ids);
  out.na_prop_x = windows.rasterize(nx);
  out.na_prop_y = windows.rasterize(ny);
  out.dist = windows.rasterize(d);
  return out;
}

SearchResult search_pattern(const CategoricalGrid& query, const CategoricalGrid& target, SignatureKind kind,
                            DistanceKind distance_kind, const WindowSpec& spec) {
  require_single_raster_kind(kind);
  if (kind == SignatureKind::wecove) throw UsageError("search does not support wecove");
  if (query.missing_count() == query.size()) throw UsageError("search query is entirely missing");
  const std::vector<CategoricalGrid> both{query, target};
  const std::vector<int> basis = union_classes(both);
  const Signature q = windowed_signatures(std::span(&query, 1), kind, WindowSpec::whole(), nullptr, {basis}).rows.front();
  if (q.is_zero()) throw UsageError("search query has no usable cells or adjacencies");
  const WindowGrid windows(target.geometry(), spec);
  const auto st = compute_signatures(std::span(&target, 1), kind, windows, nullptr, {basis});

  SearchResult out;
  out.records.resize(windows.window_count());
  parallel_for(windows.window_count(), [&](std::size_t w) {
    out.records[w] = {st.rows[w].id, st.rows[w].na_prop, distance(q.values, st.rows[w].values, distance_kind)};
  });
  std::vector<double> ids, na, d;
  for (const auto& r : out.records) {
    ids.push_back(r.id);
    na.push_back(r.na_prop);
    d.push_back(r.dist.value_or(kNaN));
  }
  out.id = windows.rasterize(ids);
  out.na_prop = windows.rasterize(na);
  out.dist = windows.rasterize(d);
  return out;
}

CategoricalGrid extract_window(const CategoricalGrid& grid, const WindowSpec& spec, int id) {
  const WindowGrid windows(grid.geometry(), spec);
  const auto w = windows.index_of(id);
  if (!w) throw UsageError("unknown window id " + std::to_string(id));
  const CellBox b = windows.extent(*w);
  const auto& g = grid.geometry();
  GridGeometry sub;
  sub.nrows = b.height();
  sub.ncols = b.width();
  sub.cellsize = g.cellsize;
  sub.xll = g.xll + static_cast<double>(b.col_min) * g.cellsize;
  sub.yll = g.yll + static_cast<double>(g.nrows - 1 - b.row_max) * g.cellsize;
  std::vector<int> cells(sub.size(), grid.nodata_code());
  windows.for_each_cell(*w, [&](std::size_t i) {
    const auto p = g.position(i);
    cells[sub.index(p.row - b.row_min, p.col - b.col_min)] = grid[i];
  });
  return CategoricalGrid(sub, std::move(cells), grid.nodata_code(), grid.meta());
}

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::single: break;
  }
  return "single";
}

Linkage parse_linkage(std::string_view text) {
  for (auto l : {Linkage::complete, Linkage::average, Linkage::single})
    if (to_string(l) == text) return l;
  throw UsageError("unknown linkage '" + std::string(text) + "' (expected complete, average or single)");
}

namespace {

class Condensed {
 public:
  Condensed(std::vector<double> d, std::size_t n) : d_(std::move(d)), n_(n) {}
  double& operator()(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return d_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)];
  }

 private:
  std::vector<double> d_;
  std::size_t n_;
};

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<Merge> agglomerate(std::span<const double> condensed, std::size_t n, Linkage linkage) {
  if (condensed.size() != n * (n - 1) / 2) throw UsageError("condensed distance vector has the wrong length");
  Condensed d(std::vector<double>(condensed.begin(), condensed.end()), n);
  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1);
  struct Raw {
    std::size_t a, b;
    double height;
  };
  std::vector<Raw> raw;
  raw.reserve(n ? n - 1 : 0);

  // Nearest-neighbor chain; valid for reducible linkages (single, complete, average).
  std::vector<std::size_t> chain;
  std::size_t remaining = n;
  while (remaining > 1) {
    if (chain.empty()) {
      std::size_t first = 0;
      while (!active[first]) ++first;
      chain.push_back(first);
    }
    std::size_t a = 0, b = 0;
    while (true) {
      a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;  // n: no predecessor
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_c = n;
      if (prev != n) {
        best = d(a, prev);
        best_c = prev;
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (!active[c] || c == a) continue;
        const double v = d(a, c);
        if (v < best) {
          best = v;
          best_c = c;
        }
      }
      b = best_c;
      if (prev != n && b == prev) break;
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();
    const double height = d(a, b);
    const std::size_t keep = std::min(a, b), drop = std::max(a, b);
    raw.push_back({keep, drop, height});
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == a || c == b) continue;
      const double da = d(keep, c), db = d(drop, c);
      double v = 0.0;
      switch (linkage) {
        case Linkage::single: v = std::min(da, db); break;
        case Linkage::complete: v = std::max(da, db); break;
        case Linkage::average:
          v = (static_cast<double>(size[keep]) * da + static_cast<double>(size[drop]) * db) /
              static_cast<double>(size[keep] + size[drop]);
          break;
      }
      d(keep, c) = v;
    }
    size[keep] += size[drop];
    active[drop] = 0;
    --remaining;
  }

  std::stable_sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) { return x.height < y.height; });
  DisjointSets sets(n);
  std::vector<int> node(n);
  for (std::size_t i = 0; i < n; ++i) node[i] = -static_cast<int>(i + 1);
  std::vector<Merge> merges;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    const std::size_t ra = sets.find(raw[s].a), rb = sets.find(raw[s].b);
    int left = node[ra], right = node[rb];
    // Singletons first, then by magnitude.
    const bool swap = (left > 0 && right < 0) || ((left < 0) == (right < 0) && std::abs(left) > std::abs(right));
    if (swap) std::swap(left, right);
    const int step = static_cast<int>(s + 1);
    merges.push_back({step, left, right, raw[s].height});
    const std::size_t root = std::min(ra, rb);
    sets.parent[std::max(ra, rb)] = root;
    node[root] = step;
  }
  return merges;
}

std::vector<int> cut_tree(std::span<const Merge> merges, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw UsageError("cluster count must be between 1 and " + std::to_string(n));
  DisjointSets sets(n);
  // Item index behind each step, so later merges can address clusters.
  std::vector<std::size_t> step_item(merges.size() + 1, 0);
  auto item_of = [&](int member) {
    return member < 0 ? static_cast<std::size_t>(-member - 1) : step_item[static_cast<std::size_t>(member)];
  };
  for (std::size_t s = 0; s < merges.size() && s < n - k; ++s) {
    const std::size_t a = sets.find(item_of(merges[s].left)), b = sets.find(item_of(merges[s].right));
    sets.parent[std::max(a, b)] = std::min(a, b);
    step_item[static_cast<std::size_t>(merges[s].step)] = std::min(a, b);
  }
  std::vector<int> labels(n, 0);
  std::vector<int> root_label(n, 0);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = sets.find(i);
    if (root_label[r] == 0) root_label[r] = ++next;
    labels[i] = root_label[r];
  }
  return labels;
}

ClusterResult hierarchical_cluster(const SignatureTable& signatures, DistanceKind distance_kind, Linkage linkage,
                                   std::size_t k) {
  const auto& rows = signatures.rows;
  const std::size_t n = rows.size();
  if (n < 2) throw UsageError("clustering needs at least 2 signatures");
  if (k == 0 || k > n)
    throw UsageError("cluster count " + std::to_string(k) + " must be between 1 and " + std::to_string(n));
  for (const auto& r : rows)
    if (r.is_zero()) throw UsageError("signature " + std::to_string(r.id) + " is all zero and cannot be clustered");

  std::vector<double> condensed(n * (n - 1) / 2);
  parallel_for(n, [&](std::size_t i) {
    std::size_t base = i * (2 * n - i - 1) / 2;
    for (std::size_t j = i + 1; j < n; ++j) condensed[base + (j - i - 1)] = *distance(rows[i].values, rows[j].values, distance_kind);
  });
  ClusterResult out;
  auto merges = agglomerate(condensed, n, linkage);
  const auto labels = cut_tree(merges, n, k);
  for (std::size_t i = 0; i < n; ++i) out.assignments.push_back({rows[i].id, labels[i]});
  for (auto& m : merges) {
    if (m.left < 0) m.left = -rows[static_cast<std::size_t>(-m.left - 1)].id;
    if (m.right < 0) m.right = -rows[static_cast<std::size_t>(-m.right - 1)].id;
  }
  out.merges = std::move(merges);
  return out;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRecord> records) {
  out << "id,na_prop_x,na_prop_y,dist\n";
  for (const auto& r : records)
    out << r.id << ',' << format_number(r.na_prop_x) << ',' << format_number(r.na_prop_y) << ','
        << format_number(r.dist) << '\n';
}

void write_search_csv(std::ostream& out, std::span<const SearchRecord> records) {
  out << "id,na_prop,dist\n";
  for (const auto& r : records) out << r.id << ',' << format_number(r.na_prop) << ',' << format_number(r.dist) << '\n';
}

void write_cluster_csv(std::ostream& out, std::span<const ClusterAssignment> assignments) {
  out << "id,cluster\n";
  for (const auto& a : assignments) out << a.id << ',' << a.cluster << '\n';
}

void write_merge_csv(std::ostream& out, std::span<const Merge> merges) {
  out << "step,left,right,height\n";
  for (const auto& m : merges) out << m.step << ',' << m.left << ',' << m.right << ',' << format_number(m.height) << '\n';
}

}  // namespace landpat
