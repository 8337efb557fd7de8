#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landpat/grid.hpp"
#include "landpat/signatures.hpp"

namespace landpat {

enum class DistanceKind { jensen_shannon, euclidean, manhattan };

std::string to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view text);

/// Dissimilarity of two signature vectors. Jensen-Shannon is the divergence
/// itself (natural log, not its square root), bounded by ln 2. Returns nullopt
/// when either vector is all zero. UsageError on length mismatch.
std::optional<double> distance(std::span<const double> p, std::span<const double> q, DistanceKind kind);

struct ComparisonRecord {
  int id = 0;
  double na_prop_x = 0.0;
  double na_prop_y = 0.0;
  std::optional<double> dist;
};

/// Per-window comparison plus one raster per column at window resolution.
struct ComparisonResult {
  std::vector<ComparisonRecord> records;
  NumericGrid id;
  NumericGrid na_prop_x;
  NumericGrid na_prop_y;
  NumericGrid dist;
};

/// Signature kind is composition, cove or wecove (`weights` shared by both
/// rasters). Both rasters use the sorted union of their classes.
ComparisonResult compare_rasters(const CategoricalGrid& x, const CategoricalGrid& y, SignatureKind kind,
                                 DistanceKind distance_kind, const WindowSpec& windows,
                                 const NumericGrid* weights = nullptr);

struct SearchRecord {
  int id = 0;
  double na_prop = 0.0;
  std::optional<double> dist;
};

struct SearchResult {
  std::vector<SearchRecord> records;
  NumericGrid id;
  NumericGrid na_prop;
  NumericGrid dist;
};

/// Whole-raster signature of `query` against every window of `target`.
SearchResult search_pattern(const CategoricalGrid& query, const CategoricalGrid& target, SignatureKind kind,
                            DistanceKind distance_kind, const WindowSpec& windows);

/// Sub-raster of one window with its own geotransform. Zone windows keep only
/// the zone's cells inside their bounding box.
CategoricalGrid extract_window(const CategoricalGrid& grid, const WindowSpec& windows, int id);

enum class Linkage { complete, average, single };

std::string to_string(Linkage linkage);
Linkage parse_linkage(std::string_view text);

/// One agglomeration step. Negative members are signature ids (-id), positive
/// members refer to an earlier step.
struct Merge {
  int step = 0;
  int left = 0;
  int right = 0;
  double height = 0.0;
};

/// Merge tree over `n` items from a condensed distance vector (row-major
/// upper triangle without diagonal, length n(n-1)/2). Merges are returned in
/// non-decreasing height; members are item indices encoded as -(index+1).
std::vector<Merge> agglomerate(std::span<const double> condensed, std::size_t n, Linkage linkage);

/// Cluster label per item after applying the first n-k merges. Labels are
/// 1..k in order of first appearance.
std::vector<int> cut_tree(std::span<const Merge> merges, std::size_t n, std::size_t k);

struct ClusterAssignment {
  int id = 0;
  int cluster = 0;
};

struct ClusterResult {
  std::vector<ClusterAssignment> assignments;  // input order
  std::vector<Merge> merges;                   // members encoded with signature ids
};

/// Agglomerative clustering of signatures on their full pairwise distance
/// matrix, cut into k clusters. All signatures must be non-zero.
ClusterResult hierarchical_cluster(const SignatureTable& signatures, DistanceKind distance_kind, Linkage linkage,
                                   std::size_t k);

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRecord> records);
void write_search_csv(std::ostream& out, std::span<const SearchRecord> records);
void write_cluster_csv(std::ostream& out, std::span<const ClusterAssignment> assignments);
void write_merge_csv(std::ostream& out, std::span<const Merge> merges);

}  // namespace landpat
