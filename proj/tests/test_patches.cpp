#include <doctest.h>

#include <cmath>
#include <random>

#include "landpat/patches.hpp"
#include "oracles.hpp"

using namespace landpat;

namespace {

constexpr int NA = CategoricalGrid::kDefaultNodata;

CategoricalGrid checkerboard() { return oracle::make_grid(3, 3, {1, 2, 1, 2, 1, 2, 1, 2, 1}); }

}  // namespace

TEST_CASE("checkerboard connectivity") {
  CHECK(label_patches(checkerboard(), 1, Connectivity::queen8).patch_count() == 1);
  CHECK(label_patches(checkerboard(), 1, Connectivity::rook4).patch_count() == 5);
  CHECK(label_patches(checkerboard(), 7, Connectivity::rook4).patch_count() == 0);
}

TEST_CASE("patch ids follow scan order of first cells") {
  const auto g = oracle::make_grid(2, 4, {1, 2, 1, 1, 2, 2, 2, 1});
  const auto lab = label_patches(g, 1, Connectivity::rook4);
  REQUIRE(lab.patch_count() == 2);
  CHECK(lab.labels[0] == 1);
  CHECK(lab.labels[2] == 2);
  CHECK(lab.labels[7] == 2);
  CHECK(lab.patch(2).cell_count == 3);
  CHECK(lab.patch(2).bbox.col_min == 2);
  CHECK(lab.patch(2).bbox.row_max == 1);
}

TEST_CASE("labeling matches flood fill on random grids") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_grid(rng, 10, 10, 3, 0.1);
    for (int code : g.classes())
      for (bool queen : {false, true}) {
        const auto lab = label_patches(g, code, queen ? Connectivity::queen8 : Connectivity::rook4);
        CHECK(lab.labels == oracle::flood_fill(g, code, queen));
      }
  }
}

TEST_CASE("labelings partition the non-missing cells") {
  std::mt19937_64 rng(12);
  const auto g = oracle::random_grid(rng, 12, 9, 4, 0.15);
  const auto all = label_all_classes(g, Connectivity::rook4);
  std::vector<int> owners(g.size(), 0);
  for (const auto& lab : all)
    for (std::size_t i = 0; i < g.size(); ++i)
      if (lab.labels[i] != 0) ++owners[i];
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(owners[i] == (g.is_missing(i) ? 0 : 1));
  const auto offsets = global_id_offsets(all);
  REQUIRE(offsets.size() == all.size());
  CHECK(offsets[0] == 0);
  for (std::size_t k = 1; k < all.size(); ++k)
    CHECK(offsets[k] == offsets[k - 1] + static_cast<int>(all[k - 1].patch_count()));
}

TEST_CASE("boundaries") {
  SUBCASE("single cell is edge") {
    const auto g = oracle::make_grid(3, 3, {2, 2, 2, 2, 1, 2, 2, 2, 2});
    const auto b = get_boundaries(label_patches(g, 1, Connectivity::rook4), g);
    CHECK(b.at(1, 1) == 1);
    CHECK(b.is_missing(0));
  }
  SUBCASE("3x3 solid square") {
    const auto g = oracle::make_grid(3, 3, std::vector<int>(9, 1));
    const auto b = get_boundaries(label_patches(g, 1, Connectivity::queen8), g);
    int edge = 0, core = 0;
    for (int v : b.cells()) (v == 1 ? edge : core) += 1;
    CHECK(edge == 8);
    CHECK(core == 1);
  }
  SUBCASE("4x4 solid square matches the per-cell oracle") {
    const auto g = oracle::make_grid(4, 4, std::vector<int>(16, 3));
    const auto b = get_boundaries(label_patches(g, 3, Connectivity::queen8), g);
    int edge = 0;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(b.at(r, c) == (oracle::is_core(g, r, c) ? 0 : 1));
        edge += b.at(r, c);
      }
    CHECK(edge == 12);
  }
  SUBCASE("random grids: edge plus core equals patch size") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
      const auto g = oracle::random_grid(rng, 8, 8, 2, 0.1);
      for (int code : g.classes()) {
        const auto lab = label_patches(g, code, Connectivity::queen8);
        const auto flags = edge_flags(lab, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (lab.labels[i] == 0) continue;
          const auto p = g.geometry().position(i);
          CHECK(static_cast<bool>(flags[i]) == !oracle::is_core(g, p.row, p.col));
        }
      }
    }
  }
}

TEST_CASE("adjacency matrix") {
  SUBCASE("two-row stripes") {
    const auto m = get_adjacencies(oracle::make_grid(2, 2, {1, 1, 2, 2}));
    REQUIRE(m.dimension() == 2);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(1, 1) == 2);
    CHECK(m.at(0, 1) == 2);
    CHECK(m.at(1, 0) == 2);
  }
  SUBCASE("all missing") {
    const auto m = get_adjacencies(oracle::make_grid(1, 2, {NA, NA}));
    CHECK(m.dimension() == 0);
    CHECK(m.counts.empty());
    CHECK(get_unique_values(oracle::make_grid(1, 2, {NA, NA})).empty());
  }
  SUBCASE("random grids match the neighbor enumeration") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
      const auto g = oracle::random_grid(rng, 1 + rng() % 10, 1 + rng() % 10, 4, 0.1);
      const auto m = get_adjacencies(g);
      const auto expected = oracle::ordered_adjacencies(g);
      CHECK(m.classes == get_unique_values(g));
      std::int64_t total = 0;
      for (std::size_t i = 0; i < m.dimension(); ++i)
        for (std::size_t j = 0; j < m.dimension(); ++j) {
          const auto it = expected.find({m.classes[i], m.classes[j]});
          CHECK(m.at(i, j) == (it == expected.end() ? 0 : it->second));
          CHECK(m.at(i, j) == m.at(j, i));
          total += m.at(i, j);
        }
      std::int64_t unordered = 0;
      for (std::size_t r = 0; r < g.nrows(); ++r)
        for (std::size_t c = 0; c < g.ncols(); ++c) {
          if (g.at(r, c) == NA) continue;
          if (c + 1 < g.ncols() && g.at(r, c + 1) != NA) ++unordered;
          if (r + 1 < g.nrows() && g.at(r + 1, c) != NA) ++unordered;
        }
      CHECK(total == 2 * unordered);
    }
  }
}

TEST_CASE("nearest neighbour distances") {
  SUBCASE("two cells three columns apart") {
    const auto g = oracle::make_grid(1, 4, {1, 2, 2, 1});
    const auto nn = nearest_neighbor_distances(label_patches(g, 1, Connectivity::rook4));
    REQUIRE(nn.size() == 2);
    CHECK(*nn[0].distance == doctest::Approx(300.0));
    CHECK(*nn[0].neighbor_id == 2);
    CHECK(*nn[1].neighbor_id == 1);
  }
  SUBCASE("single patch warns") {
    Warnings w;
    const auto g = oracle::make_grid(1, 2, {1, 1});
    const auto nn = nearest_neighbor_distances(label_patches(g, 1, Connectivity::rook4), &w);
    REQUIRE(nn.size() == 1);
    CHECK_FALSE(nn[0].distance.has_value());
    CHECK_FALSE(w.empty());
  }
  SUBCASE("random sparse grids match all pairs") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
      const auto g = oracle::random_grid(rng, 9, 11, 3, 0.2);
      for (int code : g.classes()) {
        const auto lab = label_patches(g, code, Connectivity::rook4);
        const auto got = nearest_neighbor_distances(lab);
        const auto want = oracle::nearest_neighbors(g, lab.labels);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) {
          REQUIRE(got[k].distance.has_value() == want[k].has_value());
          if (!want[k]) continue;
          CHECK(*got[k].distance == doctest::Approx(want[k]->first).epsilon(1e-12));
          CHECK(*got[k].neighbor_id == want[k]->second);
        }
      }
    }
  }
}

TEST_CASE("circumscribing circles") {
  SUBCASE("single cell") {
    const auto g = oracle::make_grid(1, 1, {1});
    const auto c = circumscribing_circles(label_patches(g, 1, Connectivity::rook4));
    REQUIRE(c.size() == 1);
    CHECK(c[0].diameter == doctest::Approx(100.0 * std::sqrt(2.0)));
    CHECK(c[0].center.x == doctest::Approx(50.0));
  }
  SUBCASE("domino") {
    const auto g = oracle::make_grid(1, 2, {1, 1});
    const auto c = circumscribing_circles(label_patches(g, 1, Connectivity::rook4));
    CHECK(c[0].diameter == doctest::Approx(std::sqrt(200.0 * 200.0 + 100.0 * 100.0)));
    CHECK(c[0].diameter == doctest::Approx(223.607).epsilon(1e-6));
  }
  SUBCASE("random small patches match brute force and contain every corner") {
    std::mt19937_64 rng(16);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const auto g = oracle::random_grid(rng, 5, 5, 3, 0.1);
      for (int code : g.classes()) {
        const auto lab = label_patches(g, code, Connectivity::queen8);
        const auto circles = circumscribing_circles(lab);
        for (const auto& p : lab.patches) {
          if (p.cell_count > 8) continue;
          const auto corners = oracle::cell_corners(g.geometry(), lab.labels, p.id);
          const auto& c = circles[static_cast<std::size_t>(p.id - 1)];
          CHECK(std::abs(c.diameter / 2 - oracle::enclosing_radius(corners)) < 1e-9);
          for (const auto& q : corners) CHECK(std::hypot(q.x - c.center.x, q.y - c.center.y) <= c.diameter / 2 + 1e-9);
          ++checked;
        }
      }
    }
    CHECK(checked > 100);
  }
  SUBCASE("generic point sets") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<MapPoint> pts(1 + rng() % 12);
      for (auto& p : pts) p = {u(rng), u(rng)};
      const auto c = min_enclosing_circle(pts);
      CHECK(std::abs(c.radius - oracle::enclosing_radius(pts)) < 1e-9);
    }
  }
}

TEST_CASE("centroids") {
  SUBCASE("2x2 block") {
    const auto g = oracle::make_grid(2, 2, {1, 1, 1, 1});
    const auto c = centroids(label_patches(g, 1, Connectivity::rook4));
    CHECK(c[0].point.x == doctest::Approx(100.0));
    CHECK(c[0].point.y == doctest::Approx(100.0));
  }
  SUBCASE("single cell") {
    const auto g = oracle::make_grid(1, 1, {4});
    const auto c = centroids(label_patches(g, 4, Connectivity::rook4));
    CHECK(c[0].point.x == doctest::Approx(50.0));
    CHECK(c[0].point.y == doctest::Approx(50.0));
  }
  SUBCASE("random patches equal the mean of enumerated centers") {
    std::mt19937_64 rng(18);
    const auto g = oracle::random_grid(rng, 10, 10, 2, 0.1);
    const auto lab = label_patches(g, 1, Connectivity::queen8);
    const auto got = centroids(lab);
    const auto flood = oracle::flood_fill(g, 1, true);
    for (int id = 1; id <= oracle::patch_count(flood); ++id) {
      double sx = 0, sy = 0, n = 0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (flood[i] == id) {
          const auto p = g.geometry().position(i);
          sx += g.geometry().cell_center(p.row, p.col).x;
          sy += g.geometry().cell_center(p.row, p.col).y;
          ++n;
        }
      CHECK(got[static_cast<std::size_t>(id - 1)].point.x == doctest::Approx(sx / n).epsilon(1e-12));
      CHECK(got[static_cast<std::size_t>(id - 1)].point.y == doctest::Approx(sy / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("rook never yields fewer patches than queen") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_grid(rng, 12, 12, 4, 0.1);
    for (int code : g.classes())
      CHECK(label_patches(g, code, Connectivity::rook4).patch_count() >=
            label_patches(g, code, Connectivity::queen8).patch_count());
  }
}
