#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "landpat/errors.hpp"
#include "landpat/signatures.hpp"
#include "oracles.hpp"

using namespace landpat;

namespace {

constexpr int NA = CategoricalGrid::kDefaultNodata;

void check_values(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("vector lengths") {
  CHECK(signature_length(SignatureKind::composition, 5) == 5);
  CHECK(signature_length(SignatureKind::cove, 5) == 15);
  CHECK(signature_length(SignatureKind::wecove, 5) == 15);
  CHECK(signature_length(SignatureKind::incove, 4) == 10);
  CHECK(pair_slot(0, 0) == 0);
  CHECK(pair_slot(1, 0) == 1);
  CHECK(pair_slot(0, 1) == 1);
  CHECK(pair_slot(2, 1) == 4);
}

TEST_CASE("composition") {
  const auto g = oracle::make_grid(2, 2, {1, 1, 1, 2});
  const auto s = composition_signature(g, {1, 2});
  check_values(s.values, {0.75, 0.25});
  CHECK(s.na_prop == 0.0);
  const auto empty = composition_signature(oracle::make_grid(1, 2, {NA, NA}), {1, 2});
  CHECK(empty.is_zero());
  CHECK(empty.na_prop == 1.0);
  const auto partial = composition_signature(oracle::make_grid(1, 4, {3, NA, 3, 1}), {1, 2, 3});
  check_values(partial.values, {1.0 / 3, 0.0, 2.0 / 3});
  CHECK(partial.na_prop == doctest::Approx(0.25));
}

TEST_CASE("cove") {
  const auto g = oracle::make_grid(2, 2, {1, 1, 2, 2});
  check_values(cove_signature(g, {1, 2}).values, {0.25, 0.5, 0.25});
  check_values(cove_signature(oracle::make_grid(2, 2, {4, 4, 4, 4}), {4}).values, {1.0});
  CHECK(cove_signature(oracle::make_grid(2, 2, {1, NA, NA, 2}), {1, 2}).is_zero());

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto r = oracle::random_grid(rng, 1 + rng() % 10, 1 + rng() % 10, 4, 0.1);
    const std::vector<int> basis = {1, 2, 3, 4};
    const auto s = cove_signature(r, basis);
    check_values(s.values, oracle::cove(r, basis));
    if (!s.is_zero()) CHECK(sum(s.values) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cove is invariant under a half turn") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = oracle::random_grid(rng, 7, 5, 3, 0.1);
    std::vector<int> rotated(r.cells().rbegin(), r.cells().rend());
    const CategoricalGrid flipped(r.geometry(), rotated);
    check_values(cove_signature(r, {1, 2, 3}).values, cove_signature(flipped, {1, 2, 3}).values);
  }
}

TEST_CASE("wecove") {
  const auto g = oracle::make_grid(2, 2, {1, 1, 2, 2});
  const NumericGrid w(g.geometry(), std::vector<double>{1, 1, 3, 3});
  check_values(wecove_signature(g, w, {1, 2}).values, {0.125, 0.5, 0.375});
  const NumericGrid ones(g.geometry(), 1.0);
  check_values(wecove_signature(g, ones, {1, 2}).values, cove_signature(g, {1, 2}).values);
  const NumericGrid zeros(g.geometry(), 0.0);
  CHECK(wecove_signature(g, zeros, {1, 2}).is_zero());
  const NumericGrid negative(g.geometry(), std::vector<double>{1, -1, 1, 1});
  CHECK_THROWS_AS(wecove_signature(g, negative, {1, 2}), UsageError);
}

TEST_CASE("incove") {
  std::mt19937_64 rng(43);
  const auto a = oracle::random_grid(rng, 6, 6, 2, 0.0);
  const auto b = oracle::random_grid(rng, 6, 6, 2, 0.0);
  const std::vector<CategoricalGrid> pair{a, b};
  const auto s = incove_signature(pair, {{1, 2}, {1, 2}});
  CHECK(s.values.size() == 10);

  SUBCASE("constant second layer reduces to cove") {
    const CategoricalGrid constant(a.geometry(), std::vector<int>(36, 7));
    const std::vector<CategoricalGrid> layers{a, constant};
    // combined basis (1,7), (2,7) keeps the order of the first layer
    check_values(incove_signature(layers, {{1, 2}, {7}}).values, cove_signature(a, {1, 2}).values);
  }
  SUBCASE("identical layers only fill diagonal tuples") {
    const std::vector<CategoricalGrid> layers{a, a};
    const auto t = incove_signature(layers, {{1, 2}, {1, 2}});
    // combined index: (1,1)=0, (1,2)=1, (2,1)=2, (2,2)=3; only 0 and 3 occur
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const bool allowed = (i == 0 || i == 3) && (j == 0 || j == 3);
        if (!allowed) CHECK(t.values[pair_slot(i, j)] == 0.0);
      }
  }
  SUBCASE("a missing member masks the tuple") {
    const auto c = oracle::make_grid(1, 3, {1, 1, 1});
    const auto d = oracle::make_grid(1, 3, {1, NA, 1});
    const std::vector<CategoricalGrid> layers{c, d};
    const auto t = incove_signature(layers, {{1}, {1}});
    CHECK(t.is_zero());
    CHECK(t.na_prop == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("window tiling") {
  const GridGeometry geo{7, 5, 0.0, 0.0, 10.0};
  const WindowGrid w(geo, WindowSpec::blocks(3));
  CHECK(w.window_count() == 3 * 2);
  CHECK(w.lattice_rows() == 3);
  CHECK(w.lattice_cols() == 2);
  CHECK(w.id(0) == 1);
  CHECK(w.extent(1).col_min == 3);
  CHECK(w.extent(1).col_max == 4);
  CHECK(w.extent(5).row_min == 6);
  CHECK(w.cell_count(5) == 2);
  std::size_t covered = 0;
  for (std::size_t k = 0; k < w.window_count(); ++k) covered += w.cell_count(k);
  CHECK(covered == geo.size());
  CHECK(*w.window_of(geo.index(4, 4)) == 3);
  const auto lattice = w.lattice_geometry();
  CHECK(lattice.cellsize == 30.0);
  CHECK(lattice.ymax() == doctest::Approx(geo.ymax()));

  const WindowGrid whole(geo, WindowSpec::whole());
  CHECK(whole.window_count() == 1);
  CHECK(whole.id(0) == 1);

  const WindowGrid big(GridGeometry{2860, 2333, 0, 0, 100}, WindowSpec::blocks(50));
  CHECK(big.window_count() == 2726);
  CHECK(big.lattice_cols() == 47);
}

TEST_CASE("zone windows") {
  const auto g = oracle::make_grid(2, 3, {1, 2, 2, 3, NA, 3});
  const auto zones = oracle::make_grid(2, 3, {10, 10, 20, 30, 30, 30});
  const std::vector<CategoricalGrid> layer{g};
  const auto table = windowed_signatures(layer, SignatureKind::composition, WindowSpec::zoned(zones));
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].id == 10);
  CHECK(table.rows[2].id == 30);
  check_values(table.rows[0].values, {0.5, 0.5, 0.0});
  CHECK(table.rows[2].na_prop == doctest::Approx(1.0 / 3));

  const auto misaligned = oracle::make_grid(3, 2, {1, 1, 1, 1, 1, 1});
  CHECK_THROWS_AS(windowed_signatures(layer, SignatureKind::composition, WindowSpec::zoned(misaligned)), UsageError);
}

TEST_CASE("windowed signatures") {
  std::mt19937_64 rng(44);
  const auto g = oracle::random_grid(rng, 11, 9, 4, 0.1);
  const std::vector<CategoricalGrid> layer{g};
  const auto table = windowed_signatures(layer, SignatureKind::cove, WindowSpec::blocks(4));
  const WindowGrid w(g.geometry(), WindowSpec::blocks(4));
  REQUIRE(table.rows.size() == w.window_count());
  CHECK(table.class_labels == std::vector<std::string>{"1", "2", "3", "4"});

  double weighted_na = 0.0;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    CHECK(row.id == static_cast<int>(k + 1));
    CHECK(row.values.size() == 10);
    if (!row.is_zero()) CHECK(sum(row.values) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : row.values) CHECK(v >= 0.0);
    weighted_na += row.na_prop * static_cast<double>(w.cell_count(k));

    // each window equals the cove of its own sub-raster
    const auto box = w.extent(k);
    std::vector<int> cells;
    for (std::size_t r = box.row_min; r <= box.row_max; ++r)
      for (std::size_t c = box.col_min; c <= box.col_max; ++c) cells.push_back(g.at(r, c));
    check_values(row.values, oracle::cove(oracle::make_grid(box.height(), box.width(), cells), {1, 2, 3, 4}));
  }
  CHECK(weighted_na / static_cast<double>(g.size()) ==
        doctest::Approx(static_cast<double>(g.missing_count()) / static_cast<double>(g.size())));
}

TEST_CASE("block counts miss exactly the straddling pairs") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_grid(rng, 9, 8, 3, 0.1);
    const std::size_t k = 3;
    // raw unordered counts: whole raster, per block, and across block borders
    std::int64_t whole = 0, inside = 0, straddle = 0;
    for (std::size_t r = 0; r < g.nrows(); ++r)
      for (std::size_t c = 0; c < g.ncols(); ++c) {
        if (g.at(r, c) == NA) continue;
        const auto visit = [&](std::size_t r2, std::size_t c2) {
          if (g.at(r2, c2) == NA) return;
          ++whole;
          (r / k == r2 / k && c / k == c2 / k ? inside : straddle) += 1;
        };
        if (c + 1 < g.ncols()) visit(r, c + 1);
        if (r + 1 < g.nrows()) visit(r + 1, c);
      }
    CHECK(inside + straddle == whole);
    // the library's block vectors, rescaled by each block's own pair count,
    // sum to the in-block pairs
    const std::vector<CategoricalGrid> layer{g};
    const auto table = windowed_signatures(layer, SignatureKind::cove, WindowSpec::blocks(k));
    const WindowGrid w(g.geometry(), WindowSpec::blocks(k));
    std::int64_t from_blocks = 0;
    for (std::size_t b = 0; b < w.window_count(); ++b) {
      const auto box = w.extent(b);
      std::vector<int> cells;
      for (std::size_t r = box.row_min; r <= box.row_max; ++r)
        for (std::size_t c = box.col_min; c <= box.col_max; ++c) cells.push_back(g.at(r, c));
      const auto sub = oracle::make_grid(box.height(), box.width(), cells);
      std::int64_t pairs = 0;
      for (const auto& [key, n] : oracle::ordered_adjacencies(sub)) pairs += n;
      pairs /= 2;
      from_blocks += pairs;
      if (pairs == 0) CHECK(table.rows[b].is_zero());
    }
    CHECK(from_blocks == inside);
  }
}

TEST_CASE("signature csv round trip") {
  const auto g = oracle::make_grid(2, 2, {1, 1, 2, NA});
  const std::vector<CategoricalGrid> layer{g};
  const auto table = windowed_signatures(layer, SignatureKind::cove, WindowSpec::whole());
  std::ostringstream out;
  write_signature_csv(out, table);
  CHECK(out.str().rfind("# kind=cove classes=1,2\nid,na_prop,v1,v2,v3\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_signature_csv(in);
  CHECK(back.kind == SignatureKind::cove);
  CHECK(back.class_labels == table.class_labels);
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].values == table.rows[0].values);
  CHECK(back.rows[0].na_prop == table.rows[0].na_prop);
}

TEST_CASE("layer validation") {
  const auto g = oracle::make_grid(2, 2, {1, 1, 2, 2});
  const std::vector<CategoricalGrid> one{g};
  const std::vector<CategoricalGrid> two{g, g};
  CHECK_THROWS_AS(windowed_signatures(one, SignatureKind::incove, WindowSpec::whole()), UsageError);
  CHECK_THROWS_AS(windowed_signatures(two, SignatureKind::cove, WindowSpec::whole()), UsageError);
  CHECK_THROWS_AS(windowed_signatures(one, SignatureKind::wecove, WindowSpec::whole()), UsageError);
  CHECK_THROWS_AS(WindowSpec::blocks(0), UsageError);
}
