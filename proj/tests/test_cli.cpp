#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "landpat/cli.hpp"
#include "landpat/errors.hpp"
#include "landpat/grid_io.hpp"
#include "oracles.hpp"

using namespace landpat;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Fixture {
  fs::path dir;
  std::string raster, other, small, points;

  Fixture() {
    dir = fs::temp_directory_path() / "landpat_test_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937_64 rng(61);
    const Metadata meta{{"crs_kind", "projected"}, {"units", "m"}};
    raster = (dir / "r.asc").string();
    other = (dir / "o.asc").string();
    small = (dir / "s.asc").string();
    write_ascii_grid(oracle::random_grid(rng, 12, 10, 4, 0.05).with_meta(meta), raster);
    write_ascii_grid(oracle::random_grid(rng, 12, 10, 4, 0.05), other);
    write_ascii_grid(oracle::random_grid(rng, 5, 5, 2, 0.0), small);
    points = (dir / "p.csv").string();
    write_text_file(points, "id,x,y\n1,150,150\n2,550,950\n3,-100,0\n");
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("metric name resolution") {
  const auto d = cli::resolve_metric_names({"lsm_c_np", "lsm_l_ta", "lsm_c_np"});
  REQUIRE(d.size() == 2);
  CHECK(d[0].level == Level::class_level);
  CHECK(d[0].metric == "np");
  CHECK(d[1].level == Level::landscape);
  CHECK(d[1].metric == "ta");
  try {
    cli::resolve_metric_names({"lsm_x_foo"});
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("lsm_p_area") != std::string::npos);
  }
}

TEST_CASE("cli commands") {
  const Fixture f;

  SUBCASE("check") {
    const auto r = run_cli({"check", f.raster});
    CHECK(r.code == 0);
    CHECK(r.out.find("projected") != std::string::npos);
    const auto unknown = run_cli({"check", f.other});
    CHECK(unknown.code == 0);
    CHECK(unknown.err.find("warning") != std::string::npos);
  }
  SUBCASE("metrics") {
    const auto out = f.path("m.csv");
    const auto r = run_cli({"metrics", f.raster, "--what", "lsm_p_area,lsm_l_lpi", "--directions", "8", "--out", out});
    CHECK(r.code == 0);
    const auto text = read_text_file(out);
    CHECK(text.rfind("layer,level,class,id,metric,value\n", 0) == 0);
    CHECK(text.find("landscape,NA,NA,lpi,") != std::string::npos);
    const auto by_level = run_cli({"metrics", f.raster, "--level", "class", "--type", "aggregation"});
    CHECK(by_level.code == 0);
    CHECK(by_level.out.find(",np,") != std::string::npos);
    CHECK(by_level.out.find(",pland,") == std::string::npos);
    CHECK(run_cli({"metrics", f.raster, "--what", "lsm_x_foo"}).code == 2);
    CHECK(run_cli({"metrics", f.raster, "--directions", "6"}).code == 2);
  }
  SUBCASE("extract and sample") {
    const auto e = run_cli({"extract", f.raster, "--points", f.points, "--what", "lsm_p_area,lsm_p_perim"});
    CHECK(e.code == 0);
    CHECK(e.out.rfind("layer,level,class,id,metric,value,extract_id\n", 0) == 0);
    CHECK(e.err.find("outside") != std::string::npos);
    const auto s = run_cli({"sample", f.raster, "--points", f.points, "--shape", "square", "--size", "150", "--what",
                            "lsm_l_shdi,lsm_c_pland", "--min-inside", "75"});
    CHECK(s.code == 0);
    CHECK(s.out.rfind("layer,level,class,id,metric,value,plot_id,percentage_inside\n", 0) == 0);
    std::istringstream lines(s.out);
    std::string line;
    std::getline(lines, line);
    std::size_t kept = 0;
    while (std::getline(lines, line)) {
      std::vector<std::string> fields;
      std::istringstream cells(line);
      for (std::string field; std::getline(cells, field, ',');) fields.push_back(field);
      REQUIRE(fields.size() == 8);
      CHECK(fields[6] != "3");  // plot 3 is mostly outside the raster
      ++kept;
    }
    CHECK(kept > 0);
    CHECK(run_cli({"extract", f.raster, "--points", f.points, "--what", "lsm_l_ta"}).code == 2);
  }
  SUBCASE("spatialize and window") {
    const auto dir = f.path("spatial");
    CHECK(run_cli({"spatialize", f.raster, "--what", "lsm_p_area,lsm_p_cai", "--out-dir", dir}).code == 0);
    CHECK(fs::exists(fs::path(dir) / "layer_1" / "lsm_p_area.asc"));
    CHECK(fs::exists(fs::path(dir) / "layer_1" / "lsm_p_cai.asc"));
    const auto w = f.path("w.asc");
    CHECK(run_cli({"window", f.raster, "--mask", "3x3", "--what", "lsm_l_pr", "--out", w}).code == 0);
    CHECK(load_numeric_ascii_grid(w).nrows() == 12);
    CHECK(run_cli({"window", f.raster, "--mask", "3", "--what", "lsm_l_pr,lsm_l_shdi", "--out", w}).code == 0);
    CHECK(fs::exists(f.path("w_lsm_l_shdi.asc")));
    CHECK(run_cli({"window", f.raster, "--mask", "4", "--what", "lsm_l_pr", "--out", w}).code == 2);
  }
  SUBCASE("signature, compare, search, extract-window, cluster") {
    const auto sig = f.path("sig.csv");
    CHECK(run_cli({"signature", f.raster, "--type", "cove", "--window", "4", "--out", sig}).code == 0);
    CHECK(read_text_file(sig).rfind("# kind=cove classes=1,2,3,4\nid,na_prop,v1,", 0) == 0);
    CHECK(run_cli({"signature", f.raster, f.other, "--type", "incove", "--window", "whole"}).code == 0);

    const auto prefix = f.path("cmp");
    CHECK(run_cli({"compare", f.raster, f.other, "--type", "cove", "--dist", "jensen-shannon", "--window", "4",
                   "--out-prefix", prefix})
              .code == 0);
    for (const char* suffix : {".csv", "_id.asc", "_na_prop_x.asc", "_na_prop_y.asc", "_dist.asc"})
      CHECK(fs::exists(prefix + suffix));
    const auto bad = run_cli({"compare", f.raster, f.small, "--type", "cove", "--dist", "jensen-shannon", "--window", "50",
                              "--out-prefix", prefix});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("geometr") != std::string::npos);

    const auto q = f.path("q.asc");
    CHECK(run_cli({"extract-window", f.raster, "--window", "4", "--id", "2", "--out", q}).code == 0);
    CHECK(load_ascii_grid(q).nrows() == 4);
    const auto sp = f.path("search");
    CHECK(run_cli({"search", q, f.raster, "--type", "cove", "--dist", "jensen-shannon", "--window", "4", "--out-prefix", sp})
              .code == 0);
    CHECK(read_text_file(sp + ".csv").find("\n2,") != std::string::npos);
    CHECK(fs::exists(sp + "_dist.asc"));
    CHECK(run_cli({"extract-window", f.raster, "--window", "4", "--id", "99", "--out", q}).code == 2);

    const auto cl = run_cli({"cluster", sig, "--dist", "jensen-shannon", "--k", "3", "--tree", f.path("tree.csv")});
    CHECK(cl.code == 0);
    CHECK(cl.out.rfind("id,cluster\n", 0) == 0);
    CHECK(read_text_file(f.path("tree.csv")).rfind("step,left,right,height\n", 0) == 0);
    CHECK(run_cli({"cluster", sig, "--k", "1000"}).code == 2);
  }
  SUBCASE("render") {
    const auto ppm = f.path("r.ppm");
    CHECK(run_cli({"render", f.raster, "--out", ppm}).code == 0);
    CHECK(read_text_file(ppm).rfind("P6\n10 12\n255\n", 0) == 0);
    write_text_file(f.path("pal.csv"), "class,color\n1,#000000\n");
    const auto r = run_cli({"render", f.raster, "--palette", f.path("pal.csv"), "--out", ppm});
    CHECK(r.code == 1);
  }
  SUBCASE("usage and data errors") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"metrics"}).code == 2);
    CHECK(run_cli({"extract", f.raster, "--what", "lsm_p_area"}).code == 2);
    CHECK(run_cli({"metrics", f.raster, "--bogus"}).code == 2);
    write_text_file(f.path("broken.asc"), "ncols 2\nnrows two\n");
    const auto broken = run_cli({"metrics", f.path("broken.asc")});
    CHECK(broken.code == 1);
    CHECK(broken.err.find("line 2") != std::string::npos);
    CHECK(run_cli({"metrics", f.path("missing.asc")}).code == 1);
    const auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("signature") != std::string::npos);
  }
  SUBCASE("thread count does not change outputs") {
    const auto one = run_cli({"--threads", "1", "metrics", f.raster});
    const auto eight = run_cli({"--threads", "8", "metrics", f.raster});
    CHECK(one.code == 0);
    CHECK(one.out == eight.out);
  }
}
