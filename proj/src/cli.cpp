#include "landpat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "landpat/analysis.hpp"
#include "landpat/errors.hpp"
#include "landpat/grid_io.hpp"
#include "landpat/landscape_check.hpp"
#include "landpat/parallel.hpp"
#include "landpat/patches.hpp"
#include "landpat/render.hpp"
#include "landpat/sampling.hpp"
#include "landpat/signatures.hpp"

namespace landpat::cli {

namespace fs = std::filesystem;

std::vector<MetricDescriptor> resolve_metric_names(const std::vector<std::string>& names) {
  std::vector<MetricDescriptor> out;
  for (const auto& name : names) {
    const auto d = find_metric(name);
    if (!d) {
      std::string valid;
      for (const auto& r : metric_registry()) valid += (valid.empty() ? "" : ", ") + r.function_name;
      throw UsageError("unknown metric '" + name + "'; valid names: " + valid);
    }
    if (std::find(out.begin(), out.end(), *d) == out.end()) out.push_back(*d);
  }
  return out;
}

namespace {

struct Options {
  unsigned threads = 0;
  int directions = 8;
  std::vector<std::string> rasters;
  std::vector<std::string> what;
  std::string level, type;
  std::string out, out_dir, out_prefix, tree;
  std::string points;
  std::string shape = "circle";
  double size = 0.0;
  double min_inside = 0.0;
  std::string mask;
  std::string signature_type = "cove";
  std::string dist = "jensen-shannon";
  std::string window = "whole";
  std::string weights;
  std::string linkage = "complete";
  std::size_t k = 0;
  int id = 0;
  std::string palette;
  std::size_t max_classes = kDefaultMaxClasses;
};

std::vector<MetricDescriptor> require_level(std::vector<MetricDescriptor> metrics, std::initializer_list<Level> allowed,
                                            const std::string& command) {
  for (const auto& m : metrics)
    if (std::find(allowed.begin(), allowed.end(), m.level) == allowed.end())
      throw UsageError(command + " does not accept " + to_string(m.level) + "-level metric " + m.function_name);
  if (metrics.empty()) throw UsageError(command + " needs at least one metric");
  return metrics;
}

std::vector<std::string> short_names(const std::vector<MetricDescriptor>& metrics) {
  std::vector<std::string> out;
  for (const auto& m : metrics) out.push_back(m.metric);
  return out;
}

WindowSpec parse_window(const std::string& text) {
  if (text == "whole") return WindowSpec::whole();
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
    return WindowSpec::blocks(std::stoul(text));
  return WindowSpec::zoned(load_ascii_grid(text));
}

WindowMask parse_mask(const std::string& text) {
  std::string t = text;
  for (const std::string times : {"\xC3\x97", "X"}) {
    for (auto p = t.find(times); p != std::string::npos; p = t.find(times)) t.replace(p, times.size(), "x");
  }
  const auto x = t.find('x');
  const auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (x == std::string::npos && digits(t)) return WindowMask::square(std::stoul(t));
  if (x != std::string::npos && digits(t.substr(0, x)) && digits(t.substr(x + 1))) {
    const std::size_t r = std::stoul(t.substr(0, x)), c = std::stoul(t.substr(x + 1));
    return {r, c, std::vector<std::uint8_t>(r * c, 1)};
  }
  return WindowMask::from_grid(load_ascii_grid(text));
}

template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ostringstream buffer;
  writer(buffer);
  write_text_file(path, buffer.str());
}

void flush_warnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

fs::path with_suffix(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  fs::path stem = p.parent_path() / p.stem();
  return stem.string() + suffix + (p.has_extension() ? p.extension().string() : std::string(".asc"));
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path path = o.rasters.at(0);
  const NumericGrid grid = load_numeric_ascii_grid(path);
  fs::path meta = path;
  meta += ".meta";
  const Metadata m = fs::exists(meta) ? load_meta(meta) : Metadata{};
  const LandscapeCheck check = check_landscape(grid, m, o.max_classes);
  out << format_check_table(check);
  flush_warnings(check.warnings, err);
  return 0;
}

int cmd_metrics(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<MetricDescriptor> metrics;
  if (!o.what.empty()) {
    if (!o.level.empty() || !o.type.empty()) throw UsageError("--what cannot be combined with --level/--type");
    metrics = resolve_metric_names(o.what);
  } else {
    std::optional<Level> level;
    std::optional<MetricType> type;
    if (!o.level.empty()) level = parse_level(o.level);
    if (!o.type.empty()) type = parse_metric_type(o.type);
    for (const auto& d : metric_registry())
      if ((!level || d.level == *level) && (!type || d.type == *type)) metrics.push_back(d);
    if (metrics.empty()) throw UsageError("no metric matches the given --level/--type");
  }
  const auto grid = load_ascii_grid(o.rasters.at(0));
  const auto records = compute_metrics(grid, connectivity_from_directions(o.directions), metrics);
  emit(o.out, out, [&](std::ostream& s) { write_records_csv(s, records); });
  return 0;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  const auto metrics = require_level(resolve_metric_names(o.what), {Level::patch}, "extract");
  const auto conn = connectivity_from_directions(o.directions);
  const auto grid = load_ascii_grid(o.rasters.at(0));
  const auto points = load_points_csv(o.points);
  Warnings warnings;
  const auto rows = extract_at_points(grid, points, short_names(metrics), conn, &warnings);
  flush_warnings(warnings, err);
  emit(o.out, out, [&](std::ostream& s) { write_extract_csv(s, rows); });
  return 0;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const auto metrics = require_level(resolve_metric_names(o.what), {Level::class_level, Level::landscape}, "sample");
  const auto conn = connectivity_from_directions(o.directions);
  const auto shape = parse_buffer_shape(o.shape);
  if (!(o.size > 0.0)) throw UsageError("--size must be positive");
  const auto grid = load_ascii_grid(o.rasters.at(0));
  SamplePlan plan{load_points_csv(o.points), shape, o.size};
  Warnings warnings;
  auto rows = sample_buffers(grid, plan, metrics, conn, &warnings);
  std::erase_if(rows, [&](const SampleRecord& r) { return r.percentage_inside < o.min_inside; });
  flush_warnings(warnings, err);
  emit(o.out, out, [&](std::ostream& s) { write_sample_csv(s, rows); });
  return 0;
}

int cmd_spatialize(const Options& o, std::ostream&, std::ostream&) {
  const auto metrics = require_level(resolve_metric_names(o.what), {Level::patch}, "spatialize");
  const auto conn = connectivity_from_directions(o.directions);
  const auto grid = load_ascii_grid(o.rasters.at(0));
  const auto nested = spatialize_patch_metrics(std::span(&grid, 1), conn, short_names(metrics));
  for (const auto& [layer, rasters] : nested) {
    const fs::path dir = fs::path(o.out_dir) / layer;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, raster] : rasters) write_ascii_grid(raster, dir / (name + ".asc"));
  }
  return 0;
}

int cmd_window(const Options& o, std::ostream&, std::ostream&) {
  const auto metrics = require_level(resolve_metric_names(o.what), {Level::landscape}, "window");
  const auto conn = connectivity_from_directions(o.directions);
  const WindowMask mask = parse_mask(o.mask);
  const auto grid = load_ascii_grid(o.rasters.at(0));
  for (const auto& m : metrics) {
    const NumericGrid result = moving_window(grid, mask, m.metric, conn);
    const fs::path path = metrics.size() == 1 ? fs::path(o.out) : with_suffix(o.out, "_" + m.function_name);
    write_ascii_grid(result, path);
  }
  return 0;
}

int cmd_signature(const Options& o, std::ostream& out, std::ostream&) {
  const auto kind = parse_signature_kind(o.signature_type);
  std::vector<CategoricalGrid> layers;
  for (const auto& r : o.rasters) layers.push_back(load_ascii_grid(r));
  const WindowSpec spec = parse_window(o.window);
  std::optional<NumericGrid> weights;
  if (!o.weights.empty()) weights = load_numeric_ascii_grid(o.weights);
  const auto table = windowed_signatures(layers, kind, spec, weights ? &*weights : nullptr);
  emit(o.out, out, [&](std::ostream& s) { write_signature_csv(s, table); });
  return 0;
}

int cmd_compare(const Options& o, std::ostream&, std::ostream&) {
  const auto kind = parse_signature_kind(o.signature_type);
  const auto dist = parse_distance_kind(o.dist);
  const auto x = load_ascii_grid(o.rasters.at(0));
  const auto y = load_ascii_grid(o.rasters.at(1));
  const WindowSpec spec = parse_window(o.window);
  std::optional<NumericGrid> weights;
  if (!o.weights.empty()) weights = load_numeric_ascii_grid(o.weights);
  const auto result = compare_rasters(x, y, kind, dist, spec, weights ? &*weights : nullptr);
  std::ostringstream csv;
  write_comparison_csv(csv, result.records);
  write_text_file(o.out_prefix + ".csv", csv.str());
  write_ascii_grid(result.id, o.out_prefix + "_id.asc");
  write_ascii_grid(result.na_prop_x, o.out_prefix + "_na_prop_x.asc");
  write_ascii_grid(result.na_prop_y, o.out_prefix + "_na_prop_y.asc");
  write_ascii_grid(result.dist, o.out_prefix + "_dist.asc");
  return 0;
}

int cmd_search(const Options& o, std::ostream&, std::ostream&) {
  const auto kind = parse_signature_kind(o.signature_type);
  const auto dist = parse_distance_kind(o.dist);
  const auto query = load_ascii_grid(o.rasters.at(0));
  const auto target = load_ascii_grid(o.rasters.at(1));
  const WindowSpec spec = parse_window(o.window);
  const auto result = search_pattern(query, target, kind, dist, spec);
  std::ostringstream csv;
  write_search_csv(csv, result.records);
  write_text_file(o.out_prefix + ".csv", csv.str());
  write_ascii_grid(result.id, o.out_prefix + "_id.asc");
  write_ascii_grid(result.na_prop, o.out_prefix + "_na_prop.asc");
  write_ascii_grid(result.dist, o.out_prefix + "_dist.asc");
  return 0;
}

int cmd_extract_window(const Options& o, std::ostream&, std::ostream&) {
  const auto grid = load_ascii_grid(o.rasters.at(0));
  const auto sub = extract_window(grid, parse_window(o.window), o.id);
  write_ascii_grid(sub, o.out);
  return 0;
}

int cmd_cluster(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dist = parse_distance_kind(o.dist);
  const auto linkage = parse_linkage(o.linkage);
  std::istringstream in(read_text_file(o.rasters.at(0)));
  SignatureTable table = read_signature_csv(in);
  const auto before = table.rows.size();
  std::erase_if(table.rows, [](const Signature& s) { return s.is_zero(); });
  if (table.rows.size() != before)
    err << "warning: skipped " << before - table.rows.size() << " all-zero signatures\n";
  const auto result = hierarchical_cluster(table, dist, linkage, o.k);
  emit(o.out, out, [&](std::ostream& s) { write_cluster_csv(s, result.assignments); });
  if (!o.tree.empty()) {
    std::ostringstream tree;
    write_merge_csv(tree, result.merges);
    write_text_file(o.tree, tree.str());
  }
  return 0;
}

int cmd_render(const Options& o, std::ostream&, std::ostream&) {
  const Palette palette = o.palette.empty() ? default_palette() : load_palette_csv(o.palette);
  const auto grid = load_ascii_grid(o.rasters.at(0));
  render_ppm(grid, palette, o.out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Landscape metrics and pattern-based analysis of categorical rasters", "landpat"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");

  using Handler = int (*)(const Options&, std::ostream&, std::ostream&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, h);
    return sub;
  };
  auto directions = [&](CLI::App* sub) {
    sub->add_option("--directions", o.directions, "Patch connectivity: 4 (rook) or 8 (queen)")
        ->check(CLI::IsMember({4, 8}));
  };
  auto what = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--what", o.what, "Comma-separated metric names, e.g. lsm_p_area,lsm_l_lpi")
                    ->delimiter(',');
    if (required) opt->required();
  };

  {
    auto* s = add("check", "Check CRS, units and class values of a raster", cmd_check);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--max-classes", o.max_classes, "Class count above which a warning is raised");
  }
  {
    auto* s = add("metrics", "Compute landscape metrics into a tidy CSV", cmd_metrics);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    what(s, false);
    s->add_option("--level", o.level, "patch, class or landscape");
    s->add_option("--type", o.type, "Metric type, e.g. \"area and edge\"");
    directions(s);
    s->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  }
  {
    auto* s = add("extract", "Patch metrics of the patches under sample points", cmd_extract);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--points", o.points, "Points CSV (id,x,y)")->required();
    what(s, true);
    directions(s);
    s->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  }
  {
    auto* s = add("sample", "Class/landscape metrics within buffers around points", cmd_sample);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--points", o.points, "Points CSV (id,x,y)")->required();
    s->add_option("--shape", o.shape, "circle or square")->check(CLI::IsMember({"circle", "square"}));
    s->add_option("--size", o.size, "Circle radius or square half-side in meters")->required();
    what(s, true);
    s->add_option("--min-inside", o.min_inside, "Drop plots whose percentage_inside is below this");
    directions(s);
    s->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  }
  {
    auto* s = add("spatialize", "Rasterize patch metrics", cmd_spatialize);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    what(s, true);
    directions(s);
    s->add_option("--out-dir", o.out_dir, "Output directory")->required();
  }
  {
    auto* s = add("window", "Moving-window landscape metrics", cmd_window);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--mask", o.mask, "KxK all-ones window or a 0/1 mask grid")->required();
    what(s, true);
    directions(s);
    s->add_option("--out", o.out, "Output ASCII grid")->required();
  }
  {
    auto* s = add("signature", "Spatial signatures per window", cmd_signature);
    s->add_option("rasters", o.rasters, "Input ASCII grid(s); two or more for incove")->required();
    s->add_option("--type", o.signature_type, "composition, cove, wecove or incove");
    s->add_option("--window", o.window, "whole, block size in cells, or a zone grid");
    s->add_option("--weights", o.weights, "Weight grid for wecove");
    s->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  }
  {
    auto* s = add("compare", "Signature dissimilarity between two rasters", cmd_compare);
    s->add_option("rasters", o.rasters, "x and y ASCII grids")->required()->expected(2);
    s->add_option("--type", o.signature_type, "composition, cove or wecove");
    s->add_option("--dist", o.dist, "jensen-shannon, euclidean or manhattan");
    s->add_option("--window", o.window, "whole, block size in cells, or a zone grid");
    s->add_option("--weights", o.weights, "Weight grid for wecove");
    s->add_option("--out-prefix", o.out_prefix, "Prefix for the CSV and rasters")->required();
  }
  {
    auto* s = add("search", "Find windows resembling a query landscape", cmd_search);
    s->add_option("rasters", o.rasters, "query and target ASCII grids")->required()->expected(2);
    s->add_option("--type", o.signature_type, "composition or cove");
    s->add_option("--dist", o.dist, "jensen-shannon, euclidean or manhattan");
    s->add_option("--window", o.window, "Block size in cells or a zone grid")->required();
    s->add_option("--out-prefix", o.out_prefix, "Prefix for the CSV and rasters")->required();
  }
  {
    auto* s = add("extract-window", "Cut one window out of a raster", cmd_extract_window);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--window", o.window, "whole, block size in cells, or a zone grid")->required();
    s->add_option("--id", o.id, "Window id")->required();
    s->add_option("--out", o.out, "Output ASCII grid")->required();
  }
  {
    auto* s = add("cluster", "Hierarchical clustering of a signature CSV", cmd_cluster);
    s->add_option("signatures", o.rasters, "Signature CSV")->required()->expected(1);
    s->add_option("--dist", o.dist, "jensen-shannon, euclidean or manhattan");
    s->add_option("--linkage", o.linkage, "complete, average or single");
    s->add_option("--k", o.k, "Number of clusters")->required();
    s->add_option("--out", o.out, "Output CSV (stdout when omitted)");
    s->add_option("--tree", o.tree, "Merge tree CSV");
  }
  {
    auto* s = add("render", "Render a raster to a binary PPM image", cmd_render);
    s->add_option("raster", o.rasters, "Input ASCII grid")->required()->expected(1);
    s->add_option("--palette", o.palette, "CSV class,#RRGGBB (default land-cover colors)");
    s->add_option("--out", o.out, "Output PPM")->required();
  }

  std::vector<std::string> argv_storage{"landpat"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const unsigned previous_threads = max_threads();
  set_max_threads(o.threads);
  int status = 1;
  try {
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) status = handler(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    status = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    status = 1;
  }
  set_max_threads(previous_threads);
  return status;
}

}  // namespace landpat::cli
