#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "landpat/analysis.hpp"
#include "landpat/cli.hpp"
#include "landpat/errors.hpp"
#include "landpat/grid_io.hpp"
#include "landpat/landscape_check.hpp"
#include "landpat/metrics.hpp"
#include "landpat/signatures.hpp"

namespace py = pybind11;
using namespace landpat;

namespace {

py::object optional_int(const std::optional<int>& v) { return v ? py::object(py::int_(*v)) : py::none(); }

py::list records_to_list(const std::vector<MetricRecord>& records) {
  py::list out;
  for (const auto& r : records) {
    py::dict row;
    row["layer"] = r.layer;
    row["level"] = to_string(r.level);
    row["class"] = optional_int(r.class_code);
    row["id"] = optional_int(r.patch_id);
    row["metric"] = r.metric;
    row["value"] = r.value;
    out.append(row);
  }
  return out;
}

WindowSpec window_spec(std::size_t window) { return window == 0 ? WindowSpec::whole() : WindowSpec::blocks(window); }

}  // namespace

PYBIND11_MODULE(_landpat, m) {
  m.doc() = "Landscape metrics and spatial pattern signatures for categorical rasters";

  const auto error = py::register_exception<Error>(m, "LandpatError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", error.ptr());

  py::class_<CategoricalGrid>(m, "Grid")
      .def(py::init([](std::size_t nrows, std::size_t ncols, std::vector<int> cells, double cellsize, double xll,
                       double yll, int nodata) {
             return CategoricalGrid(GridGeometry{nrows, ncols, xll, yll, cellsize}, std::move(cells), nodata);
           }),
           py::arg("nrows"), py::arg("ncols"), py::arg("cells"), py::arg("cellsize") = 1.0, py::arg("xll") = 0.0,
           py::arg("yll") = 0.0, py::arg("nodata") = CategoricalGrid::kDefaultNodata)
      .def_property_readonly("nrows", &CategoricalGrid::nrows)
      .def_property_readonly("ncols", &CategoricalGrid::ncols)
      .def_property_readonly("cellsize", &CategoricalGrid::cellsize)
      .def_property_readonly("nodata", &CategoricalGrid::nodata_code)
      .def_property_readonly("cells",
                             [](const CategoricalGrid& g) { return std::vector<int>(g.cells().begin(), g.cells().end()); })
      .def("classes", &CategoricalGrid::classes)
      .def("__len__", &CategoricalGrid::size)
      .def("__repr__", [](const CategoricalGrid& g) {
        std::ostringstream s;
        s << "<landpat.Grid " << g.nrows() << "x" << g.ncols() << " cellsize=" << g.cellsize() << ">";
        return s.str();
      });

  m.def("load_grid", [](const std::string& path) { return load_ascii_grid(path); }, py::arg("path"),
        "Read an ESRI ASCII grid and its .meta sidecar.");
  m.def("write_grid", [](const CategoricalGrid& g, const std::string& path) { write_ascii_grid(g, path); },
        py::arg("grid"), py::arg("path"));

  m.def(
      "check_landscape",
      [](const CategoricalGrid& g, std::size_t max_classes) {
        const auto c = check_landscape(g, max_classes);
        py::dict out;
        out["crs_kind"] = to_string(c.crs_kind);
        out["units"] = c.units;
        out["class_value_kind"] = to_string(c.class_value_kind);
        out["n_classes"] = c.n_classes;
        out["ok"] = c.ok;
        out["warnings"] = c.warnings;
        return out;
      },
      py::arg("grid"), py::arg("max_classes") = kDefaultMaxClasses);

  m.def(
      "calculate_metrics",
      [](const CategoricalGrid& g, std::vector<std::string> what, int directions) {
        std::vector<MetricDescriptor> which;
        if (what.empty()) {
          const auto all = metric_registry();
          which.assign(all.begin(), all.end());
        } else {
          which = cli::resolve_metric_names(what);
        }
        return records_to_list(compute_metrics(g, connectivity_from_directions(directions), which));
      },
      py::arg("grid"), py::arg("what") = std::vector<std::string>{}, py::arg("directions") = 8,
      "Metric rows as dicts; `what` holds function names such as \"lsm_l_lpi\".");

  m.def(
      "signatures",
      [](const CategoricalGrid& g, const std::string& kind, std::size_t window) {
        const std::vector<CategoricalGrid> layer{g};
        const auto table = windowed_signatures(layer, parse_signature_kind(kind), window_spec(window));
        py::list rows;
        for (const auto& s : table.rows) {
          py::dict row;
          row["id"] = s.id;
          row["na_prop"] = s.na_prop;
          row["values"] = s.values;
          rows.append(row);
        }
        return py::make_tuple(table.class_labels, rows);
      },
      py::arg("grid"), py::arg("kind") = "cove", py::arg("window") = 0,
      "Class labels and one signature per window; window 0 means the whole raster.");

  m.def(
      "distance",
      [](const std::vector<double>& p, const std::vector<double>& q, const std::string& kind) {
        return distance(p, q, parse_distance_kind(kind));
      },
      py::arg("p"), py::arg("q"), py::arg("kind") = "jensen-shannon");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a landpat command in process; returns (exit code, stdout, stderr).");
}
