#include "landpat/landscape_check.hpp"

#include <cstdio>
#include <set>

namespace landpat {

std::string to_string(CrsKind kind) {
  switch (kind) {
    case CrsKind::projected: return "projected";
    case CrsKind::geographic: return "geographic";
    case CrsKind::unknown: break;
  }
  return "unknown";
}

std::string to_string(ClassValueKind kind) {
  return kind == ClassValueKind::integer ? "integer" : "non-integer";
}

CrsKind parse_crs_kind(std::string_view text) {
  if (text == "projected") return CrsKind::projected;
  if (text == "geographic") return CrsKind::geographic;
  return CrsKind::unknown;
}

namespace {

LandscapeCheck evaluate(const Metadata& meta, ClassValueKind value_kind, std::size_t n_classes,
                        std::size_t max_classes) {
  LandscapeCheck check;
  if (auto it = meta.find("crs_kind"); it != meta.end()) check.crs_kind = parse_crs_kind(it->second);
  if (auto it = meta.find("units"); it != meta.end() && !it->second.empty()) check.units = it->second;
  check.class_value_kind = value_kind;
  check.n_classes = n_classes;

  if (check.crs_kind == CrsKind::geographic)
    check.warnings.push_back("geographic CRS: distance- and area-based metrics are not meaningful in degrees");
  else if (check.crs_kind != CrsKind::projected)
    check.warnings.push_back("CRS is unknown: metrics assume projected coordinates");
  if (check.units != "m")
    check.warnings.push_back("map units are '" + check.units + "', metrics assume meters");
  if (value_kind != ClassValueKind::integer)
    check.warnings.push_back("raster holds non-integer values, expected class codes");
  if (n_classes > max_classes)
    check.warnings.push_back("raster has " + std::to_string(n_classes) + " classes, more than " +
                             std::to_string(max_classes) + "; is it really categorical?");
  check.ok = check.warnings.empty();
  return check;
}

}  // namespace

LandscapeCheck check_landscape(const CategoricalGrid& grid, std::size_t max_classes) {
  return evaluate(grid.meta(), ClassValueKind::integer, grid.classes().size(), max_classes);
}

LandscapeCheck check_landscape(const NumericGrid& grid, const Metadata& meta, std::size_t max_classes) {
  std::set<double> distinct;
  bool integral = true;
  for (double v : grid.values()) {
    if (std::isnan(v)) continue;
    if (v != std::floor(v)) integral = false;
    distinct.insert(v);
  }
  return evaluate(meta, integral ? ClassValueKind::integer : ClassValueKind::non_integer, distinct.size(),
                  max_classes);
}

std::string format_check_table(const LandscapeCheck& check) {
  char line[256];
  std::string out = "layer        crs units       class n_classes OK\n";
  std::snprintf(line, sizeof(line), "%5d %10s %5s %11s %9zu %2s\n", 1, to_string(check.crs_kind).c_str(),
                check.units.c_str(), to_string(check.class_value_kind).c_str(), check.n_classes,
                check.ok ? "v" : "x");
  return out + line;
}

}  // namespace landpat
