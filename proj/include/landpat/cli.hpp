#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "landpat/metrics.hpp"

namespace landpat::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 2 on usage errors and 1 on data, parse or I/O errors. Tables go
/// to `out`; diagnostics and warnings go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Maps names such as `lsm_p_area` to registry entries, dropping repeats
/// while keeping first-occurrence order. UsageError lists valid names.
std::vector<MetricDescriptor> resolve_metric_names(const std::vector<std::string>& names);

}  // namespace landpat::cli
