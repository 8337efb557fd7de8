#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace landpat {

inline constexpr std::string_view kMissingToken = "NA";

/// Shortest decimal that round-trips to the same double; `NA` for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return std::string(kMissingToken);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline std::string format_number(std::optional<double> v) {
  return v ? format_number(*v) : std::string(kMissingToken);
}

template <class Int>
std::string format_optional(const std::optional<Int>& v) {
  return v ? std::to_string(*v) : std::string(kMissingToken);
}

}  // namespace landpat
