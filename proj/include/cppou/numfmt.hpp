#pragma once

#include <string>
#include <string_view>

namespace cppou {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Strict parse of a full string as a double; throws std::invalid_argument.
double parse_double(std::string_view s);

}  // namespace cppou
