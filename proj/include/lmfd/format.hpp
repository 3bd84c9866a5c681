#pragma once

#include <string>

namespace lmfd {

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// Exactly three digits after the decimal point.
std::string format_fixed3(double value);

}  // namespace lmfd
