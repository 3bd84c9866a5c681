#include "lmfd/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace lmfd {

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed3(double value) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.3f", value);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace lmfd
