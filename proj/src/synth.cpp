#include "lmfd/synth.hpp"

#include <cmath>
#include <numbers>

#include "lmfd/error.hpp"
#include "lmfd/fit.hpp"

namespace lmfd {
namespace {

// Standard normal draw number `k` of stream `key`.
double gaussian(std::uint64_t key, std::uint64_t k) {
  const auto unit = [&](std::uint64_t salt) {
    const std::uint64_t bits = mix64(key ^ mix64(2 * k + salt));
    // (0, 1]: avoids log(0)
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  };
  const double u1 = unit(0);
  const double u2 = unit(1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TimeSeriesTable generate_artificial(const SynthConfig& config) {
  if (config.n < TimeSeriesTable::kMinRows) {
    throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs n >= 3");
  }
  if (!(config.noise_sigma >= 0.0) || !std::isfinite(config.noise_sigma)) {
    throw Error(ErrorCode::InvalidArgument, "noise sigma must be finite and >= 0");
  }
  const std::uint64_t key1 = mix64(config.seed ^ 0x5331ULL);
  const std::uint64_t key2 = mix64(config.seed ^ 0x5332ULL);

  Series s1(config.n);
  Series s2(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double x = static_cast<double>(i);
    const double wave = std::sin(x / 100.0);
    s1[i] = std::pow(1.0 + wave, 4.0);
    s2[i] = wave + x / 300.0;
    if (config.noise_sigma > 0.0) {
      s1[i] += config.noise_sigma * gaussian(key1, i);
      s2[i] += config.noise_sigma * gaussian(key2, i);
    }
  }
  return TimeSeriesTable(TimeSeriesTable::positional_index(config.n), {"s1", "s2"},
                         {std::move(s1), std::move(s2)}, "synthetic");
}

}  // namespace lmfd
