#pragma once

#include <cstdint>

#include "lmfd/timeseries.hpp"

namespace lmfd {

struct SynthConfig {
  std::size_t n = 1000;
  std::uint64_t seed = 42;
  /// Standard deviation of the additive Gaussian noise.
  double noise_sigma = 0.01;
};

/// Two mostly periodic series over x = 0..n-1, one with a slight trend:
///   s1 = (1 + sin(x/100))^4 + e1
///   s2 = sin(x/100) + x/300 + e2
/// Noise comes from Box-Muller over a counter-based SplitMix64 stream, so a
/// seed reproduces the same table on every platform.
TimeSeriesTable generate_artificial(const SynthConfig& config);

}  // namespace lmfd
