#include "lmfd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lmfd/error.hpp"

namespace lmfd {
namespace {

void require_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorCode::NonFiniteInput,
                  "non-finite value at position " + std::to_string(i));
    }
  }
}

// Pearson correlation of two rank vectors. Sums run in index order so the
// result is bitwise reproducible.
double rank_correlation(std::span<const double> rx, std::span<const double> rt) {
  const auto n = static_cast<double>(rx.size());
  const double mean_x = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double mean_t = std::accumulate(rt.begin(), rt.end(), 0.0) / n;
  double cov = 0.0;
  double var_x = 0.0;
  double var_t = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean_x;
    const double dt = rt[i] - mean_t;
    cov += dx * dt;
    var_x += dx * dx;
    var_t += dt * dt;
  }
  if (var_x == 0.0 || var_t == 0.0) {
    return 0.0;
  }
  return std::clamp(cov / std::sqrt(var_x * var_t), -1.0, 1.0);
}

}  // namespace

std::vector<double> rank(std::span<const double> x) {
  require_finite(x);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<double> ranks(x.size());
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && x[order[end]] == x[order[begin]]) {
      ++end;
    }
    // positions begin..end-1 (0-based) share rank mean(begin+1..end)
    const double shared = 0.5 * static_cast<double>(begin + 1 + end);
    for (std::size_t k = begin; k < end; ++k) {
      ranks[order[k]] = shared;
    }
    begin = end;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> t) {
  if (x.size() != t.size()) {
    throw Error(ErrorCode::LengthMismatch, "spearman_rho: series lengths " +
                                               std::to_string(x.size()) + " and " +
                                               std::to_string(t.size()) + " differ");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "spearman_rho: need at least 2 points");
  }
  const auto rx = rank(x);
  const auto rt = rank(t);
  return rank_correlation(rx, rt);
}

double abs_monotonicity(std::span<const double> x) {
  if (x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "abs_monotonicity: need at least 2 points");
  }
  const auto rx = rank(x);
  // The index is strictly increasing, so its ranks are 1..n without sorting.
  std::vector<double> rt(x.size());
  std::iota(rt.begin(), rt.end(), 1.0);
  return std::abs(rank_correlation(rx, rt));
}

}  // namespace lmfd
