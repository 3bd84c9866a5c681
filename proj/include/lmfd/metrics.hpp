#pragma once

#include <span>
#include <vector>

namespace lmfd {

/// Ascending fractional ranks, 1-based; tied values share the mean of the
/// positions they occupy. O(n log n). Throws Error(NonFiniteInput).
std::vector<double> rank(std::span<const double> x);

/// Pearson correlation of rank(x) and rank(t). Returns exactly 0 when either
/// rank vector has zero variance.
double spearman_rho(std::span<const double> x, std::span<const double> t);

/// |spearman_rho(x, [0, 1, ..., n-1])|.
double abs_monotonicity(std::span<const double> x);

}  // namespace lmfd
