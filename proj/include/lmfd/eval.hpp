#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmfd/grammar.hpp"

namespace lmfd {

/// Normalized causal EWMA kernel over a window of `span` samples.
///
/// tau = (span - 1) / 2 and lambda = 1 / tau, so span = 2 tau + 1. The raw
/// weights are exp(-lambda m) for m = 0..span-1; span = 1 is the identity
/// kernel.
class EwmaKernel {
 public:
  explicit EwmaKernel(std::int64_t span);

  std::int64_t span() const noexcept { return span_; }
  double tau() const noexcept { return 0.5 * static_cast<double>(span_ - 1); }
  /// Normalized weights, non-increasing, summing to 1.
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::int64_t span_;
  std::vector<double> weights_;
};

/// Causal EWMA with mean imputation of the undefined prefix.
///
/// y[t] = sum_m w(m) x[t-m] over the full window for t >= span. The first
/// `span` outputs have an incomplete window and are replaced by the mean of
/// y[span..n-1], which caps the rank correlation reachable with very wide
/// kernels. Throws Error(SpanOutOfRange) unless 1 <= span <= n-1.
std::vector<double> ewma(std::span<const double> x, std::int64_t span);

struct Binding {
  std::span<const double> s1;
  std::span<const double> s2;
  Assignment constants;
};

struct Evaluation {
  std::vector<double> series;
  /// False iff some element is non-finite (zero division, exp overflow).
  bool valid = true;
};

/// Evaluates `structure` elementwise over the bound series.
/// Throws Error(IncompleteBinding), Error(LengthMismatch),
/// Error(ValueOutOfBounds) or Error(SpanOutOfRange).
Evaluation evaluate(const EquationStructure& structure, const Binding& binding);

}  // namespace lmfd
