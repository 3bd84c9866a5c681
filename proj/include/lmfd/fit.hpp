#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "lmfd/grammar.hpp"

namespace lmfd {

struct FitBudget {
  int max_evaluations = 200;
  std::uint64_t seed = 42;
  /// Share of the budget reserved for local refinement.
  double refinement_fraction = 0.5;
};

struct FitResult {
  Assignment values;
  /// |rho| of the evaluated series; 0 when !valid.
  double score = 0.0;
  int evaluations_used = 0;
  /// False iff no probed assignment produced a finite series.
  bool valid = false;
};

/// |rho| of the evaluated equation, or nullopt when the series is not finite.
std::optional<double> objective(const EquationStructure& structure, std::span<const double> s1,
                                std::span<const double> s2, const Assignment& values);

/// Budgeted derivative-free maximization of objective() over the slots of
/// `structure`.
///
/// ceil((1 - refinement_fraction) * max_evaluations) probes are points of a
/// randomly shifted Halton sequence: continuous slots uniform in [-1, 1], span
/// slots log-uniform over 1..n-1. The rest run coordinate search around the
/// incumbent, halving the step after every sweep without improvement. The two
/// kinds are interleaved on a fixed schedule, so the probes made under a
/// budget are a prefix of those made under any larger one and the returned
/// score never drops as the budget grows. The sample stream depends only on
/// (seed, structure id, pair_id). Zero-slot structures are scored with one
/// evaluation.
FitResult fit_constants(const EquationStructure& structure, std::span<const double> s1,
                        std::span<const double> s2, const FitBudget& budget,
                        std::uint64_t pair_id = 0);

/// SplitMix64 finalizer, exposed for deterministic seeding elsewhere.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace lmfd
