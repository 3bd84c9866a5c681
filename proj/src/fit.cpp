#include "lmfd/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lmfd/error.hpp"
#include "lmfd/eval.hpp"
#include "lmfd/metrics.hpp"

namespace lmfd {
namespace {

constexpr double kInitialStep = 0.125;
constexpr double kMinStep = 1e-9;
constexpr std::array<std::uint32_t, 3> kHaltonBases{2, 3, 5};

// Counter-based uniform stream: value k is a pure function of (key, k).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t key) : key_(key) {}

  double next() noexcept {
    const std::uint64_t bits = mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

double radical_inverse(std::uint64_t i, std::uint32_t base) noexcept {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

class Search {
 public:
  Search(const EquationStructure& structure, std::span<const double> s1, std::span<const double> s2,
         int budget)
      : structure_(structure), s1_(s1), s2_(s2), budget_(budget),
        max_span_(static_cast<double>(s1.size()) - 1.0) {}

  bool exhausted() const noexcept { return used_ >= budget_; }
  int used() const noexcept { return used_; }

  // Maps u in [0,1) to a slot value.
  double from_unit(const ConstSlot& slot, double u) const {
    if (slot.kind == SlotKind::Continuous) {
      return std::clamp(kContinuousLower + (kContinuousUpper - kContinuousLower) * u,
                        kContinuousLower, kContinuousUpper);
    }
    // log-uniform over 1..n-1: floor(n^u)
    const double v = std::floor(std::exp(u * std::log(max_span_ + 1.0)));
    return std::clamp(v, 1.0, max_span_);
  }

  double step_to(const ConstSlot& slot, double current, double step, int direction) const {
    if (slot.kind == SlotKind::Continuous) {
      const double delta = step * (kContinuousUpper - kContinuousLower);
      return std::clamp(current + direction * delta, kContinuousLower, kContinuousUpper);
    }
    const double delta = std::max(1.0, std::round(step * static_cast<double>(s1_.size())));
    return std::clamp(current + direction * delta, 1.0, max_span_);
  }

  // Returns true when `values` became the new incumbent.
  bool probe(const Assignment& values) {
    ++used_;
    const auto score = objective(structure_, s1_, s2_, values);
    if (!score) return false;
    if (!best_ || *score > best_score_) {
      best_ = values;
      best_score_ = *score;
      return true;
    }
    return false;
  }

  const std::optional<Assignment>& best() const noexcept { return best_; }
  double best_score() const noexcept { return best_score_; }

 private:
  const EquationStructure& structure_;
  std::span<const double> s1_;
  std::span<const double> s2_;
  int budget_;
  double max_span_;
  int used_ = 0;
  std::optional<Assignment> best_;
  double best_score_ = 0.0;
};

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::optional<double> objective(const EquationStructure& structure, std::span<const double> s1,
                                std::span<const double> s2, const Assignment& values) {
  const Evaluation eval = evaluate(structure, Binding{s1, s2, values});
  if (!eval.valid) return std::nullopt;
  return abs_monotonicity(eval.series);
}

FitResult fit_constants(const EquationStructure& structure, std::span<const double> s1,
                        std::span<const double> s2, const FitBudget& budget,
                        std::uint64_t pair_id) {
  if (budget.max_evaluations < 1) {
    throw Error(ErrorCode::InvalidArgument, "fit budget must allow at least one evaluation");
  }
  if (!(budget.refinement_fraction > 0.0 && budget.refinement_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "refinement fraction must lie in (0, 1)");
  }
  if (s1.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "fitting needs at least 3 points");
  }

  Search search(structure, s1, s2, budget.max_evaluations);
  const auto& slots = structure.slots;

  if (slots.empty()) {
    search.probe(Assignment{});
  } else {
    UniformStream stream(mix64(mix64(budget.seed) ^ mix64(static_cast<std::uint64_t>(structure.id))) ^
                         mix64(pair_id + 0x632BE59BD9B4E019ULL));
    std::array<double, kHaltonBases.size()> shift{};
    for (auto& s : shift) s = stream.next();
    const auto offset = static_cast<std::uint64_t>(stream.next() * 4096.0);
    std::uint64_t halton_index = offset;

    auto draw = [&] {
      ++halton_index;
      Assignment values;
      for (std::size_t d = 0; d < slots.size(); ++d) {
        double u = radical_inverse(halton_index, kHaltonBases[d]) + shift[d];
        u -= std::floor(u);
        values.set(slots[d].id, search.from_unit(slots[d], u));
      }
      return values;
    };

    // Probe k (1-based) explores iff ceil(share * k) steps up, so any budget B
    // gets ceil(share * B) quasi-random samples and the probe sequence does
    // not depend on B: a larger budget extends a smaller one.
    const double share = 1.0 - budget.refinement_fraction;
    auto explore_count = [share](int k) {
      return static_cast<long>(std::ceil(share * static_cast<double>(k) - 1e-9));
    };

    double step = kInitialStep;
    std::size_t cursor = 0;  // position in the sweep: slot * 2 + direction
    auto restart_refinement = [&] {
      step = kInitialStep;
      cursor = 0;
    };

    // Next coordinate move around the incumbent, or nullopt once the step
    // has collapsed.
    auto next_move = [&]() -> std::optional<Assignment> {
      while (step >= kMinStep) {
        if (cursor == 2 * slots.size()) {
          // a whole sweep without improvement
          step *= 0.5;
          cursor = 0;
          continue;
        }
        const auto& slot = slots[cursor / 2];
        const int direction = cursor % 2 == 0 ? +1 : -1;
        ++cursor;
        Assignment trial = *search.best();
        const double current = *trial.get(slot.id);
        const double moved = search.step_to(slot, current, step, direction);
        if (moved == current) continue;
        trial.set(slot.id, moved);
        return trial;
      }
      return std::nullopt;
    };

    while (!search.exhausted()) {
      const int k = search.used() + 1;
      const bool explore = explore_count(k) > explore_count(k - 1);
      std::optional<Assignment> trial;
      if (!explore && search.best()) trial = next_move();
      if (!trial) {
        if (search.probe(draw())) restart_refinement();
        continue;
      }
      // restart the sweep around a new incumbent at the same step
      if (search.probe(*trial)) cursor = 0;
    }
  }

  FitResult result;
  result.evaluations_used = search.used();
  if (search.best()) {
    result.values = *search.best();
    result.score = search.best_score();
    result.valid = true;
  }
  return result;
}

}  // namespace lmfd
