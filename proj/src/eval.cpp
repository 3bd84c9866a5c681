#include "lmfd/eval.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lmfd/error.hpp"

namespace lmfd {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

class Evaluator {
 public:
  explicit Evaluator(const Binding& binding) : b_(binding) {}

  std::vector<double> run(const ExprNode& node) const {
    return std::visit(
        Overloaded{
            [&](const SensorNode& n) {
              const auto src = n.role == Role::S1 ? b_.s1 : b_.s2;
              return std::vector<double>(src.begin(), src.end());
            },
            [&](const SigmoidNode& n) {
              auto v = run(*n.child);
              for (double& x : v) x = 1.0 / (1.0 + std::exp(-x));
              return v;
            },
            [&](const ExpNode& n) {
              auto v = run(*n.child);
              const double c = value(n.scale);
              for (double& x : v) x = std::exp(c * x);
              return v;
            },
            [&](const EwmaNode& n) {
              const auto v = run(*n.child);
              return ewma(v, std::llround(value(n.span)));
            },
            [&](const ScaleNode& n) {
              auto v = run(*n.child);
              const double c = value(n.coeff);
              for (double& x : v) x *= c;
              return v;
            },
            [&](const BinaryNode& n) {
              auto lhs = run(*n.left);
              const auto rhs = run(*n.right);
              for (std::size_t i = 0; i < lhs.size(); ++i) {
                switch (n.op) {
                  case BinaryOp::Add: lhs[i] += rhs[i]; break;
                  case BinaryOp::Mul: lhs[i] *= rhs[i]; break;
                  case BinaryOp::Div: lhs[i] /= rhs[i]; break;
                }
              }
              return lhs;
            },
        },
        node.value);
  }

 private:
  double value(SlotId id) const { return *b_.constants.get(id); }

  const Binding& b_;
};

}  // namespace

EwmaKernel::EwmaKernel(std::int64_t span) : span_(span) {
  if (span < 1) {
    throw Error(ErrorCode::SpanOutOfRange, "ewma span must be >= 1, got " + std::to_string(span));
  }
  weights_.resize(static_cast<std::size_t>(span));
  if (span == 1) {
    weights_[0] = 1.0;
    return;
  }
  const double lambda = 1.0 / tau();
  for (std::size_t m = 0; m < weights_.size(); ++m) {
    weights_[m] = std::exp(-lambda * static_cast<double>(m));
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double& w : weights_) w /= total;
}

std::vector<double> ewma(std::span<const double> x, std::int64_t span) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (span < 1 || span > n - 1) {
    throw Error(ErrorCode::SpanOutOfRange, "ewma span " + std::to_string(span) +
                                               " outside [1, " + std::to_string(n - 1) + "]");
  }
  const EwmaKernel kernel(span);
  const auto& w = kernel.weights();
  const auto window = static_cast<std::size_t>(span);

  std::vector<double> y(x.size());
  double tail_sum = 0.0;
  for (std::size_t t = window; t < x.size(); ++t) {
    double acc = 0.0;
    for (std::size_t m = 0; m < window; ++m) acc += w[m] * x[t - m];
    y[t] = acc;
    tail_sum += acc;
  }
  const double fill = tail_sum / static_cast<double>(x.size() - window);
  for (std::size_t t = 0; t < window; ++t) y[t] = fill;
  return y;
}

Evaluation evaluate(const EquationStructure& structure, const Binding& binding) {
  if (binding.s1.size() != binding.s2.size()) {
    throw Error(ErrorCode::LengthMismatch, "bound series lengths " +
                                               std::to_string(binding.s1.size()) + " and " +
                                               std::to_string(binding.s2.size()) + " differ");
  }
  for (const auto& slot : structure.slots) {
    if (!binding.constants.has(slot.id)) {
      throw Error(ErrorCode::IncompleteBinding,
                  "no value bound for constant " + std::string(slot_name(slot.id)));
    }
  }
  check_bounds(structure, binding.constants, binding.s1.size());

  Evaluation out;
  out.series = Evaluator(binding).run(*structure.root);
  for (const double v : out.series) {
    if (!std::isfinite(v)) {
      out.valid = false;
      break;
    }
  }
  return out;
}

}  // namespace lmfd
