#include "lmfd/grammar.hpp"

#include <cmath>
#include <type_traits>

#include "lmfd/error.hpp"
#include "lmfd/format.hpp"

namespace lmfd {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void collect_slots(const ExprNode& node, std::vector<ConstSlot>& out) {
  std::visit(Overloaded{
                 [](const SensorNode&) {},
                 [&](const SigmoidNode& n) { collect_slots(*n.child, out); },
                 [&](const ExpNode& n) {
                   out.push_back({n.scale, slot_kind(n.scale)});
                   collect_slots(*n.child, out);
                 },
                 [&](const EwmaNode& n) {
                   collect_slots(*n.child, out);
                   out.push_back({n.span, slot_kind(n.span)});
                 },
                 [&](const ScaleNode& n) {
                   out.push_back({n.coeff, slot_kind(n.coeff)});
                   collect_slots(*n.child, out);
                 },
                 [&](const BinaryNode& n) {
                   collect_slots(*n.left, out);
                   collect_slots(*n.right, out);
                 },
             },
             node.value);
}

bool reads_role(const ExprNode& node, Role role) {
  return std::visit(Overloaded{
                        [&](const SensorNode& n) { return n.role == role; },
                        [&](const SigmoidNode& n) { return reads_role(*n.child, role); },
                        [&](const ExpNode& n) { return reads_role(*n.child, role); },
                        [&](const EwmaNode& n) { return reads_role(*n.child, role); },
                        [&](const ScaleNode& n) { return reads_role(*n.child, role); },
                        [&](const BinaryNode& n) {
                          return reads_role(*n.left, role) || reads_role(*n.right, role);
                        },
                    },
                    node.value);
}

// Left operand alternatives (A2).
std::vector<ExprPtr> left_terms() {
  return {make_sensor(Role::S1), make_sensor(Role::S2), make_ewma(SlotId::C4, make_sensor(Role::S1)),
          make_sigmoid(make_sensor(Role::S1)), make_exp(SlotId::C2, make_sensor(Role::S1))};
}

// Right operand alternatives for Add and Mul (B1).
std::vector<ExprPtr> product_terms() {
  return {make_sensor(Role::S2), make_ewma(SlotId::C5, make_sensor(Role::S2)),
          make_sigmoid(make_sensor(Role::S2)), make_exp(SlotId::C3, make_sensor(Role::S2))};
}

// Denominator alternatives (B2): no exp term.
std::vector<ExprPtr> denominator_terms() {
  return {make_sensor(Role::S2), make_ewma(SlotId::C5, make_sensor(Role::S2)),
          make_sigmoid(make_sensor(Role::S2))};
}

bool is_bare(const ExprPtr& node, Role role) {
  const auto* sensor = std::get_if<SensorNode>(&node->value);
  return sensor != nullptr && sensor->role == role;
}

std::vector<EquationStructure> build_structures() {
  std::vector<EquationStructure> out;
  auto push = [&](Production production, ExprPtr root) {
    EquationStructure s;
    s.id = static_cast<int>(out.size());
    s.production = production;
    s.root = std::move(root);
    collect_slots(*s.root, s.slots);
    out.push_back(std::move(s));
  };

  push(Production::Bare, make_sensor(Role::S1));
  for (const auto& a : left_terms()) {
    for (const auto& b : product_terms()) {
      push(Production::Add, make_binary(BinaryOp::Add, a, make_scale(SlotId::C1, b)));
    }
  }
  for (const auto& a : left_terms()) {
    for (const auto& b : product_terms()) {
      push(Production::Mul, make_binary(BinaryOp::Mul, a, b));
    }
  }
  for (const auto& a : left_terms()) {
    for (const auto& b : denominator_terms()) {
      // s2 / s2 is identically 1.
      if (is_bare(a, Role::S2) && is_bare(b, Role::S2)) continue;
      push(Production::Div, make_binary(BinaryOp::Div, a, b));
    }
  }
  return out;
}

std::string render_constant(const Assignment* values, SlotId id, NumberStyle style) {
  if (values == nullptr || !values->has(id)) return std::string(slot_name(id));
  const double v = *values->get(id);
  if (slot_kind(id) == SlotKind::SpanInteger) {
    return std::to_string(static_cast<long long>(std::llround(v)));
  }
  return style == NumberStyle::Fixed3 ? format_fixed3(v) : format_shortest(v);
}

void render_node(const ExprNode& node, std::string_view s1, std::string_view s2,
                 const Assignment* values, NumberStyle style, std::string& out) {
  std::visit(Overloaded{
                 [&](const SensorNode& n) { out += n.role == Role::S1 ? s1 : s2; },
                 [&](const SigmoidNode& n) {
                   out += "sigmoid(";
                   render_node(*n.child, s1, s2, values, style, out);
                   out += ')';
                 },
                 [&](const ExpNode& n) {
                   out += "exp(";
                   out += render_constant(values, n.scale, style);
                   out += '*';
                   render_node(*n.child, s1, s2, values, style, out);
                   out += ')';
                 },
                 [&](const EwmaNode& n) {
                   out += "ewma(";
                   render_node(*n.child, s1, s2, values, style, out);
                   out += ", ";
                   out += render_constant(values, n.span, style);
                   out += ')';
                 },
                 [&](const ScaleNode& n) {
                   out += render_constant(values, n.coeff, style);
                   out += '*';
                   render_node(*n.child, s1, s2, values, style, out);
                 },
                 [&](const BinaryNode& n) {
                   render_node(*n.left, s1, s2, values, style, out);
                   switch (n.op) {
                     case BinaryOp::Add: out += " + "; break;
                     case BinaryOp::Mul: out += " * "; break;
                     case BinaryOp::Div: out += " / "; break;
                   }
                   render_node(*n.right, s1, s2, values, style, out);
                 },
             },
             node.value);
}

}  // namespace

std::string_view slot_name(SlotId id) noexcept {
  static constexpr std::array<std::string_view, kSlotCount> kNames{"c1", "c2", "c3", "c4", "c5"};
  return kNames[slot_index(id)];
}

std::optional<SlotId> slot_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    const auto id = static_cast<SlotId>(i);
    if (slot_name(id) == name) return id;
  }
  return std::nullopt;
}

SlotKind slot_kind(SlotId id) noexcept {
  return id == SlotId::C4 || id == SlotId::C5 ? SlotKind::SpanInteger : SlotKind::Continuous;
}

bool same_shape(const ExprNode& a, const ExprNode& b) noexcept {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, SensorNode>) {
          return lhs.role == rhs.role;
        } else if constexpr (std::is_same_v<T, SigmoidNode>) {
          return same_shape(*lhs.child, *rhs.child);
        } else if constexpr (std::is_same_v<T, ExpNode>) {
          return lhs.scale == rhs.scale && same_shape(*lhs.child, *rhs.child);
        } else if constexpr (std::is_same_v<T, EwmaNode>) {
          return lhs.span == rhs.span && same_shape(*lhs.child, *rhs.child);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return lhs.coeff == rhs.coeff && same_shape(*lhs.child, *rhs.child);
        } else {
          return lhs.op == rhs.op && same_shape(*lhs.left, *rhs.left) &&
                 same_shape(*lhs.right, *rhs.right);
        }
      },
      a.value);
}

ExprPtr make_sensor(Role role) { return std::make_shared<const ExprNode>(ExprNode{SensorNode{role}}); }
ExprPtr make_sigmoid(ExprPtr child) {
  return std::make_shared<const ExprNode>(ExprNode{SigmoidNode{std::move(child)}});
}
ExprPtr make_exp(SlotId scale, ExprPtr child) {
  return std::make_shared<const ExprNode>(ExprNode{ExpNode{scale, std::move(child)}});
}
ExprPtr make_ewma(SlotId span, ExprPtr child) {
  return std::make_shared<const ExprNode>(ExprNode{EwmaNode{span, std::move(child)}});
}
ExprPtr make_scale(SlotId coeff, ExprPtr child) {
  return std::make_shared<const ExprNode>(ExprNode{ScaleNode{coeff, std::move(child)}});
}
ExprPtr make_binary(BinaryOp op, ExprPtr left, ExprPtr right) {
  return std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(left), std::move(right)}});
}

bool EquationStructure::uses(Role role) const noexcept { return reads_role(*root, role); }

const std::vector<EquationStructure>& enumerate_structures() {
  static const std::vector<EquationStructure> structures = build_structures();
  return structures;
}

const EquationStructure* find_structure(const ExprNode& root) noexcept {
  for (const auto& s : enumerate_structures()) {
    if (same_shape(*s.root, root)) return &s;
  }
  return nullptr;
}

bool Assignment::empty() const noexcept {
  for (const auto& v : values_) {
    if (v) return false;
  }
  return true;
}

void check_bounds(const EquationStructure& structure, const Assignment& values,
                  std::optional<std::size_t> rows) {
  for (const auto& slot : structure.slots) {
    const auto v = values.get(slot.id);
    if (!v) continue;
    const std::string name{slot_name(slot.id)};
    if (slot.kind == SlotKind::Continuous) {
      if (!(*v >= kContinuousLower && *v <= kContinuousUpper)) {
        throw Error(ErrorCode::ValueOutOfBounds,
                    name + " = " + format_shortest(*v) + " lies outside [-1, 1]");
      }
      continue;
    }
    if (!std::isfinite(*v) || *v != std::floor(*v)) {
      throw Error(ErrorCode::ValueOutOfBounds,
                  name + " = " + format_shortest(*v) + " is not an integer span");
    }
    if (*v < 1.0 || (rows && *v > static_cast<double>(*rows) - 1.0)) {
      throw Error(ErrorCode::ValueOutOfBounds,
                  name + " = " + format_shortest(*v) + " lies outside [1, n-1]" +
                      (rows ? " with n = " + std::to_string(*rows) : std::string{}));
    }
  }
}

std::string render(const EquationStructure& structure, std::string_view s1_name,
                   std::string_view s2_name, const Assignment* values, NumberStyle style) {
  if (values != nullptr) check_bounds(structure, *values);
  std::string out;
  render_node(*structure.root, s1_name, s2_name, values, style, out);
  return out;
}

}  // namespace lmfd
