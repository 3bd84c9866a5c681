#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lmfd {

/// Which side of a candidate pair a sensor leaf reads.
enum class Role : std::uint8_t { S1, S2 };

/// Constant slots. c1..c3 scale series, c4/c5 are EWMA spans.
enum class SlotId : std::uint8_t { C1 = 0, C2, C3, C4, C5 };
inline constexpr std::size_t kSlotCount = 5;

enum class SlotKind : std::uint8_t { Continuous, SpanInteger };

struct ConstSlot {
  SlotId id;
  SlotKind kind;

  friend bool operator==(const ConstSlot&, const ConstSlot&) = default;
};

std::string_view slot_name(SlotId id) noexcept;
std::optional<SlotId> slot_from_name(std::string_view name) noexcept;
SlotKind slot_kind(SlotId id) noexcept;
inline std::size_t slot_index(SlotId id) noexcept { return static_cast<std::size_t>(id); }

inline constexpr double kContinuousLower = -1.0;
inline constexpr double kContinuousUpper = 1.0;

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct SensorNode {
  Role role;
};
struct SigmoidNode {
  ExprPtr child;
};
/// exp(scale * child)
struct ExpNode {
  SlotId scale;
  ExprPtr child;
};
struct EwmaNode {
  SlotId span;
  ExprPtr child;
};
/// coeff * child; only ever the right operand of an Add.
struct ScaleNode {
  SlotId coeff;
  ExprPtr child;
};
enum class BinaryOp : std::uint8_t { Add, Mul, Div };
struct BinaryNode {
  BinaryOp op;
  ExprPtr left;
  ExprPtr right;
};

struct ExprNode {
  std::variant<SensorNode, SigmoidNode, ExpNode, EwmaNode, ScaleNode, BinaryNode> value;
};

/// Deep structural equality.
bool same_shape(const ExprNode& a, const ExprNode& b) noexcept;

ExprPtr make_sensor(Role role);
ExprPtr make_sigmoid(ExprPtr child);
ExprPtr make_exp(SlotId scale, ExprPtr child);
ExprPtr make_ewma(SlotId span, ExprPtr child);
ExprPtr make_scale(SlotId coeff, ExprPtr child);
ExprPtr make_binary(BinaryOp op, ExprPtr left, ExprPtr right);

/// Which grammar production generated a structure.
enum class Production : std::uint8_t { Bare, Add, Mul, Div };

/// One canonical equation shape with its constant slots left unassigned.
struct EquationStructure {
  int id = 0;
  Production production = Production::Bare;
  ExprPtr root;
  /// Slots reachable from root, in left-to-right (rendering) order.
  std::vector<ConstSlot> slots;

  bool uses(Role role) const noexcept;
};

/// The 55 structures in canonical order: the bare sensor first, then the
/// Add, Mul and Div productions, each expanding the left-operand
/// alternatives in the outer loop and the right-operand alternatives in the
/// inner loop. The s2 / s2 quotient is omitted.
const std::vector<EquationStructure>& enumerate_structures();

inline constexpr std::size_t kStructureCount = 55;

/// Finds the structure whose tree equals `root`, if any.
const EquationStructure* find_structure(const ExprNode& root) noexcept;

/// Values per constant slot; span values are stored as integral doubles.
class Assignment {
 public:
  Assignment() = default;

  std::optional<double> get(SlotId id) const noexcept { return values_[slot_index(id)]; }
  void set(SlotId id, double value) noexcept { values_[slot_index(id)] = value; }
  void clear(SlotId id) noexcept { values_[slot_index(id)].reset(); }
  bool has(SlotId id) const noexcept { return values_[slot_index(id)].has_value(); }
  bool empty() const noexcept;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::array<std::optional<double>, kSlotCount> values_{};
};

/// Throws Error(ValueOutOfBounds) if any assigned slot of `structure` lies
/// outside its bounds. Span slots need `rows` (n) to check the n-1 limit; pass
/// nullopt to check only the lower bound and integrality.
void check_bounds(const EquationStructure& structure, const Assignment& values,
                  std::optional<std::size_t> rows = std::nullopt);

enum class NumberStyle : std::uint8_t {
  /// Three decimals, for human-facing tables.
  Fixed3,
  /// Shortest round-trip text, for machine-readable reports.
  RoundTrip,
};

/// Surface syntax, e.g. "s2 + 0.642*exp(-0.982*s1)" or "s1 / ewma(s2, c5)".
/// Unassigned slots render as their id.
std::string render(const EquationStructure& structure, std::string_view s1_name,
                   std::string_view s2_name, const Assignment* values = nullptr,
                   NumberStyle style = NumberStyle::Fixed3);

struct ParsedEquation {
  const EquationStructure* structure = nullptr;
  Assignment values;
  /// Empty when the structure does not read that role.
  std::string s1_name;
  std::string s2_name;
};

/// Parses the surface syntax back into a grammar structure.
/// Throws SyntaxError with code SyntaxError, UnknownFunction or NotInGrammar,
/// and Error(ValueOutOfBounds) for out-of-range literal constants.
ParsedEquation parse_equation(std::string_view text);

}  // namespace lmfd
