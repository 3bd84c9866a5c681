#include <gtest/gtest.h>

#include <random>

#include "lmfd/error.hpp"
#include "lmfd/grammar.hpp"

namespace lmfd {
namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_equation(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::Io;
}

TEST(Parse, TableRowOneEquation) {
  const auto p = parse_equation("s2 + 0.642*exp(-0.982*s1)");
  ASSERT_NE(p.structure, nullptr);
  EXPECT_EQ(p.structure->production, Production::Add);
  EXPECT_EQ(render(*p.structure, "s1", "s2"), "s1 + c1*exp(c3*s2)");
  EXPECT_EQ(p.s1_name, "s2");
  EXPECT_EQ(p.s2_name, "s1");
  EXPECT_EQ(p.values.get(SlotId::C1), 0.642);
  EXPECT_EQ(p.values.get(SlotId::C3), -0.982);
  EXPECT_FALSE(p.values.has(SlotId::C2));
}

TEST(Parse, BareSensor) {
  const auto p = parse_equation("a");
  ASSERT_NE(p.structure, nullptr);
  EXPECT_EQ(p.structure->id, 0);
  EXPECT_EQ(p.s1_name, "a");
  EXPECT_TRUE(p.s2_name.empty());
}

TEST(Parse, SingleSensorInTheS2Role) {
  const auto p = parse_equation("x + 0.5*sigmoid(x)");
  ASSERT_NE(p.structure, nullptr);
  EXPECT_EQ(render(*p.structure, "s1", "s2"), "s2 + c1*sigmoid(s2)");
  EXPECT_EQ(p.s2_name, "x");
  EXPECT_TRUE(p.s1_name.empty());
}

TEST(Parse, SlotIdentifiersAreAccepted) {
  const auto p = parse_equation("a / ewma(b, c5)");
  ASSERT_NE(p.structure, nullptr);
  EXPECT_EQ(render(*p.structure, "s1", "s2"), "s1 / ewma(s2, c5)");
  EXPECT_TRUE(p.values.empty());
  EXPECT_EQ(parse_error("a / ewma(b, c4)"), ErrorCode::NotInGrammar);
}

TEST(Parse, Rejections) {
  EXPECT_EQ(parse_error("sigmoid(sigmoid(a))"), ErrorCode::NotInGrammar);
  EXPECT_EQ(parse_error("b / b"), ErrorCode::NotInGrammar);
  EXPECT_EQ(parse_error("a + b"), ErrorCode::NotInGrammar);
  EXPECT_EQ(parse_error("a * b * c"), ErrorCode::NotInGrammar);
  EXPECT_EQ(parse_error("log(a)"), ErrorCode::UnknownFunction);
  EXPECT_EQ(parse_error("a + 0.5*"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("a + 1.5*b"), ErrorCode::ValueOutOfBounds);
  EXPECT_EQ(parse_error("ewma(a, 2.5) * b"), ErrorCode::ValueOutOfBounds);
  EXPECT_EQ(parse_error("ewma(a, 0) * b"), ErrorCode::ValueOutOfBounds);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse_equation("a + (b");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(e.position(), 6U);
  }
  try {
    parse_equation("a $ b");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 2U);
  }
}

Assignment random_values(const EquationStructure& s, std::mt19937_64& rng, std::size_t rows) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> span(1, static_cast<int>(rows) - 1);
  Assignment values;
  for (const auto& slot : s.slots) {
    values.set(slot.id, slot.kind == SlotKind::Continuous ? unit(rng) : span(rng));
  }
  return values;
}

TEST(Parse, RoundTripsEveryStructureWithExactValues) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& s : enumerate_structures()) {
      const auto values = random_values(s, rng, 500);
      const auto text = render(s, "left_sensor", "right-2", &values, NumberStyle::RoundTrip);
      const auto p = parse_equation(text);
      ASSERT_NE(p.structure, nullptr) << text;
      EXPECT_EQ(p.structure->id, s.id) << text;
      EXPECT_EQ(p.values, values) << text;
      EXPECT_EQ(p.s1_name, s.uses(Role::S1) ? "left_sensor" : "") << text;
      EXPECT_EQ(p.s2_name, s.uses(Role::S2) ? "right-2" : "") << text;
    }
  }
}

TEST(Parse, RoundTripsUnfittedRenderings) {
  for (const auto& s : enumerate_structures()) {
    const auto text = render(s, "p", "q");
    const auto p = parse_equation(text);
    ASSERT_NE(p.structure, nullptr) << text;
    EXPECT_EQ(p.structure->id, s.id) << text;
    EXPECT_TRUE(p.values.empty()) << text;
  }
}

TEST(Parse, ToleratesWhitespaceAndSignedLiterals) {
  const auto p = parse_equation("  exp( -1 *a)/sigmoid( b )");
  ASSERT_NE(p.structure, nullptr);
  EXPECT_EQ(render(*p.structure, "s1", "s2"), "exp(c2*s1) / sigmoid(s2)");
  EXPECT_EQ(p.values.get(SlotId::C2), -1.0);
  const auto q = parse_equation("a + 1e-3*b");
  EXPECT_EQ(q.values.get(SlotId::C1), 0.001);
}

}  // namespace
}  // namespace lmfd
