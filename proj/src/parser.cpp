// Surface-syntax parser. Text is first read as a general arithmetic
// expression, then matched against the grammar, so well-formed input that
// falls outside the 55 structures is reported as NotInGrammar rather than as a
// syntax error.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

#include "lmfd/error.hpp"
#include "lmfd/grammar.hpp"

namespace lmfd {
namespace {

enum class TokenKind { Ident, Number, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };

struct Token {
  TokenKind kind;
  std::string_view text;
  double number = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ >= src_.size()) {
        tokens.push_back({TokenKind::End, {}, 0.0, pos_});
        return tokens;
      }
      const char c = src_[pos_];
      const auto uc = static_cast<unsigned char>(c);
      if (std::isalpha(uc) || c == '_') {
        const std::size_t start = pos_;
        ++pos_;
        while (pos_ < src_.size()) {
          const auto d = static_cast<unsigned char>(src_[pos_]);
          if (!(std::isalnum(d) || d == '_' || d == '-')) break;
          ++pos_;
        }
        tokens.push_back({TokenKind::Ident, src_.substr(start, pos_ - start), 0.0, start});
        continue;
      }
      if (std::isdigit(uc) || c == '.') {
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
        if (res.ec != std::errc{}) {
          throw SyntaxError(ErrorCode::SyntaxError, "malformed number", pos_);
        }
        const auto len = static_cast<std::size_t>(res.ptr - (src_.data() + pos_));
        tokens.push_back({TokenKind::Number, src_.substr(pos_, len), value, pos_});
        pos_ += len;
        continue;
      }
      TokenKind kind{};
      switch (c) {
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Star; break;
        case '/': kind = TokenKind::Slash; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case ',': kind = TokenKind::Comma; break;
        default:
          throw SyntaxError(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'",
                            pos_);
      }
      tokens.push_back({kind, src_.substr(pos_, 1), 0.0, pos_});
      ++pos_;
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

// General expression tree, before grammar matching.
struct Syntax {
  enum class Kind { Ident, Number, Call, Binary, Negate } kind;
  std::string text;
  double number = 0.0;
  char op = 0;
  std::vector<Syntax> args;
  std::size_t pos = 0;
};

class ExpressionParser {
 public:
  explicit ExpressionParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Syntax parse() {
    Syntax root = parse_sum();
    if (peek().kind != TokenKind::End) {
      throw SyntaxError(ErrorCode::SyntaxError,
                        "unexpected '" + std::string(peek().text) + "'", peek().pos);
    }
    return root;
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  const Token& next() { return tokens_[cursor_++]; }

  void expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) {
      throw SyntaxError(ErrorCode::SyntaxError, std::string("expected ") + what, peek().pos);
    }
    ++cursor_;
  }

  Syntax parse_sum() {
    Syntax lhs = parse_product();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const Token& op = next();
      Syntax rhs = parse_product();
      lhs = binary(op.kind == TokenKind::Plus ? '+' : '-', std::move(lhs), std::move(rhs), op.pos);
    }
    return lhs;
  }

  Syntax parse_product() {
    Syntax lhs = parse_unary();
    while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
      const Token& op = next();
      Syntax rhs = parse_unary();
      lhs = binary(op.kind == TokenKind::Star ? '*' : '/', std::move(lhs), std::move(rhs), op.pos);
    }
    return lhs;
  }

  Syntax parse_unary() {
    if (peek().kind == TokenKind::Minus || peek().kind == TokenKind::Plus) {
      const Token& op = next();
      Syntax operand = parse_unary();
      if (op.kind == TokenKind::Plus) return operand;
      if (operand.kind == Syntax::Kind::Number) {
        operand.number = -operand.number;
        operand.pos = op.pos;
        return operand;
      }
      Syntax neg{Syntax::Kind::Negate, {}, 0.0, '-', {}, op.pos};
      neg.args.push_back(std::move(operand));
      return neg;
    }
    return parse_primary();
  }

  Syntax parse_primary() {
    const Token& tok = next();
    switch (tok.kind) {
      case TokenKind::Number:
        return Syntax{Syntax::Kind::Number, std::string(tok.text), tok.number, 0, {}, tok.pos};
      case TokenKind::Ident: {
        if (peek().kind != TokenKind::LParen) {
          return Syntax{Syntax::Kind::Ident, std::string(tok.text), 0.0, 0, {}, tok.pos};
        }
        ++cursor_;
        Syntax call{Syntax::Kind::Call, std::string(tok.text), 0.0, 0, {}, tok.pos};
        if (peek().kind != TokenKind::RParen) {
          call.args.push_back(parse_sum());
          while (peek().kind == TokenKind::Comma) {
            ++cursor_;
            call.args.push_back(parse_sum());
          }
        }
        expect(TokenKind::RParen, "')'");
        return call;
      }
      case TokenKind::LParen: {
        Syntax inner = parse_sum();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::End:
        throw SyntaxError(ErrorCode::SyntaxError, "unexpected end of input", tok.pos);
      default:
        throw SyntaxError(ErrorCode::SyntaxError, "unexpected '" + std::string(tok.text) + "'",
                          tok.pos);
    }
  }

  static Syntax binary(char op, Syntax lhs, Syntax rhs, std::size_t pos) {
    Syntax node{Syntax::Kind::Binary, {}, 0.0, op, {}, pos};
    node.args.push_back(std::move(lhs));
    node.args.push_back(std::move(rhs));
    return node;
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

[[noreturn]] void not_in_grammar(const std::string& why, std::size_t pos) {
  throw SyntaxError(ErrorCode::NotInGrammar, "not in the equation grammar: " + why, pos);
}

void reject_unknown_functions(const Syntax& node) {
  if (node.kind == Syntax::Kind::Call && node.text != "sigmoid" && node.text != "exp" &&
      node.text != "ewma") {
    throw SyntaxError(ErrorCode::UnknownFunction, "unknown function '" + node.text + "'", node.pos);
  }
  for (const auto& child : node.args) reject_unknown_functions(child);
}

using RoleOf = std::function<Role(const std::string&)>;

// Maps a general expression onto grammar nodes. Constants fill `values`;
// slot ids follow from the node kind and the sensor role beneath it.
class GrammarBuilder {
 public:
  GrammarBuilder(RoleOf role_of, const std::vector<std::string>& sensors, Assignment& values)
      : role_of_(std::move(role_of)), sensors_(sensors), values_(values) {}

  ExprPtr equation(const Syntax& node) {
    if (node.kind != Syntax::Kind::Binary) return term(node);
    const Syntax& lhs = node.args[0];
    const Syntax& rhs = node.args[1];
    switch (node.op) {
      case '+': {
        if (rhs.kind != Syntax::Kind::Binary || rhs.op != '*') {
          not_in_grammar("the added term needs a scaling constant, as in 'a + 0.5*b'", rhs.pos);
        }
        ExprPtr left = term(lhs);
        ExprPtr right = term(rhs.args[1]);
        constant(rhs.args[0], SlotId::C1);
        return make_binary(BinaryOp::Add, std::move(left), make_scale(SlotId::C1, std::move(right)));
      }
      case '*':
        return make_binary(BinaryOp::Mul, term(lhs), term(rhs));
      case '/':
        return make_binary(BinaryOp::Div, term(lhs), term(rhs));
      default:
        not_in_grammar("subtraction is expressed through a negative constant", node.pos);
    }
  }

 private:
  ExprPtr term(const Syntax& node) {
    switch (node.kind) {
      case Syntax::Kind::Ident:
        return make_sensor(sensor_role(node));
      case Syntax::Kind::Call:
        return call(node);
      case Syntax::Kind::Number:
        not_in_grammar("a constant cannot stand alone as an operand", node.pos);
      case Syntax::Kind::Negate:
        not_in_grammar("negation is expressed through a negative constant", node.pos);
      case Syntax::Kind::Binary:
        not_in_grammar("operators may not be nested", node.pos);
    }
    not_in_grammar("unsupported term", node.pos);
  }

  Role sensor_role(const Syntax& node) {
    if (std::find(sensors_.begin(), sensors_.end(), node.text) == sensors_.end()) {
      not_in_grammar("'" + node.text + "' is a constant slot, not a sensor", node.pos);
    }
    return role_of_(node.text);
  }

  Role sensor_argument(const Syntax& node, const std::string& fn) {
    if (node.kind != Syntax::Kind::Ident) {
      not_in_grammar(fn + " takes a sensor name, functions may not be nested", node.pos);
    }
    return sensor_role(node);
  }

  ExprPtr call(const Syntax& node) {
    if (node.text == "sigmoid") {
      if (node.args.size() != 1) not_in_grammar("sigmoid takes one argument", node.pos);
      return make_sigmoid(make_sensor(sensor_argument(node.args[0], "sigmoid")));
    }
    if (node.text == "exp") {
      if (node.args.size() != 1) not_in_grammar("exp takes one argument", node.pos);
      const Syntax& arg = node.args[0];
      if (arg.kind != Syntax::Kind::Binary || arg.op != '*') {
        not_in_grammar("exp needs the form exp(c*sensor)", arg.pos);
      }
      const Role role = sensor_argument(arg.args[1], "exp");
      const SlotId slot = role == Role::S1 ? SlotId::C2 : SlotId::C3;
      constant(arg.args[0], slot);
      return make_exp(slot, make_sensor(role));
    }
    // ewma
    if (node.args.size() != 2) not_in_grammar("ewma takes a sensor and a span", node.pos);
    const Role role = sensor_argument(node.args[0], "ewma");
    const SlotId slot = role == Role::S1 ? SlotId::C4 : SlotId::C5;
    constant(node.args[1], slot);
    return make_ewma(slot, make_sensor(role));
  }

  void constant(const Syntax& node, SlotId expected) {
    if (node.kind == Syntax::Kind::Number) {
      values_.set(expected, node.number);
      return;
    }
    if (node.kind == Syntax::Kind::Ident) {
      const auto id = slot_from_name(node.text);
      if (id && *id == expected) return;
      if (id) {
        not_in_grammar("constant '" + node.text + "' used where '" +
                           std::string(slot_name(expected)) + "' belongs",
                       node.pos);
      }
    }
    not_in_grammar("expected a constant", node.pos);
  }

  RoleOf role_of_;
  const std::vector<std::string>& sensors_;
  Assignment& values_;
};

void collect_names(const Syntax& node, std::vector<std::string>& names, bool constant_position) {
  if (node.kind == Syntax::Kind::Ident && !constant_position) {
    if (std::find(names.begin(), names.end(), node.text) == names.end()) names.push_back(node.text);
    return;
  }
  for (std::size_t i = 0; i < node.args.size(); ++i) {
    // Slot-id identifiers in constant positions are not sensors.
    const bool is_const = (node.kind == Syntax::Kind::Binary && node.op == '*' && i == 0 &&
                           node.args[0].kind == Syntax::Kind::Ident &&
                           slot_from_name(node.args[0].text).has_value()) ||
                          (node.kind == Syntax::Kind::Call && node.text == "ewma" && i == 1);
    collect_names(node.args[i], names, is_const);
  }
}

}  // namespace

ParsedEquation parse_equation(std::string_view text) {
  const Syntax tree = ExpressionParser(Lexer(text).run()).parse();
  reject_unknown_functions(tree);

  std::vector<std::string> names;
  collect_names(tree, names, false);
  if (names.empty()) not_in_grammar("no sensor referenced", 0);
  if (names.size() > 2) not_in_grammar("at most two sensors may appear", 0);

  // Candidate role mappings: two names bind in order of appearance; a single
  // name may read either role (e.g. "a" is s1, "a + c1*ewma(a, 5)" is s2-only).
  std::vector<std::function<Role(const std::string&)>> mappings;
  if (names.size() == 2) {
    const std::string first = names[0];
    mappings.emplace_back([first](const std::string& n) { return n == first ? Role::S1 : Role::S2; });
  } else {
    mappings.emplace_back([](const std::string&) { return Role::S1; });
    mappings.emplace_back([](const std::string&) { return Role::S2; });
  }

  std::optional<SyntaxError> first_failure;
  for (const auto& mapping : mappings) {
    Assignment values;
    GrammarBuilder builder(mapping, names, values);
    ExprPtr root;
    try {
      root = builder.equation(tree);
    } catch (const SyntaxError& e) {
      if (!first_failure) first_failure = e;
      continue;
    }
    const EquationStructure* structure = find_structure(*root);
    if (structure == nullptr) continue;
    check_bounds(*structure, values);
    ParsedEquation out;
    out.structure = structure;
    out.values = values;
    for (const auto& n : names) {
      (mapping(n) == Role::S1 ? out.s1_name : out.s2_name) = n;
    }
    return out;
  }
  if (first_failure) throw *first_failure;
  not_in_grammar("no canonical structure has this shape", 0);
}

}  // namespace lmfd
