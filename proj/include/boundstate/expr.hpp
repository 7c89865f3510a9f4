#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "boundstate/errors.hpp"
#include "boundstate/jet.hpp"
#include "boundstate/special.hpp"

namespace boundstate {

enum class NodeKind { Number, Variable, Pi, Negate, Add, Subtract, Multiply, Divide, Power, Call };

enum class Function { Exp, Log, Sqrt, Sin, Cos, Tan, Atan, Abs, Gamma };

inline const char* function_name(Function f) {
  switch (f) {
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Atan: return "atan";
    case Function::Abs: return "abs";
    case Function::Gamma: return "gamma";
  }
  return "?";
}

inline std::optional<Function> lookup_function(std::string_view name) {
  static constexpr Function all[] = {Function::Exp, Function::Log,  Function::Sqrt,
                                     Function::Sin, Function::Cos,  Function::Tan,
                                     Function::Atan, Function::Abs, Function::Gamma};
  for (Function f : all) {
    if (name == function_name(f)) return f;
  }
  return std::nullopt;
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  Function function = Function::Exp;
  NodePtr lhs;  // operand of unary nodes and calls
  NodePtr rhs;
  bool depends_on_x = false;

  static NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->number = v;
    return n;
  }
  static NodePtr make_leaf(NodeKind kind) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->depends_on_x = kind == NodeKind::Variable;
    return n;
  }
  static NodePtr make_unary(NodeKind kind, NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->depends_on_x = operand->depends_on_x;
    n->lhs = std::move(operand);
    return n;
  }
  static NodePtr make_call(Function f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->function = f;
    n->depends_on_x = arg->depends_on_x;
    n->lhs = std::move(arg);
    return n;
  }
  static NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->depends_on_x = lhs->depends_on_x || rhs->depends_on_x;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }
};

/// Side-channel conventions hit during evaluation.
struct EvalFlags {
  bool zero_pow_zero = false;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* op_symbol(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return "+";
    case NodeKind::Subtract: return "-";
    case NodeKind::Multiply: return "*";
    case NodeKind::Divide: return "/";
    case NodeKind::Power: return "^";
    default: return "?";
  }
}

inline const char* op_name(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return "add";
    case NodeKind::Subtract: return "sub";
    case NodeKind::Multiply: return "mul";
    case NodeKind::Divide: return "div";
    case NodeKind::Power: return "pow";
    case NodeKind::Negate: return "neg";
    default: return "?";
  }
}

// Fully parenthesised so that re-parsing reproduces the same tree.
inline void render(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); return;
    case NodeKind::Variable: out += 'x'; return;
    case NodeKind::Pi: out += "pi"; return;
    case NodeKind::Negate:
      out += "(-";
      render(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Call:
      out += function_name(n.function);
      out += '(';
      render(*n.lhs, out);
      out += ')';
      return;
    default:
      out += '(';
      render(*n.lhs, out);
      out += op_symbol(n.kind);
      render(*n.rhs, out);
      out += ')';
      return;
  }
}

inline void tree_string(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); return;
    case NodeKind::Variable: out += 'x'; return;
    case NodeKind::Pi: out += "pi"; return;
    case NodeKind::Negate:
    case NodeKind::Call:
      out += n.kind == NodeKind::Call ? function_name(n.function) : op_name(n.kind);
      out += '(';
      tree_string(*n.lhs, out);
      out += ')';
      return;
    default:
      out += op_name(n.kind);
      out += '(';
      tree_string(*n.lhs, out);
      out += ',';
      tree_string(*n.rhs, out);
      out += ')';
      return;
  }
}

inline std::string render(const Node& n) {
  std::string s;
  render(n, s);
  return s;
}

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number: return a.number == b.number;
    case NodeKind::Variable:
    case NodeKind::Pi: return true;
    case NodeKind::Negate: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr e = expr();
    skip_space();
    if (pos_ < src_.size()) {
      throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "', expected operator or end of input");
    }
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) throw SyntaxError(p_.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, std::string("expected '") + c + "' but reached end of input");
    if (src_[pos_] != c) throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    ++pos_;
  }

  NodePtr expr() {
    DepthGuard guard(*this);
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Node::make_binary(NodeKind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Node::make_binary(NodeKind::Subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  // A leading minus negates the whole product: -a*b/c == -(a*b/c).
  NodePtr term() {
    DepthGuard guard(*this);
    if (accept('-')) return Node::make_unary(NodeKind::Negate, term());
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Node::make_binary(NodeKind::Multiply, lhs, factor());
      } else if (accept('/')) {
        lhs = Node::make_binary(NodeKind::Divide, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  // Right-associative power; a minus here covers operands like 2*-x and x^-2.
  NodePtr factor() {
    DepthGuard guard(*this);
    if (accept('-')) return Node::make_unary(NodeKind::Negate, factor());
    NodePtr base = primary();
    if (accept('^')) return Node::make_binary(NodeKind::Power, base, factor());
    return base;
  }

  NodePtr primary() {
    DepthGuard guard(*this);
    skip_space();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "expected operand but reached end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c + "', expected number, 'x', 'pi', function or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw SyntaxError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[p]))) {
        throw SyntaxError(p, "malformed exponent in number");
      }
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
      pos_ = p;
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) throw SyntaxError(start, "number out of range");
    return Node::make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return Node::make_leaf(NodeKind::Variable);
    if (name == "pi") return Node::make_leaf(NodeKind::Pi);
    const auto f = lookup_function(name);
    if (!f) throw UnknownIdentifier(start, std::string(name));
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return Node::make_call(*f, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

[[noreturn]] inline void domain_failure(const Node& n, double x, const std::string& what) {
  throw DomainError(what + " in '" + render(n) + "' at x = " + format_number(x));
}

[[noreturn]] inline void derivative_failure(const Node& n, double x, const std::string& what) {
  throw DerivativeUndefined(what + " in '" + render(n) + "' at x = " + format_number(x));
}

inline bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

inline double power(const Node& n, double base, double exponent, double x, EvalFlags* flags) {
  if (base == 0.0 && exponent == 0.0) {
    if (flags) flags->zero_pow_zero = true;
    return 1.0;
  }
  if (base == 0.0 && exponent < 0.0) domain_failure(n, x, "zero raised to a negative power");
  if (base < 0.0 && !is_integer(exponent)) domain_failure(n, x, "fractional power of a negative base");
  return std::pow(base, exponent);
}

inline double eval(const Node& n, double x, EvalFlags* flags) {
  double r = 0.0;
  switch (n.kind) {
    case NodeKind::Number: return n.number;
    case NodeKind::Variable: return x;
    case NodeKind::Pi: return std::numbers::pi;
    case NodeKind::Negate: return -eval(*n.lhs, x, flags);
    case NodeKind::Add: r = eval(*n.lhs, x, flags) + eval(*n.rhs, x, flags); break;
    case NodeKind::Subtract: r = eval(*n.lhs, x, flags) - eval(*n.rhs, x, flags); break;
    case NodeKind::Multiply: r = eval(*n.lhs, x, flags) * eval(*n.rhs, x, flags); break;
    case NodeKind::Divide: {
      const double num = eval(*n.lhs, x, flags);
      const double den = eval(*n.rhs, x, flags);
      if (den == 0.0) domain_failure(n, x, "division by zero");
      r = num / den;
      break;
    }
    case NodeKind::Power:
      r = power(n, eval(*n.lhs, x, flags), eval(*n.rhs, x, flags), x, flags);
      break;
    case NodeKind::Call: {
      const double u = eval(*n.lhs, x, flags);
      switch (n.function) {
        case Function::Exp: r = std::exp(u); break;
        case Function::Log:
          if (u <= 0.0) domain_failure(n, x, "logarithm of a non-positive argument");
          r = std::log(u);
          break;
        case Function::Sqrt:
          if (u < 0.0) domain_failure(n, x, "square root of a negative argument");
          r = std::sqrt(u);
          break;
        case Function::Sin: r = std::sin(u); break;
        case Function::Cos: r = std::cos(u); break;
        case Function::Tan: r = std::tan(u); break;
        case Function::Atan: r = std::atan(u); break;
        case Function::Abs: r = std::abs(u); break;
        case Function::Gamma:
          try {
            r = special::gamma(u);
          } catch (const DomainError&) {
            domain_failure(n, x, "gamma pole");
          }
          break;
      }
      break;
    }
  }
  if (std::isnan(r)) domain_failure(n, x, "undefined value");
  return r;
}

inline Jet2 power_jet(const Node& n, const Jet2& u, const Jet2& v, double x) {
  if (!n.rhs->depends_on_x) {
    const double c = v.value;
    if (c == 0.0) return Jet2::constant(1.0);
    if (c == 1.0) return u;
    if (u.value == 0.0 && c < 0.0) domain_failure(n, x, "zero raised to a negative power");
    if (u.value < 0.0 && !is_integer(c)) domain_failure(n, x, "fractional power of a negative base");
    const double f = std::pow(u.value, c);
    const double df = c * std::pow(u.value, c - 1.0);
    const double d2f = c * (c - 1.0) * std::pow(u.value, c - 2.0);
    return chain(u, f, df, d2f);
  }
  // u^v = exp(v log u) needs a positive base.
  if (u.value < 0.0) domain_failure(n, x, "variable power of a negative base");
  if (u.value == 0.0) derivative_failure(n, x, "variable power of a zero base");
  const Jet2 log_u = chain(u, std::log(u.value), 1.0 / u.value, -1.0 / (u.value * u.value));
  const Jet2 w = v * log_u;
  const double e = std::exp(w.value);
  return chain(w, e, e, e);
}

inline Jet2 eval_jet2(const Node& n, double x) {
  Jet2 r;
  switch (n.kind) {
    case NodeKind::Number: return Jet2::constant(n.number);
    case NodeKind::Variable: return Jet2::variable(x);
    case NodeKind::Pi: return Jet2::constant(std::numbers::pi);
    case NodeKind::Negate: return -eval_jet2(*n.lhs, x);
    case NodeKind::Add: r = eval_jet2(*n.lhs, x) + eval_jet2(*n.rhs, x); break;
    case NodeKind::Subtract: r = eval_jet2(*n.lhs, x) - eval_jet2(*n.rhs, x); break;
    case NodeKind::Multiply: r = eval_jet2(*n.lhs, x) * eval_jet2(*n.rhs, x); break;
    case NodeKind::Divide: {
      const Jet2 num = eval_jet2(*n.lhs, x);
      const Jet2 den = eval_jet2(*n.rhs, x);
      if (den.value == 0.0) domain_failure(n, x, "division by zero");
      r = num / den;
      break;
    }
    case NodeKind::Power: r = power_jet(n, eval_jet2(*n.lhs, x), eval_jet2(*n.rhs, x), x); break;
    case NodeKind::Call: {
      const Jet2 u = eval_jet2(*n.lhs, x);
      const double a = u.value;
      switch (n.function) {
        case Function::Exp: {
          const double e = std::exp(a);
          r = chain(u, e, e, e);
          break;
        }
        case Function::Log:
          if (a <= 0.0) domain_failure(n, x, "logarithm of a non-positive argument");
          r = chain(u, std::log(a), 1.0 / a, -1.0 / (a * a));
          break;
        case Function::Sqrt: {
          if (a < 0.0) domain_failure(n, x, "square root of a negative argument");
          if (a == 0.0) derivative_failure(n, x, "square root at zero");
          const double s = std::sqrt(a);
          r = chain(u, s, 0.5 / s, -0.25 / (s * a));
          break;
        }
        case Function::Sin: r = chain(u, std::sin(a), std::cos(a), -std::sin(a)); break;
        case Function::Cos: r = chain(u, std::cos(a), -std::sin(a), -std::cos(a)); break;
        case Function::Tan: {
          const double t = std::tan(a);
          const double sec2 = 1.0 + t * t;
          r = chain(u, t, sec2, 2.0 * t * sec2);
          break;
        }
        case Function::Atan: {
          const double q = 1.0 / (1.0 + a * a);
          r = chain(u, std::atan(a), q, -2.0 * a * q * q);
          break;
        }
        case Function::Abs:
          if (a == 0.0) derivative_failure(n, x, "abs is not differentiable at zero");
          r = chain(u, std::abs(a), a > 0.0 ? 1.0 : -1.0, 0.0);
          break;
        case Function::Gamma: {
          double g = 0.0, psi = 0.0, psi1 = 0.0;
          try {
            g = special::gamma(a);
            psi = special::digamma(a);
            psi1 = special::trigamma(a);
          } catch (const DomainError&) {
            domain_failure(n, x, "gamma pole");
          }
          r = chain(u, g, g * psi, g * (psi * psi + psi1));
          break;
        }
      }
      break;
    }
  }
  if (std::isnan(r.value)) domain_failure(n, x, "undefined value");
  if (!r.finite()) derivative_failure(n, x, "non-finite derivative");
  return r;
}

inline NodePtr substitute(const NodePtr& n, const NodePtr& replacement) {
  switch (n->kind) {
    case NodeKind::Number:
    case NodeKind::Pi: return n;
    case NodeKind::Variable: return replacement;
    case NodeKind::Negate: return Node::make_unary(NodeKind::Negate, substitute(n->lhs, replacement));
    case NodeKind::Call: return Node::make_call(n->function, substitute(n->lhs, replacement));
    default:
      return Node::make_binary(n->kind, substitute(n->lhs, replacement),
                               substitute(n->rhs, replacement));
  }
}

}  // namespace detail

/// Immutable parsed expression in the single variable x.
class Expression {
 public:
  static Expression parse(std::string_view source) {
    return Expression(detail::Parser(source).parse(), std::string(source));
  }

  double eval(double x, EvalFlags* flags = nullptr) const { return detail::eval(*root_, x, flags); }
  Jet2 eval_jet2(double x) const { return detail::eval_jet2(*root_, x); }

  const std::string& source() const { return source_; }
  const Node& root() const { return *root_; }

  /// Canonical fully parenthesised text; parses back to an identical tree.
  std::string render() const { return detail::render(*root_); }

  /// Prefix form such as exp(neg(div(pow(x,2),2))).
  std::string tree_string() const {
    std::string s;
    detail::tree_string(*root_, s);
    return s;
  }

  /// this(inner(x)).
  Expression compose(const Expression& inner) const {
    NodePtr r = detail::substitute(root_, inner.root_);
    std::string text = detail::render(*r);
    return Expression(std::move(r), std::move(text));
  }

  bool depends_on_x() const { return root_->depends_on_x; }

  friend bool operator==(const Expression& a, const Expression& b) {
    return detail::structurally_equal(*a.root_, *b.root_);
  }

 private:
  Expression(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

  NodePtr root_;
  std::string source_;
};

inline Expression parse(std::string_view source) { return Expression::parse(source); }
inline double eval(const Expression& e, double x) { return e.eval(x); }
inline Jet2 eval_jet2(const Expression& e, double x) { return e.eval_jet2(x); }

}  // namespace boundstate
