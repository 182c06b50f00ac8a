#include "hodgedirac/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace hodgedirac {

struct Expression::Node {
  enum class Kind { Number, VarX, VarY, Pi, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt };

  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Kind kind, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  return n;
}

NodePtr unary(Kind kind, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(child);
  return n;
}

NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

int precedence(Kind kind) {
  switch (kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;  // atoms and function calls
  }
}

double eval_node(const Node& node, double x, double y) {
  switch (node.kind) {
    case Kind::Number: return node.value;
    case Kind::VarX: return x;
    case Kind::VarY: return y;
    case Kind::Pi: return std::numbers::pi;
    case Kind::Add: return eval_node(*node.lhs, x, y) + eval_node(*node.rhs, x, y);
    case Kind::Sub: return eval_node(*node.lhs, x, y) - eval_node(*node.rhs, x, y);
    case Kind::Mul: return eval_node(*node.lhs, x, y) * eval_node(*node.rhs, x, y);
    case Kind::Div: {
      const double denom = eval_node(*node.rhs, x, y);
      if (denom == 0.0) throw EvalError("division by zero");
      return eval_node(*node.lhs, x, y) / denom;
    }
    case Kind::Pow: {
      const double result = std::pow(eval_node(*node.lhs, x, y), eval_node(*node.rhs, x, y));
      if (!std::isfinite(result)) throw EvalError("power out of range");
      return result;
    }
    case Kind::Neg: return -eval_node(*node.lhs, x, y);
    case Kind::Sin: return std::sin(eval_node(*node.lhs, x, y));
    case Kind::Cos: return std::cos(eval_node(*node.lhs, x, y));
    case Kind::Exp: {
      const double result = std::exp(eval_node(*node.lhs, x, y));
      if (!std::isfinite(result)) throw EvalError("exp overflow");
      return result;
    }
    case Kind::Sqrt: {
      const double arg = eval_node(*node.lhs, x, y);
      if (arg < 0.0) throw EvalError("sqrt of a negative value");
      return std::sqrt(arg);
    }
  }
  throw EvalError("corrupt expression tree");
}

void print_node(const Node& node, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_paren_on_tie, std::string& out) {
  const int child_prec = precedence(child.kind);
  const bool paren = child_prec < parent_prec || (child_prec == parent_prec && needs_paren_on_tie);
  if (paren) out += '(';
  print_node(child, out);
  if (paren) out += ')';
}

void print_node(const Node& node, std::string& out) {
  switch (node.kind) {
    case Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", node.value);
      out += buf;
      return;
    }
    case Kind::VarX: out += 'x'; return;
    case Kind::VarY: out += 'y'; return;
    case Kind::Pi: out += "pi"; return;
    case Kind::Add:
      print_child(*node.lhs, 1, false, out);
      out += '+';
      print_child(*node.rhs, 1, true, out);
      return;
    case Kind::Sub:
      print_child(*node.lhs, 1, false, out);
      out += '-';
      print_child(*node.rhs, 1, true, out);
      return;
    case Kind::Mul:
      print_child(*node.lhs, 2, false, out);
      out += '*';
      print_child(*node.rhs, 2, true, out);
      return;
    case Kind::Div:
      print_child(*node.lhs, 2, false, out);
      out += '/';
      print_child(*node.rhs, 2, true, out);
      return;
    case Kind::Pow:
      print_child(*node.lhs, 4, true, out);  // right-assoc: parenthesize left on tie
      out += '^';
      print_child(*node.rhs, 4, false, out);
      return;
    case Kind::Neg:
      out += '-';
      print_child(*node.lhs, 3, false, out);
      return;
    case Kind::Sin: out += "sin("; print_node(*node.lhs, out); out += ')'; return;
    case Kind::Cos: out += "cos("; print_node(*node.lhs, out); out += ')'; return;
    case Kind::Exp: out += "exp("; print_node(*node.lhs, out); out += ')'; return;
    case Kind::Sqrt: out += "sqrt("; print_node(*node.lhs, out); out += ')'; return;
  }
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Number && a.value != b.value) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal_nodes(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal_nodes(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace

class ExpressionParser {
 public:
  // Owns a copy so number parsing can rely on null termination.
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr tree = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "end of input or an operator");
    return tree;
  }

 private:
  std::string text_;
  size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool take(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // sum := term (('+'|'-') term)*
  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (take('+'))
        lhs = binary(Kind::Add, std::move(lhs), parse_term());
      else if (take('-'))
        lhs = binary(Kind::Sub, std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  // term := factor (('*'|'/') factor)*
  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (take('*'))
        lhs = binary(Kind::Mul, std::move(lhs), parse_factor());
      else if (take('/'))
        lhs = binary(Kind::Div, std::move(lhs), parse_factor());
      else
        return lhs;
    }
  }

  // factor := '-' factor | power.  Unary minus binds below '^', so -x^2
  // parses as -(x^2).
  NodePtr parse_factor() {
    if (take('-')) return unary(Kind::Neg, parse_factor());
    return parse_power();
  }

  // power := atom ('^' factor)?   (right-associative, signed exponents ok)
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (take('^')) return binary(Kind::Pow, std::move(base), parse_factor());
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "a number, variable, function or '('");
    const char c = text_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!take(')')) throw ParseError(pos_, "')'");
      return inner;
    }
    throw ParseError(pos_, "a number, variable, function or '('");
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw ParseError(pos_, "a number");
    pos_ += static_cast<size_t>(end - begin);
    return leaf(Kind::Number, value);
  }

  NodePtr parse_word() {
    const size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string word = text_.substr(start, pos_ - start);

    if (word == "x") return leaf(Kind::VarX);
    if (word == "y") return leaf(Kind::VarY);
    if (word == "pi") return leaf(Kind::Pi);

    Kind kind;
    if (word == "sin") kind = Kind::Sin;
    else if (word == "cos") kind = Kind::Cos;
    else if (word == "exp") kind = Kind::Exp;
    else if (word == "sqrt") kind = Kind::Sqrt;
    else throw ParseError(start, "'x', 'y', 'pi', 'sin', 'cos', 'exp' or 'sqrt'");

    if (!take('(')) throw ParseError(pos_, "'(' after function name");
    NodePtr arg = parse_sum();
    if (!take(')')) throw ParseError(pos_, "')'");
    return unary(kind, std::move(arg));
  }
};

Expression Expression::parse(std::string_view text) {
  if (text.empty()) throw ParseError(0, "a nonempty expression");
  return Expression(ExpressionParser(text).run());
}

double Expression::operator()(double x, double y) const {
  return eval_node(*root_, x, y);
}

std::string Expression::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expression::operator==(const Expression& other) const {
  return equal_nodes(*root_, *other.root_);
}

}  // namespace hodgedirac
