#include "curvemates/expression.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>

namespace curvemates {

namespace {

using Kind = Expr::Kind;

bool is_unary(Kind k) {
  switch (k) {
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Tan:
    case Kind::Sqrt:
    case Kind::Abs:
    case Kind::Exp:
    case Kind::Log: return true;
    default: return false;
  }
}

bool is_binary(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: return true;
    default: return false;
  }
}

const char* function_name(Kind k) {
  switch (k) {
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Tan: return "tan";
    case Kind::Sqrt: return "sqrt";
    case Kind::Abs: return "abs";
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    default: return "";
  }
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->depends_on_s = true;
  return Expr(std::move(n));
}

Expr Expr::make_unary(Kind kind, Expr operand) {
  if (!is_unary(kind)) throw std::invalid_argument("not a unary node kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->depends_on_s = operand.node_->depends_on_s;
  n->lhs = std::move(operand.node_);
  return Expr(std::move(n));
}

Expr Expr::make_binary(Kind kind, Expr lhs, Expr rhs) {
  if (!is_binary(kind)) throw std::invalid_argument("not a binary node kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->depends_on_s = lhs.node_->depends_on_s || rhs.node_->depends_on_s;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->value; }
bool Expr::depends_on_s() const { return node_->depends_on_s; }

int Expr::arity() const {
  if (is_unary(node_->kind)) return 1;
  if (is_binary(node_->kind)) return 2;
  return 0;
}

Expr Expr::operand(int i) const {
  if (i < 0 || i >= arity()) throw std::out_of_range("expression operand index");
  return Expr(i == 0 ? node_->lhs : node_->rhs);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string out(buf);
  if (v < 0) return "(" + out + ")";
  return out;
}

std::string print(const Expr& e) {
  auto wrap = [](const Expr& sub, bool paren) {
    std::string inner = print(sub);
    return paren ? "(" + inner + ")" : inner;
  };
  switch (e.kind()) {
    case Kind::Number: return format_number(e.number_value());
    case Kind::Pi: return "pi";
    case Kind::Variable: return "s";
    case Kind::Neg: {
      const Expr x = e.operand(0);
      return "-" + wrap(x, precedence(x) <= 3);
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(e);
      const char* op = e.kind() == Kind::Add ? "+" : e.kind() == Kind::Sub ? "-" : e.kind() == Kind::Mul ? "*" : "/";
      const Expr l = e.operand(0);
      const Expr r = e.operand(1);
      return wrap(l, precedence(l) < p) + op + wrap(r, precedence(r) <= p);
    }
    case Kind::Pow: {
      const Expr l = e.operand(0);
      const Expr r = e.operand(1);
      return wrap(l, precedence(l) <= 4) + "^" + wrap(r, precedence(r) < 5);
    }
    default: return std::string(function_name(e.kind())) + "(" + print(e.operand(0)) + ")";
  }
}

}  // namespace

std::string Expr::to_string() const { return print(*this); }

// ---------------------------------------------------------------------------
// Simplifying builders

namespace {

bool is_const_number(const Expr& e) { return e.kind() == Kind::Number; }

Expr fold_or(Kind kind, const Expr& a, const Expr& b, double folded) {
  if (std::isfinite(folded)) return Expr::number(folded);
  return Expr::make_binary(kind, a, b);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (is_const_number(a) && is_const_number(b))
    return fold_or(Kind::Add, a, b, a.number_value() + b.number_value());
  return Expr::make_binary(Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  if (is_const_number(a) && is_const_number(b))
    return fold_or(Kind::Sub, a, b, a.number_value() - b.number_value());
  return Expr::make_binary(Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  if (is_const_number(a) && is_const_number(b))
    return fold_or(Kind::Mul, a, b, a.number_value() * b.number_value());
  return Expr::make_binary(Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_number(1.0)) return a;
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  if (is_const_number(a) && is_const_number(b) && b.number_value() != 0.0)
    return fold_or(Kind::Div, a, b, a.number_value() / b.number_value());
  return Expr::make_binary(Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (is_const_number(a)) return Expr::number(-a.number_value());
  if (a.kind() == Kind::Neg) return a.operand(0);
  return Expr::make_unary(Kind::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_number(0.0)) return Expr::number(1.0);
  if (exponent.is_number(1.0)) return base;
  if (is_const_number(base) && is_const_number(exponent)) {
    const double b = base.number_value();
    const double e = exponent.number_value();
    if (b > 0.0 || (std::floor(e) == e && b != 0.0))
      return fold_or(Kind::Pow, base, exponent, std::pow(b, e));
  }
  return Expr::make_binary(Kind::Pow, base, exponent);
}

namespace {

template <typename Fn>
Expr unary_fold(Kind kind, const Expr& e, Fn fn) {
  if (is_const_number(e)) {
    const double v = fn(e.number_value());
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::make_unary(kind, e);
}

}  // namespace

Expr sin(const Expr& e) { return unary_fold(Kind::Sin, e, [](double x) { return std::sin(x); }); }
Expr cos(const Expr& e) { return unary_fold(Kind::Cos, e, [](double x) { return std::cos(x); }); }
Expr tan(const Expr& e) { return unary_fold(Kind::Tan, e, [](double x) { return std::tan(x); }); }
Expr exp(const Expr& e) { return unary_fold(Kind::Exp, e, [](double x) { return std::exp(x); }); }
Expr abs(const Expr& e) { return unary_fold(Kind::Abs, e, [](double x) { return std::abs(x); }); }
Expr sqrt(const Expr& e) {
  return unary_fold(Kind::Sqrt, e, [](double x) { return x >= 0.0 ? std::sqrt(x) : NAN; });
}
Expr log(const Expr& e) {
  return unary_fold(Kind::Log, e, [](double x) { return x > 0.0 ? std::log(x) : NAN; });
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
  if (!e.depends_on_s()) return Expr::number(0.0);
  const Expr one = Expr::number(1.0);
  const Expr two = Expr::number(2.0);
  switch (e.kind()) {
    case Kind::Variable: return one;
    case Kind::Neg: return -differentiate(e.operand(0));
    case Kind::Sin: return cos(e.operand(0)) * differentiate(e.operand(0));
    case Kind::Cos: return -(sin(e.operand(0)) * differentiate(e.operand(0)));
    case Kind::Tan: return differentiate(e.operand(0)) / pow(cos(e.operand(0)), two);
    case Kind::Sqrt: return differentiate(e.operand(0)) / (two * e);
    case Kind::Abs: return e.operand(0) / e * differentiate(e.operand(0));
    case Kind::Exp: return e * differentiate(e.operand(0));
    case Kind::Log: return differentiate(e.operand(0)) / e.operand(0);
    case Kind::Add: return differentiate(e.operand(0)) + differentiate(e.operand(1));
    case Kind::Sub: return differentiate(e.operand(0)) - differentiate(e.operand(1));
    case Kind::Mul: {
      const Expr f = e.operand(0);
      const Expr g = e.operand(1);
      return differentiate(f) * g + f * differentiate(g);
    }
    case Kind::Div: {
      const Expr f = e.operand(0);
      const Expr g = e.operand(1);
      if (!g.depends_on_s()) return differentiate(f) / g;
      return (differentiate(f) * g - f * differentiate(g)) / pow(g, two);
    }
    case Kind::Pow: {
      const Expr f = e.operand(0);
      const Expr g = e.operand(1);
      if (!g.depends_on_s()) return g * pow(f, g - one) * differentiate(f);
      if (!f.depends_on_s()) return e * log(f) * differentiate(g);
      return e * (differentiate(g) * log(f) + g * differentiate(f) / f);
    }
    default: return Expr::number(0.0);
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("empty expression", 0);
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_here(const std::string& what) {
    if (pos_ >= text_.size()) throw SyntaxError(what + " (unexpected end of input)", pos_);
    throw SyntaxError(what + ", found '" + std::string(1, text_[pos_]) + "'", pos_);
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = Expr::make_binary(Kind::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = Expr::make_binary(Kind::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::make_binary(Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expr::make_binary(Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::make_unary(Kind::Neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::make_binary(Kind::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail_here("expected an operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) fail_here("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail_here("expected an operand");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw SyntaxError("malformed number", start);
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "s") return Expr::variable();
    if (name == "pi") return Expr::pi();
    Kind kind;
    if (name == "sin")
      kind = Kind::Sin;
    else if (name == "cos")
      kind = Kind::Cos;
    else if (name == "tan")
      kind = Kind::Tan;
    else if (name == "sqrt")
      kind = Kind::Sqrt;
    else if (name == "abs")
      kind = Kind::Abs;
    else if (name == "exp")
      kind = Kind::Exp;
    else if (name == "log")
      kind = Kind::Log;
    else
      throw SyntaxError("unknown identifier '" + std::string(name) + "'", start);
    if (!accept('(')) fail_here("expected '(' after function name '" + std::string(name) + "'");
    Expr arg = parse_sum();
    if (!accept(')')) fail_here("expected ')'");
    return Expr::make_unary(kind, arg);
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace curvemates
