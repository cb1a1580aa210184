#pragma once

#include <boost/math/constants/constants.hpp>

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "curvemates/errors.hpp"

namespace curvemates {

/// Immutable expression tree in the single variable s.
///
/// Grammar (precedence high to low): function application and parentheses,
/// `^` (right-associative), unary `-`, `*` `/`, `+` `-`. Functions: sin, cos,
/// tan, sqrt, abs, exp, log. Constants: numeric literals and `pi`.
class Expr {
 public:
  enum class Kind { Number, Pi, Variable, Neg, Sin, Cos, Tan, Sqrt, Abs, Exp, Log, Add, Sub, Mul, Div, Pow };

  Expr();  // the literal 0

  static Expr number(double value);
  static Expr pi();
  static Expr variable();
  /// Raw node constructors, no simplification.
  static Expr make_unary(Kind kind, Expr operand);
  static Expr make_binary(Kind kind, Expr lhs, Expr rhs);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] double number_value() const;
  [[nodiscard]] int arity() const;
  [[nodiscard]] Expr operand(int i) const;
  [[nodiscard]] bool depends_on_s() const;
  [[nodiscard]] bool is_number(double v) const { return kind() == Kind::Number && number_value() == v; }

  /// Evaluates at s. Throws DomainError instead of producing NaN or infinity.
  template <typename T>
  [[nodiscard]] T eval(T s) const {
    return eval_node(*node_, s);
  }

  [[nodiscard]] double operator()(double s) const { return eval<double>(s); }

  /// Re-parseable text with 17 significant digits per literal.
  [[nodiscard]] std::string to_string() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  template <typename T>
  static T eval_node(const Node& n, T s);

  template <typename T>
  [[noreturn]] static void domain_error(const Node& n, T s);
};

/// Simplifying builders: fold constants and drop 0 / 1 operands.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);

/// Parses the expression grammar. Throws SyntaxError.
Expr parse(std::string_view text);

/// Exact symbolic derivative d/ds. d|f| = (f / |f|) f' is undefined at zeros of f.
Expr differentiate(const Expr& e);

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  bool depends_on_s = false;
};

template <typename T>
void Expr::domain_error(const Node& n, T s) {
  throw DomainError(Expr(std::shared_ptr<const Node>(std::shared_ptr<const Node>{}, &n)).to_string(),
                    static_cast<double>(s));
}

template <typename T>
T Expr::eval_node(const Node& n, T s) {
  using std::abs, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt, std::tan, std::floor;
  T r(0);
  switch (n.kind) {
    case Kind::Number: return T(n.value);
    case Kind::Pi: return boost::math::constants::pi<T>();
    case Kind::Variable: return s;
    case Kind::Neg: return -eval_node(*n.lhs, s);
    case Kind::Abs: return abs(eval_node(*n.lhs, s));
    case Kind::Sin: r = sin(eval_node(*n.lhs, s)); break;
    case Kind::Cos: r = cos(eval_node(*n.lhs, s)); break;
    case Kind::Tan: r = tan(eval_node(*n.lhs, s)); break;
    case Kind::Exp: r = exp(eval_node(*n.lhs, s)); break;
    case Kind::Sqrt: {
      const T x = eval_node(*n.lhs, s);
      if (x < T(0)) domain_error(n, s);
      r = sqrt(x);
      break;
    }
    case Kind::Log: {
      const T x = eval_node(*n.lhs, s);
      if (!(x > T(0))) domain_error(n, s);
      r = log(x);
      break;
    }
    case Kind::Add: r = eval_node(*n.lhs, s) + eval_node(*n.rhs, s); break;
    case Kind::Sub: r = eval_node(*n.lhs, s) - eval_node(*n.rhs, s); break;
    case Kind::Mul: r = eval_node(*n.lhs, s) * eval_node(*n.rhs, s); break;
    case Kind::Div: {
      const T den = eval_node(*n.rhs, s);
      if (den == T(0)) domain_error(n, s);
      r = eval_node(*n.lhs, s) / den;
      break;
    }
    case Kind::Pow: {
      const T base = eval_node(*n.lhs, s);
      const T e = eval_node(*n.rhs, s);
      if (floor(e) == e) {
        if (base == T(0) && e < T(0)) domain_error(n, s);
      } else if (!(base > T(0))) {
        domain_error(n, s);
      }
      r = pow(base, e);
      break;
    }
  }
  if (!std::isfinite(static_cast<double>(r))) domain_error(n, s);
  return r;
}

}  // namespace curvemates
