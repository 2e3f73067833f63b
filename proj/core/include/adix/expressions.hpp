#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <type_traits>

#include "adix/identifier.hpp"

namespace adix {

/// Anything that can stand on the right-hand side of an active assignment:
/// ActiveReal leaves and the expression nodes built from them.
template <class E>
concept Expression = requires { typename std::remove_cvref_t<E>::expression_tag; };

namespace detail {

template <class E>
struct IsLeaf : std::false_type {};

/// Leaves are held by reference, inner nodes by value.
template <class E>
using Stored = std::conditional_t<IsLeaf<E>::value, const E&, const E>;

/// Collects the (partial, identifier) pairs of the active leaves of one
/// right-hand side.
template <std::size_t N>
struct LeafBuffer {
  std::array<double, N> partials{};
  std::array<Identifier, N> ids{};
  std::size_t size = 0;

  void push(double partial, Identifier id) {
    partials[size] = partial;
    ids[size] = id;
    size += 1;
  }
};

template <class Op, class Arg>
class UnaryExpr {
 public:
  using expression_tag = void;
  using tape_type = typename Arg::tape_type;
  static constexpr std::size_t kLeafCount = Arg::kLeafCount;

  UnaryExpr(const Arg& arg, double param) : arg_(arg), param_(param), value_(Op::primal(arg.value(), param)) {}

  double value() const { return value_; }

  template <class Sink>
  void push_leaves(Sink& sink, double multiplier) const {
    arg_.push_leaves(sink, multiplier * Op::derivative(arg_.value(), value_, param_));
  }

 private:
  Stored<Arg> arg_;
  double param_;
  double value_;
};

template <class Op, class Lhs, class Rhs>
class BinaryExpr {
 public:
  using expression_tag = void;
  using tape_type = typename Lhs::tape_type;
  static constexpr std::size_t kLeafCount = Lhs::kLeafCount + Rhs::kLeafCount;

  BinaryExpr(const Lhs& lhs, const Rhs& rhs) : lhs_(lhs), rhs_(rhs), value_(Op::primal(lhs.value(), rhs.value())) {}

  double value() const { return value_; }

  template <class Sink>
  void push_leaves(Sink& sink, double multiplier) const {
    lhs_.push_leaves(sink, multiplier * Op::left(lhs_.value(), rhs_.value(), value_));
    rhs_.push_leaves(sink, multiplier * Op::right(lhs_.value(), rhs_.value(), value_));
  }

 private:
  Stored<Lhs> lhs_;
  Stored<Rhs> rhs_;
  double value_;
};

// Binary operations. left/right receive both primal arguments and the result.
struct Add {
  static double primal(double a, double b) { return a + b; }
  static double left(double, double, double) { return 1.0; }
  static double right(double, double, double) { return 1.0; }
};
struct Sub {
  static double primal(double a, double b) { return a - b; }
  static double left(double, double, double) { return 1.0; }
  static double right(double, double, double) { return -1.0; }
};
struct Mul {
  static double primal(double a, double b) { return a * b; }
  static double left(double, double b, double) { return b; }
  static double right(double a, double, double) { return a; }
};
struct Div {
  static double primal(double a, double b) { return a / b; }
  static double left(double, double b, double) { return 1.0 / b; }
  static double right(double, double b, double r) { return -r / b; }
};

// Unary operations, optionally with a passive parameter c.
struct AddConst {
  static double primal(double x, double c) { return x + c; }
  static double derivative(double, double, double) { return 1.0; }
};
struct SubFromConst {  // c - x
  static double primal(double x, double c) { return c - x; }
  static double derivative(double, double, double) { return -1.0; }
};
struct MulConst {
  static double primal(double x, double c) { return x * c; }
  static double derivative(double, double, double c) { return c; }
};
struct DivByConst {  // x / c
  static double primal(double x, double c) { return x / c; }
  static double derivative(double, double, double c) { return 1.0 / c; }
};
struct DivConstBy {  // c / x
  static double primal(double x, double c) { return c / x; }
  static double derivative(double x, double r, double) { return -r / x; }
};
struct Neg {
  static double primal(double x, double) { return -x; }
  static double derivative(double, double, double) { return -1.0; }
};
struct Sin {
  static double primal(double x, double) { return std::sin(x); }
  static double derivative(double x, double, double) { return std::cos(x); }
};
struct Cos {
  static double primal(double x, double) { return std::cos(x); }
  static double derivative(double x, double, double) { return -std::sin(x); }
};
struct Tanh {
  static double primal(double x, double) { return std::tanh(x); }
  static double derivative(double, double r, double) { return 1.0 - r * r; }
};
struct Exp {
  static double primal(double x, double) { return std::exp(x); }
  static double derivative(double, double r, double) { return r; }
};
struct Log {
  static double primal(double x, double) { return std::log(x); }
  static double derivative(double x, double, double) { return 1.0 / x; }
};
struct Sqrt {
  static double primal(double x, double) { return std::sqrt(x); }
  static double derivative(double, double r, double) { return 0.5 / r; }
};
struct Abs {
  static double primal(double x, double) { return std::abs(x); }
  static double derivative(double x, double, double) { return x < 0.0 ? -1.0 : 1.0; }
};
struct PowConst {
  static double primal(double x, double c) { return std::pow(x, c); }
  static double derivative(double x, double, double c) { return c * std::pow(x, c - 1.0); }
};

template <class L, class R>
concept SameTape = std::same_as<typename std::remove_cvref_t<L>::tape_type, typename std::remove_cvref_t<R>::tape_type>;

}  // namespace detail

#define ADIX_BINARY_OPERATOR(OP, NAME)                                           \
  template <Expression L, Expression R>                                          \
    requires detail::SameTape<L, R>                                              \
  auto OP(const L& lhs, const R& rhs) {                                          \
    return detail::BinaryExpr<detail::NAME, L, R>(lhs, rhs);                     \
  }

ADIX_BINARY_OPERATOR(operator+, Add)
ADIX_BINARY_OPERATOR(operator-, Sub)
ADIX_BINARY_OPERATOR(operator*, Mul)
ADIX_BINARY_OPERATOR(operator/, Div)

#undef ADIX_BINARY_OPERATOR

template <Expression E>
auto operator+(const E& x, double c) { return detail::UnaryExpr<detail::AddConst, E>(x, c); }
template <Expression E>
auto operator+(double c, const E& x) { return detail::UnaryExpr<detail::AddConst, E>(x, c); }
template <Expression E>
auto operator-(const E& x, double c) { return detail::UnaryExpr<detail::AddConst, E>(x, -c); }
template <Expression E>
auto operator-(double c, const E& x) { return detail::UnaryExpr<detail::SubFromConst, E>(x, c); }
template <Expression E>
auto operator*(const E& x, double c) { return detail::UnaryExpr<detail::MulConst, E>(x, c); }
template <Expression E>
auto operator*(double c, const E& x) { return detail::UnaryExpr<detail::MulConst, E>(x, c); }
template <Expression E>
auto operator/(const E& x, double c) { return detail::UnaryExpr<detail::DivByConst, E>(x, c); }
template <Expression E>
auto operator/(double c, const E& x) { return detail::UnaryExpr<detail::DivConstBy, E>(x, c); }
template <Expression E>
auto operator-(const E& x) { return detail::UnaryExpr<detail::Neg, E>(x, 0.0); }
template <Expression E>
const E& operator+(const E& x) { return x; }

#define ADIX_UNARY_FUNCTION(FUNC, NAME)                                   \
  template <Expression E>                                                 \
  auto FUNC(const E& x) {                                                 \
    return detail::UnaryExpr<detail::NAME, E>(x, 0.0);                    \
  }

ADIX_UNARY_FUNCTION(sin, Sin)
ADIX_UNARY_FUNCTION(cos, Cos)
ADIX_UNARY_FUNCTION(tanh, Tanh)
ADIX_UNARY_FUNCTION(exp, Exp)
ADIX_UNARY_FUNCTION(log, Log)
ADIX_UNARY_FUNCTION(sqrt, Sqrt)
ADIX_UNARY_FUNCTION(abs, Abs)
ADIX_UNARY_FUNCTION(fabs, Abs)

#undef ADIX_UNARY_FUNCTION

template <Expression E>
auto pow(const E& x, double c) {
  return detail::UnaryExpr<detail::PowConst, E>(x, c);
}

// Relational operators look at primal values only.
template <Expression L, Expression R>
bool operator<(const L& a, const R& b) { return a.value() < b.value(); }
template <Expression L, Expression R>
bool operator>(const L& a, const R& b) { return a.value() > b.value(); }
template <Expression L, Expression R>
bool operator<=(const L& a, const R& b) { return a.value() <= b.value(); }
template <Expression L, Expression R>
bool operator>=(const L& a, const R& b) { return a.value() >= b.value(); }
template <Expression L, Expression R>
bool operator==(const L& a, const R& b) { return a.value() == b.value(); }
template <Expression L, Expression R>
bool operator!=(const L& a, const R& b) { return a.value() != b.value(); }

template <Expression E>
bool operator<(const E& a, double b) { return a.value() < b; }
template <Expression E>
bool operator<(double a, const E& b) { return a < b.value(); }
template <Expression E>
bool operator>(const E& a, double b) { return a.value() > b; }
template <Expression E>
bool operator>(double a, const E& b) { return a > b.value(); }
template <Expression E>
bool operator<=(const E& a, double b) { return a.value() <= b; }
template <Expression E>
bool operator<=(double a, const E& b) { return a <= b.value(); }
template <Expression E>
bool operator>=(const E& a, double b) { return a.value() >= b; }
template <Expression E>
bool operator>=(double a, const E& b) { return a >= b.value(); }
template <Expression E>
bool operator==(const E& a, double b) { return a.value() == b; }
template <Expression E>
bool operator!=(const E& a, double b) { return a.value() != b; }

}  // namespace adix
