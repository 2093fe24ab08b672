#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsp/jet.hpp"
#include "wsp/real.hpp"

namespace wsp {

using Params = std::map<std::string, real, std::less<>>;

/// Syntax error, positioned at a byte offset of the source text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Unbound symbol or domain violation; offset points at the offending node.
class EvalError : public std::runtime_error {
public:
  EvalError(const std::string &what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) +
                           ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

enum class Func { exp, log, sin, cos, sqrt, abs, atan };

struct Node {
  enum class Kind { number, symbol, negate, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  std::string text; // literal text for numbers, name for symbols
  Func func = Func::exp;
  std::vector<Node> args;
  std::size_t offset = 0;
};

/// Immutable parsed expression in x and named scalar parameters.
///
/// Grammar (lowest to highest precedence): + - (left), * / (left), unary -,
/// ^ (right). Functions: exp log sin cos sqrt abs atan. The symbol `pi` is
/// predefined unless a parameter of that name is bound.
class Expr {
public:
  static Expr parse(std::string_view text);

  const Node &root() const { return *root_; }
  const std::string &source() const { return source_; }

  /// Fully parenthesized text that re-parses to an equivalent tree.
  std::string format() const;

  /// Every symbol referenced, including "x".
  std::set<std::string> symbols() const;
  bool uses(std::string_view symbol) const;

  /// The argument of each abs() call, for kink detection.
  std::vector<Expr> abs_arguments() const;

  /// Negation -e, sharing nothing with e.
  Expr negated() const;

private:
  explicit Expr(Node root, std::string source);
  std::shared_ptr<const Node> root_;
  std::string source_;
};

/// An expression with its parameters resolved, flattened into a stack
/// program. Evaluate over double, real, or jets of either.
class BoundExpr {
public:
  BoundExpr(const Expr &e, const Params &params);

  template <class T> T operator()(const T &x) const;

  struct Instr {
    enum class Op { constant, var, neg, add, sub, mul, div, pow_const, pow, call };
    Op op = Op::constant;
    real value = 0;
    Func func = Func::exp;
    std::size_t offset = 0;
  };

private:
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

extern template double BoundExpr::operator()(const double &) const;
extern template real BoundExpr::operator()(const real &) const;
extern template Jet<double> BoundExpr::operator()(const Jet<double> &) const;
extern template Jet<real> BoundExpr::operator()(const Jet<real> &) const;

double eval_real(const Expr &e, double x, const Params &params);

template <class T>
Jet<T> eval_jet(const Expr &e, const Jet<T> &x, const Params &params) {
  return BoundExpr(e, params)(x);
}

} // namespace wsp
