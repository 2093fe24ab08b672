#pragma once

#include <stdexcept>
#include <string>

#include "wsp/expr.hpp"
#include "wsp/jet.hpp"
#include "wsp/real.hpp"

namespace wsp {

/// The integral of g(x) e(f(x)) over [alpha, beta] together with the size
/// parameters of the derivative hypotheses:
///   |f^(r)| <= C_r T / M^r,  f'' >= T / (C_2 M^2),  |g^(s)| <= C_s U / N^s.
struct PhaseProblem {
  Expr f = Expr::parse("x");
  Expr g = Expr::parse("1");
  real alpha = 0;
  real beta = 1;
  Params params;
  real M = 1;
  real N = 1;
  real T = 1;
  real U = 1;
  int n = 2;
  /// Samples used for sign scans and constant fitting.
  int grid = 512;
};

/// Throws std::invalid_argument for malformed problems (empty interval,
/// non-positive scales, n < 1, grid < 2). M >= beta - alpha is a hypothesis
/// and is reported by the audit instead.
void validate(const PhaseProblem &p);

/// The same integral with f replaced by -f; its value is the complex
/// conjugate of the original one for real g.
PhaseProblem negated_phase(const PhaseProblem &p);

enum class Hypothesis {
  no_sign_change,
  multiple_sign_changes,
  stationary_at_endpoint,
  degenerate_stationary_point,
  stationary_too_close_to_endpoint,
  phase_not_monotone,
  vanishing_derivative,
};

const char *to_string(Hypothesis h);

/// A problem violates the hypotheses of the requested expansion.
class HypothesisError : public std::runtime_error {
public:
  HypothesisError(Hypothesis kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Hypothesis kind() const { return kind_; }

private:
  Hypothesis kind_;
};

/// f and g bound to the problem's parameters.
class BoundProblem {
public:
  explicit BoundProblem(const PhaseProblem &p);

  real f(const real &x) const { return f_(x); }
  real g(const real &x) const { return g_(x); }
  Jet<real> f_jet(const real &x, int degree) const {
    return f_(Jet<real>::variable(x, degree));
  }
  Jet<real> g_jet(const real &x, int degree) const {
    return g_(Jet<real>::variable(x, degree));
  }
  real f_prime(const real &x) const { return f_jet(x, 1)[1]; }
  real f_second(const real &x) const { return f_jet(x, 2).derivative(2); }

private:
  BoundExpr f_;
  BoundExpr g_;
};

/// The problem's uniform sample grid, alpha and beta included.
std::vector<real> sample_grid(const PhaseProblem &p);

} // namespace wsp
