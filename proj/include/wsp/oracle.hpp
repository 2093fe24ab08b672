#pragma once

#include <stdexcept>
#include <vector>

#include "wsp/expr.hpp"
#include "wsp/problem.hpp"
#include "wsp/real.hpp"

namespace wsp {

struct QuadratureSettings {
  real tol = real(1e-14); ///< absolute; below 1e-14 is rejected
  long max_panels = 1L << 24;
  int nodes_per_panel = 12; ///< Gauss-Legendre order, at least 8
};

struct QuadratureResult {
  complex value;
  long panels = 0;   ///< panels of the accepted level
  int doublings = 0; ///< refinements needed to meet tol
};

/// Non-convergence or an unattainable tolerance.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Direct quadrature of g(x) e(f(x)) over [alpha, beta]: panels with at most
/// half a unit of phase variation (split at sign changes of f'), fixed-order
/// Gauss-Legendre per panel, and panel doubling until two successive levels
/// agree to tol. Independent of any asymptotic machinery.
QuadratureResult oscillatory_quadrature(const PhaseProblem &p,
                                        const QuadratureSettings &s = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<real> &nodes,
                    std::vector<real> &weights);

/// Central-difference estimates of e^(k)(x0), k = 1..order (order <= 6),
/// with one Richardson step. Step h_k = eps^{1/(k+2)} max(1, |x0|) with eps
/// the double machine epsilon, unless h > 0 is given.
std::vector<double> fd_derivatives(const Expr &e, double x0, int order,
                                   double h = 0, const Params &params = {});

struct ReversionFit {
  std::vector<real> coefficients; ///< estimates of varpi_0..varpi_order
  real condition = 0;             ///< of the scaled least-squares system
  real radius = 0;                ///< sampling half-width r/8
};

/// Brute-force varpi: samples G(y) = g(x) 2 lambda_2 y / f'(x) at Chebyshev
/// nodes on [-r/8, r/8], x(y) solved numerically, and fits a polynomial of
/// degree order + 2 by least squares. r comes from the hypothesis audit
/// unless radius > 0 is given.
ReversionFit numeric_reversion_oracle(const PhaseProblem &p, const real &gamma,
                                      int order, const real &radius = 0);

} // namespace wsp
