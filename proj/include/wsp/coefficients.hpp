#pragma once

#include <string>
#include <vector>

#include "wsp/jet.hpp"
#include "wsp/problem.hpp"
#include "wsp/real.hpp"

namespace wsp {

/// Result of scanning a sampled function for sign changes.
struct SignScan {
  int changes = 0;
  /// Bracketing sample pairs, one per sign change.
  std::vector<std::pair<real, real>> brackets;
  bool zero_at_alpha = false;
  bool zero_at_beta = false;
  bool all_zero = false;
};

/// Sign changes of f' (order 1) or f'' (order 2) on the problem's grid.
SignScan scan_phase_derivative(const PhaseProblem &p, int order);

/// The unique interior zero of f'. Bisection on the bracketing grid cell,
/// then Newton steps with f'' from jets.
real find_stationary_point(const PhaseProblem &p);

struct TaylorData {
  /// lambda[k] = f^(k)(gamma)/k! for k = 0..2n+2 (lambda[1] is ~0).
  std::vector<real> lambda;
  /// eta[k] = g^(k)(gamma)/k! for k = 0..2n.
  std::vector<real> eta;
};

TaylorData taylor_data(const PhaseProblem &p, const real &gamma);

/// Series route: y = t sqrt(1 + sum_{k>=3} (lambda_k/lambda_2) t^{k-2}),
/// reverted to t(y), differentiated to dx/dy, and multiplied by g(x(y)).
struct AmplitudeSeries {
  Jet<real> x_of_y; ///< x - gamma as a series in y, degree `order`
  std::vector<real> rho;   ///< dx/dy = sum rho_k y^k
  std::vector<real> varpi; ///< g(x) dx/dy = sum varpi_k y^k
};

/// lambda indexed as in TaylorData (needs entries up to order+2), eta up to
/// order. Requires lambda_2 > 0.
AmplitudeSeries amplitude_series(const std::vector<real> &lambda,
                                 const std::vector<real> &eta, int order);

/// Recursion route: mu_{jk} from the (j/2)-th power of the bracket series,
/// eta'_m solved from eta_m = sum_{k+l=m} eta'_k mu_{kl}, rho from
/// dx/dy = (y/t) / (f'(x)/(2 lambda_2 t)) re-expanded in y by the same
/// triangular solve, and varpi_k = sum_l eta'_l rho_{k-l}.
struct RecursionCoefficients {
  /// mu[j][k], j = 0..order+1, k = 0..order; mu[0] is the unit series.
  std::vector<std::vector<real>> mu;
  std::vector<real> eta_prime;
  std::vector<real> rho;
  std::vector<real> varpi_check;
};

RecursionCoefficients recursion_coefficients(const std::vector<real> &lambda,
                                             const std::vector<real> &eta,
                                             int order);

enum class Orientation { min, max };

struct CoefficientSet {
  real gamma = 0;
  Orientation orientation = Orientation::min;
  /// Taylor data of f and g at gamma, as given (lambda_2 < 0 for max).
  std::vector<real> lambda;
  std::vector<real> eta;
  std::vector<real> rho;
  std::vector<std::vector<real>> mu;
  std::vector<real> eta_prime;
  std::vector<real> varpi;
  std::vector<real> varpi_check;
  Jet<real> x_of_y;
};

/// Both coefficient routes at the stationary point, order 2n. For a maximum
/// the series are built from -f, which leaves x(y) and varpi unchanged.
CoefficientSet compute_coefficients(const PhaseProblem &p);

/// x with f(x) - f(gamma) = lambda_2 y^2 on the side of gamma given by the
/// sign of y. Safeguarded Newton to working precision; throws
/// std::domain_error when y is outside the substitution's range.
real substitution_point(const PhaseProblem &p, const CoefficientSet &cs,
                        const real &y);

/// Q(y) = g(x) dx/dy - sum_{k<=2n} varpi_k y^k, dx/dy = 2 lambda_2 y / f'(x).
/// Rejects y = 0.
real residual_Q(const PhaseProblem &p, const CoefficientSet &cs,
                const real &y);

} // namespace wsp
