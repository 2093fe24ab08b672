#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsp/coefficients.hpp"
#include "wsp/problem.hpp"
#include "wsp/real.hpp"

namespace wsp {

enum class Theorem { fdt, wsp };

struct ExpansionResult {
  complex value;
  complex main_term;
  complex boundary_alpha; ///< e(f(alpha)) sum_i H_i(alpha)
  complex boundary_beta;  ///< e(f(beta)) sum_i H_i(beta)
  /// Terms j = 0..n of the main-term sum, prefactor included.
  std::vector<complex> per_order_main;
  /// Sum of the O-term magnitudes with unit implied constants. A diagnostic
  /// scale, not a certified bound.
  real error_scale = 0;
  std::vector<real> error_terms;
  Orientation orientation = Orientation::min;
  Theorem theorem = Theorem::wsp;
  std::optional<CoefficientSet> coefficients;
  std::vector<std::string> warnings;
};

/// H_1(x0)..H_count(x0) of H_1 = g/(2 pi i f'), H_i = -H_{i-1}'/(2 pi i f').
std::vector<complex> boundary_terms(const PhaseProblem &p, const real &x0,
                                    int count);

/// e(f(x0)) * sum_{i<=count} H_i(x0).
complex boundary_value(const PhaseProblem &p, const real &x0, int count);

/// Boundary-term expansion for a phase without stationary points:
/// [e(f) sum_{i=1}^{n} H_i] from alpha to beta.
ExpansionResult first_derivative_test(const PhaseProblem &p);

/// The three O-terms of the first-derivative test with unit constants.
std::array<real, 3> fdt_error_terms(const PhaseProblem &p,
                                    const real &min_abs_fprime);

/// n-th order stationary phase: main term from varpi_0..varpi_2n plus
/// boundary terms H_1..H_{n+1} at both endpoints. A maximum (f'' < 0) is
/// handled as the conjugate of the problem with -f.
ExpansionResult stationary_phase_expand(const PhaseProblem &p);

/// The four O-terms of the stationary phase expansion with unit constants,
/// in order: boundary/N^{n+2}, (gamma-alpha)^{-(2n+3)}, N^{-2n}, interior.
std::array<real, 4> error_scale_terms(const PhaseProblem &p,
                                      const real &gamma);

/// (2j-1)!! with the empty product for j = 0.
long long double_factorial_odd(int j);

struct AuditReport {
  std::map<int, real> C_f; ///< r = 2..2n+3
  std::map<int, real> C_g; ///< s = 0..2n+1
  bool C2_lower_ok = true;
  real Delta = 0;
  real validity_product = 0; ///< T^{1/(2n+3)} Delta
  bool validity_ok = false;
  std::optional<real> gamma;
  real r1 = std::numeric_limits<real>::quiet_NaN();
  real r2 = std::numeric_limits<real>::quiet_NaN();
  real r = std::numeric_limits<real>::quiet_NaN();
  bool M_ok = true;
  bool fpp_constant_sign = true;
  std::string sign_profile;
  std::vector<std::string> abs_kinks;
};

/// Fits the hypothesis constants on the sample grid and derives Delta, the
/// validity condition and the substitution radius r = min{r1, r2, Delta M}.
AuditReport hypothesis_audit(const PhaseProblem &p);

} // namespace wsp
