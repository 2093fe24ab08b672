#include "wsp/expansion.hpp"

#include <algorithm>
#include <sstream>

namespace wsp {

namespace {

const complex kI(real(0), real(1));

real ipow(const real &base, int e) {
  real r = 1;
  for (int i = 0; i < e; ++i)
    r *= base;
  return r;
}

std::string fmt(const real &v) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(v);
  return os.str();
}

// The weight vanishes on every sample; every O-term carries a factor U and
// U = 0 is admissible then.
bool weight_vanishes(const PhaseProblem &p) {
  const BoundProblem bp(p);
  for (const real &x : sample_grid(p))
    if (bp.g(x) != 0)
      return false;
  return true;
}

ExpansionResult conjugated(ExpansionResult r) {
  r.value = std::conj(r.value);
  r.main_term = std::conj(r.main_term);
  r.boundary_alpha = std::conj(r.boundary_alpha);
  r.boundary_beta = std::conj(r.boundary_beta);
  for (auto &c : r.per_order_main)
    c = std::conj(c);
  return r;
}

void append_audit_warnings(const AuditReport &a, ExpansionResult &r) {
  if (!a.validity_ok)
    r.warnings.push_back("validity condition T^{1/(2n+3)} Delta > 1 fails (" +
                         fmt(a.validity_product) + ")");
  if (!a.M_ok)
    r.warnings.push_back("M < beta - alpha");
  if (!a.fpp_constant_sign)
    r.warnings.push_back("f'' changes sign on [alpha, beta]");
  for (const auto &k : a.abs_kinks)
    r.warnings.push_back(k);
}

} // namespace

long long double_factorial_odd(int j) {
  long long v = 1;
  for (int k = 1; k <= j; ++k)
    v *= 2 * k - 1;
  return v;
}

std::vector<complex> boundary_terms(const PhaseProblem &p, const real &x0,
                                    int count) {
  if (count < 1)
    return {};
  const BoundProblem bp(p);
  const Jet<real> fp = differentiate(bp.f_jet(x0, count));
  if (abs(fp[0]) <= real(1e-12) * p.T / p.M)
    throw HypothesisError(Hypothesis::vanishing_derivative,
                          "f' vanishes at x = " + fmt(x0));
  // H_i = K_i / (2 pi i)^i with real jets K_1 = g/f', K_i = -K_{i-1}'/f'.
  Jet<real> k = bp.g_jet(x0, std::max(count, 1)).truncated(count - 1) /
                fp.truncated(count - 1);
  const complex step = real(1) / (2 * pi() * kI);
  complex factor = step;
  std::vector<complex> out;
  out.push_back(factor * k[0]);
  for (int i = 2; i <= count; ++i) {
    k = -differentiate(k) / fp.truncated(k.degree() - 1);
    factor *= step;
    out.push_back(factor * k[0]);
  }
  return out;
}

complex boundary_value(const PhaseProblem &p, const real &x0, int count) {
  complex sum(0);
  for (const complex &h : boundary_terms(p, x0, count))
    sum += h;
  const BoundProblem bp(p);
  return unit_phase(bp.f(x0)) * sum;
}

std::array<real, 3> fdt_error_terms(const PhaseProblem &p,
                                    const real &min_abs_fprime) {
  const int n = p.n;
  const real &m = min_abs_fprime;
  const real &M = p.M, &N = p.N, &T = p.T, &U = p.U;
  auto inner = [&](int j, int t_from) {
    real s = 0;
    for (int t = t_from; t <= n - j; ++t)
      s += 1 / (ipow(N, n - j - t) * ipow(M, t));
    return s;
  };
  real t1 = 0;
  for (int j = 1; j <= n / 2; ++j)
    t1 += U * ipow(T, j) / (ipow(m, n + j + 1) * ipow(M, 2 * j)) * inner(j, j);
  t1 *= M / N;
  const real t2 = (M / N + 1) * U / (ipow(N, n) * ipow(m, n + 1));
  real t3 = 0;
  for (int j = 1; j <= n; ++j)
    t3 += U * ipow(T, j) / (ipow(m, n + j + 1) * ipow(M, 2 * j)) * inner(j, 0);
  return {t1, t2, t3};
}

ExpansionResult first_derivative_test(const PhaseProblem &p) {
  validate(p);
  const SignScan first = scan_phase_derivative(p, 1);
  if (first.changes > 0)
    throw HypothesisError(Hypothesis::phase_not_monotone,
                          "f' changes sign on [alpha, beta]; use the "
                          "stationary phase expansion");
  const SignScan second = scan_phase_derivative(p, 2);

  ExpansionResult r;
  r.theorem = Theorem::fdt;
  r.boundary_alpha = boundary_value(p, p.alpha, p.n);
  r.boundary_beta = boundary_value(p, p.beta, p.n);
  r.main_term = complex(0);
  r.value = r.boundary_beta - r.boundary_alpha;

  const BoundProblem bp(p);
  real min_fp = std::min(abs(bp.f_prime(p.alpha)), abs(bp.f_prime(p.beta)));
  if (second.changes > 0) {
    r.warnings.push_back("f'' changes sign; min |f'| taken over the grid");
    for (const real &x : sample_grid(p))
      min_fp = std::min(min_fp, abs(bp.f_prime(x)));
  }
  if (weight_vanishes(p)) {
    r.error_terms = {0, 0, 0};
  } else {
    const auto terms = fdt_error_terms(p, min_fp);
    r.error_terms.assign(terms.begin(), terms.end());
  }
  for (const real &t : r.error_terms)
    r.error_scale += t;
  return r;
}

std::array<real, 4> error_scale_terms(const PhaseProblem &p,
                                      const real &gamma) {
  const real a = gamma - p.alpha;
  const real b = p.beta - gamma;
  if (!(a > 0) || !(b > 0))
    throw HypothesisError(Hypothesis::stationary_at_endpoint,
                          "stationary point must lie inside (alpha, beta)");
  const int n = p.n;
  const real &M = p.M, &N = p.N, &T = p.T, &U = p.U;
  auto both = [&](int e) { return 1 / ipow(a, e) + 1 / ipow(b, e); };
  const real t1 = U * ipow(M, 2 * n + 5) / (ipow(T, n + 2) * ipow(N, n + 2)) *
                  both(n + 2);
  const real t2 = U * ipow(M, 2 * n + 4) / ipow(T, n + 2) * both(2 * n + 3);
  const real t3 = U * ipow(M, 2 * n + 4) / (ipow(T, n + 2) * ipow(N, 2 * n)) *
                  both(3);
  const real t4 = U / ipow(T, n + 1) * (ipow(M, 2 * n + 2) / ipow(N, 2 * n + 1) + M);
  return {t1, t2, t3, t4};
}

ExpansionResult stationary_phase_expand(const PhaseProblem &p) {
  validate(p);
  const real gamma = find_stationary_point(p);
  const real width = p.beta - p.alpha;
  if (gamma - p.alpha < real(1e-6) * width ||
      p.beta - gamma < real(1e-6) * width)
    throw HypothesisError(Hypothesis::stationary_too_close_to_endpoint,
                          "stationary point within 1e-6 (beta - alpha) of an "
                          "endpoint");
  {
    const BoundProblem bp(p);
    if (bp.f_second(gamma) < 0) {
      ExpansionResult r = conjugated(stationary_phase_expand(negated_phase(p)));
      r.orientation = Orientation::max;
      return r;
    }
  }

  ExpansionResult r;
  r.theorem = Theorem::wsp;
  r.orientation = Orientation::min;
  const CoefficientSet cs = compute_coefficients(p);
  const real lambda2 = cs.lambda[2];

  const complex prefactor =
      unit_phase(cs.lambda[0] + real(1) / 8) / sqrt(2 * lambda2);
  const complex denom_step = 4 * pi() * kI * lambda2;
  complex denom(1);
  r.main_term = complex(0);
  for (int j = 0; j <= p.n; ++j) {
    const real sign = (j % 2 == 0) ? 1 : -1;
    const complex term = prefactor * cs.varpi[static_cast<std::size_t>(2 * j)] *
                         sign * real(double_factorial_odd(j)) / denom;
    r.per_order_main.push_back(term);
    r.main_term += term;
    denom *= denom_step;
  }

  r.boundary_alpha = boundary_value(p, p.alpha, p.n + 1);
  r.boundary_beta = boundary_value(p, p.beta, p.n + 1);
  r.value = r.main_term + r.boundary_beta - r.boundary_alpha;

  if (weight_vanishes(p)) {
    r.error_terms = {0, 0, 0, 0};
  } else {
    const auto terms = error_scale_terms(p, gamma);
    r.error_terms.assign(terms.begin(), terms.end());
  }
  for (const real &t : r.error_terms)
    r.error_scale += t;

  if (p.n == 1)
    r.warnings.push_back("n = 1 is below the order range n >= 2 of the error "
                         "estimate");
  append_audit_warnings(hypothesis_audit(p), r);
  r.coefficients = cs;
  return r;
}

AuditReport hypothesis_audit(const PhaseProblem &p) {
  validate(p);
  const BoundProblem bp(p);
  const auto xs = sample_grid(p);
  const int n = p.n;
  const int f_degree = 2 * n + 3;
  const int g_degree = 2 * n + 1;

  AuditReport a;
  for (int r = 2; r <= f_degree; ++r)
    a.C_f[r] = 0;
  for (int s = 0; s <= g_degree; ++s)
    a.C_g[s] = 0;

  real lower = 0;
  for (const real &x : xs) {
    const Jet<real> fj = bp.f_jet(x, f_degree);
    for (int r = 2; r <= f_degree; ++r)
      a.C_f[r] = std::max(a.C_f[r], abs(fj.derivative(r)) * ipow(p.M, r) / p.T);
    const real fpp = fj.derivative(2);
    if (fpp > 0)
      lower = std::max(lower, p.T / (p.M * p.M * fpp));
    else
      a.C2_lower_ok = false;

    const Jet<real> gj = bp.g_jet(x, g_degree);
    for (int s = 0; s <= g_degree; ++s)
      a.C_g[s] = std::max(a.C_g[s], abs(gj.derivative(s)) * ipow(p.N, s) / p.U);
  }
  a.C_f[2] = std::max(a.C_f[2], lower);

  const real C2 = a.C_f[2];
  real c_max = 0;
  for (const auto &[r, c] : a.C_f)
    c_max = std::max(c_max, c);
  a.Delta = std::min(log(real(2)) / C2, 1 / (C2 * C2 * c_max));
  a.validity_product = pow(p.T, real(1) / f_degree) * a.Delta;
  a.validity_ok = a.validity_product > 1;
  a.M_ok = p.M >= p.beta - p.alpha;

  const SignScan first = scan_phase_derivative(p, 1);
  const SignScan second = scan_phase_derivative(p, 2);
  a.fpp_constant_sign = second.changes == 0;
  if (first.all_zero) {
    a.sign_profile = "f' vanishes on the grid";
  } else if (first.changes == 0) {
    a.sign_profile = "f' of constant sign";
    if (first.zero_at_alpha || first.zero_at_beta)
      a.sign_profile += ", zero at an endpoint";
  } else if (first.changes == 1) {
    const real x = (first.brackets[0].first + first.brackets[0].second) / 2;
    a.sign_profile = std::string("one sign change (") +
                     (bp.f_prime(first.brackets[0].first) < 0 ? "- to +"
                                                               : "+ to -") +
                     ") near x = " + fmt(x);
  } else {
    a.sign_profile = std::to_string(first.changes) + " sign changes";
  }

  try {
    const real gamma = find_stationary_point(p);
    a.gamma = gamma;
    const real f_gamma = bp.f(gamma);
    const real lambda2 = bp.f_second(gamma) / 2;
    a.r1 = sqrt((bp.f(p.alpha) - f_gamma) / lambda2);
    a.r2 = sqrt((bp.f(p.beta) - f_gamma) / lambda2);
    a.r = std::min({a.r1, a.r2, a.Delta * p.M});
  } catch (const HypothesisError &) {
  }

  std::vector<Expr> kinked = p.f.abs_arguments();
  for (Expr &e : p.g.abs_arguments())
    kinked.push_back(std::move(e));
  for (const Expr &arg : kinked) {
    const BoundExpr be(arg, p.params);
    int last = 0;
    for (const real &x : xs) {
      const real v = be(x);
      const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s != 0 && last != 0 && s != last) {
        a.abs_kinks.push_back("abs(" + arg.format() +
                              ") has a kink inside [alpha, beta]");
        break;
      }
      if (s != 0)
        last = s;
    }
  }
  return a;
}

} // namespace wsp
