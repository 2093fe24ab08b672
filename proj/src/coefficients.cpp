#include "wsp/coefficients.hpp"

#include <cmath>
#include <limits>

namespace wsp {

namespace {

int sign_of(const real &v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

real epsilon() { return std::numeric_limits<real>::epsilon(); }

void check_inputs(const std::vector<real> &lambda, const std::vector<real> &eta,
                  int order) {
  if (order < 1)
    throw std::invalid_argument("coefficient order must be at least 1");
  if (lambda.size() < static_cast<std::size_t>(order) + 3)
    throw std::invalid_argument("need lambda_k up to k = order + 2");
  if (eta.size() < static_cast<std::size_t>(order) + 1)
    throw std::invalid_argument("need eta_k up to k = order");
  if (!(lambda[2] > 0))
    throw std::invalid_argument("lambda_2 must be positive");
}

// 1 + sum_{m=1}^{order} scale(m) * lambda_{m+2}/lambda_2 t^m
Jet<real> bracket_series(const std::vector<real> &lambda, int order,
                         bool derivative_form) {
  Jet<real> b = Jet<real>::constant(real(1), order);
  for (int m = 1; m <= order; ++m) {
    real c = lambda[static_cast<std::size_t>(m + 2)] / lambda[2];
    if (derivative_form)
      c *= real(m + 2) / 2;
    b[m] = c;
  }
  return b;
}

// Re-expands a t-series in powers of y using y^k = t^k sum_l mu_{kl} t^l:
// a_m = sum_{k=1}^{m} b_k mu_{k,m-k}, solved for b by forward substitution.
std::vector<real> to_y_powers(const std::vector<real> &a,
                              const std::vector<std::vector<real>> &mu) {
  std::vector<real> b(a.size(), real(0));
  if (a.empty())
    return b;
  b[0] = a[0];
  for (std::size_t m = 1; m < a.size(); ++m) {
    real s = a[m];
    for (std::size_t k = 1; k < m; ++k)
      s -= b[k] * mu[k][m - k];
    b[m] = s;
  }
  return b;
}

std::vector<real> to_vector(const Jet<real> &j, int order) {
  std::vector<real> out(static_cast<std::size_t>(order) + 1, real(0));
  for (int k = 0; k <= std::min(order, j.degree()); ++k)
    out[static_cast<std::size_t>(k)] = j[k];
  return out;
}

} // namespace

SignScan scan_phase_derivative(const PhaseProblem &p, int order) {
  const BoundProblem bp(p);
  const auto xs = sample_grid(p);
  std::vector<int> signs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    signs[i] = sign_of(bp.f_jet(xs[i], order).derivative(order));

  SignScan scan;
  scan.zero_at_alpha = signs.front() == 0;
  scan.zero_at_beta = signs.back() == 0;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == 0)
      continue;
    if (last >= 0 && signs[static_cast<std::size_t>(last)] != signs[i]) {
      ++scan.changes;
      scan.brackets.emplace_back(xs[static_cast<std::size_t>(last)], xs[i]);
    }
    last = static_cast<std::ptrdiff_t>(i);
  }
  scan.all_zero = last < 0;
  return scan;
}

real find_stationary_point(const PhaseProblem &p) {
  validate(p);
  const SignScan scan = scan_phase_derivative(p, 1);
  if (scan.all_zero)
    throw HypothesisError(Hypothesis::no_sign_change,
                          "f' vanishes on the whole sample grid");
  if (scan.changes > 1)
    throw HypothesisError(Hypothesis::multiple_sign_changes,
                          "f' changes sign " + std::to_string(scan.changes) +
                              " times on [alpha, beta]");
  if (scan.changes == 0) {
    if (scan.zero_at_alpha || scan.zero_at_beta)
      throw HypothesisError(Hypothesis::stationary_at_endpoint,
                            "f' vanishes at an endpoint");
    throw HypothesisError(Hypothesis::no_sign_change,
                          "f' does not change sign on [alpha, beta]");
  }

  const BoundProblem bp(p);
  real lo = scan.brackets[0].first;
  real hi = scan.brackets[0].second;
  const int lo_sign = sign_of(bp.f_prime(lo));
  for (int it = 0; it < 400; ++it) {
    const real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi)
      break;
    const int s = sign_of(bp.f_prime(mid));
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    (s == lo_sign ? lo : hi) = mid;
  }
  real gamma = (lo + hi) / 2;
  // Newton polish: bisection stalls at the last ulp of the bracket.
  for (int it = 0; it < 3; ++it) {
    const Jet<real> j = bp.f_jet(gamma, 2);
    const real fp = j[1];
    const real fpp = 2 * j[2];
    if (fp == 0 || fpp == 0)
      break;
    const real next = gamma - fp / fpp;
    if (abs(bp.f_prime(next)) >= abs(fp))
      break;
    gamma = next;
  }

  const real width = p.beta - p.alpha;
  if (gamma - p.alpha <= real(1e-9) * width ||
      p.beta - gamma <= real(1e-9) * width)
    throw HypothesisError(Hypothesis::stationary_at_endpoint,
                          "stationary point within 1e-9 (beta - alpha) of an "
                          "endpoint");
  return gamma;
}

TaylorData taylor_data(const PhaseProblem &p, const real &gamma) {
  const BoundProblem bp(p);
  const int order = 2 * p.n;
  const Jet<real> fj = bp.f_jet(gamma, order + 2);
  const Jet<real> gj = bp.g_jet(gamma, order);
  TaylorData td;
  td.lambda = to_vector(fj, order + 2);
  td.eta = to_vector(gj, order);
  if (abs(td.lambda[2]) <= real(1e-12) * p.T / (p.M * p.M))
    throw HypothesisError(Hypothesis::degenerate_stationary_point,
                          "f''(gamma) vanishes");
  return td;
}

AmplitudeSeries amplitude_series(const std::vector<real> &lambda,
                                 const std::vector<real> &eta, int order) {
  check_inputs(lambda, eta, order);
  const int degree = order + 1;

  // y(t) = t * sqrt(bracket(t)), known through t^{order+1}.
  const Jet<real> root = sqrt(bracket_series(lambda, order, false));
  Jet<real> y = Jet<real>::constant(real(0), degree);
  for (int k = 0; k <= order; ++k)
    y[k + 1] = root[k];

  const Jet<real> x_of_y = revert(y);
  const Jet<real> rho = differentiate(x_of_y);

  Jet<real> g_series = Jet<real>::constant(real(0), order);
  for (int k = 0; k <= order; ++k)
    g_series[k] = eta[static_cast<std::size_t>(k)];
  const Jet<real> g_of_y = compose(g_series, x_of_y.truncated(order));

  AmplitudeSeries out;
  out.x_of_y = x_of_y.truncated(order);
  out.rho = to_vector(rho, order);
  out.varpi = to_vector(g_of_y * rho, order);
  return out;
}

RecursionCoefficients recursion_coefficients(const std::vector<real> &lambda,
                                             const std::vector<real> &eta,
                                             int order) {
  check_inputs(lambda, eta, order);
  const Jet<real> bracket = bracket_series(lambda, order, false);

  RecursionCoefficients out;
  out.mu.resize(static_cast<std::size_t>(order) + 2);
  out.mu[0] = to_vector(Jet<real>::constant(real(1), order), order);
  for (int j = 1; j <= order + 1; ++j)
    out.mu[static_cast<std::size_t>(j)] =
        to_vector(pow(bracket, real(j) / 2), order);

  const std::vector<real> eta_x(eta.begin(), eta.begin() + order + 1);
  out.eta_prime = to_y_powers(eta_x, out.mu);

  // dx/dy as a t-series: (y/t) / (f'(x) / (2 lambda_2 t)).
  const Jet<real> slope = bracket_series(lambda, order, true);
  const Jet<real> dxdy_t =
      Jet<real>(real(0), std::vector<real>(out.mu[1].begin(), out.mu[1].end())) /
      slope;
  out.rho = to_y_powers(to_vector(dxdy_t, order), out.mu);

  out.varpi_check.assign(static_cast<std::size_t>(order) + 1, real(0));
  for (int k = 0; k <= order; ++k)
    for (int l = 0; l <= k; ++l)
      out.varpi_check[static_cast<std::size_t>(k)] +=
          out.eta_prime[static_cast<std::size_t>(l)] *
          out.rho[static_cast<std::size_t>(k - l)];
  return out;
}

CoefficientSet compute_coefficients(const PhaseProblem &p) {
  CoefficientSet cs;
  cs.gamma = find_stationary_point(p);
  TaylorData td = taylor_data(p, cs.gamma);
  cs.lambda = td.lambda;
  cs.eta = td.eta;
  cs.orientation = td.lambda[2] > 0 ? Orientation::min : Orientation::max;

  std::vector<real> lambda = td.lambda;
  if (cs.orientation == Orientation::max)
    for (auto &v : lambda)
      v = -v;
  const int order = 2 * p.n;
  const AmplitudeSeries series = amplitude_series(lambda, td.eta, order);
  RecursionCoefficients rec = recursion_coefficients(lambda, td.eta, order);
  cs.x_of_y = series.x_of_y;
  cs.rho = series.rho;
  cs.varpi = series.varpi;
  cs.mu = std::move(rec.mu);
  cs.eta_prime = std::move(rec.eta_prime);
  cs.varpi_check = std::move(rec.varpi_check);
  return cs;
}

real substitution_point(const PhaseProblem &p, const CoefficientSet &cs,
                        const real &y) {
  const BoundProblem bp(p);
  const real lambda2 = cs.lambda[2];
  const real f_gamma = cs.lambda[0];
  const real target = lambda2 * y * y;
  auto residual = [&](const real &x) { return bp.f(x) - f_gamma - target; };

  real lo = cs.gamma;
  real hi = y > 0 ? p.beta : p.alpha;
  const int lo_sign = sign_of(-target);
  if (sign_of(residual(hi)) == lo_sign)
    throw std::domain_error("y outside the range of the substitution");

  auto inside = [&](const real &x) {
    return (x - lo) * (x - hi) < 0;
  };
  real x = cs.gamma + y;
  if (!inside(x))
    x = (lo + hi) / 2;
  for (int it = 0; it < 400; ++it) {
    const Jet<real> j = bp.f_jet(x, 1);
    const real r = j[0] - f_gamma - target;
    const int s = sign_of(r);
    if (s == 0)
      return x;
    (s == lo_sign ? lo : hi) = x;
    real next = j[1] != 0 ? x - r / j[1] : x;
    if (!inside(next))
      next = (lo + hi) / 2;
    const real step = abs(next - x);
    x = next;
    if (step <= 8 * epsilon() * abs(x - cs.gamma))
      return x;
    if (lo == hi)
      return x;
  }
  throw std::domain_error("substitution did not converge");
}

real residual_Q(const PhaseProblem &p, const CoefficientSet &cs,
                const real &y) {
  if (y == 0)
    throw std::invalid_argument("residual_Q is defined for y != 0 only");
  const BoundProblem bp(p);
  const real x = substitution_point(p, cs, y);
  const real dxdy = 2 * cs.lambda[2] * y / bp.f_prime(x);
  real poly = 0;
  for (auto it = cs.varpi.rbegin(); it != cs.varpi.rend(); ++it)
    poly = poly * y + *it;
  return bp.g(x) * dxdy - poly;
}

} // namespace wsp
