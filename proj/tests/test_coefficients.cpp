#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wsp/coefficients.hpp"
#include "wsp/study.hpp"

using namespace wsp;

namespace {

PhaseProblem problem(const char *f, const char *g, double a, double b,
                     int n = 2) {
  PhaseProblem p;
  p.f = Expr::parse(f);
  p.g = Expr::parse(g);
  p.alpha = a;
  p.beta = b;
  p.M = b - a;
  p.n = n;
  return p;
}

real frac(long long num, long long den) { return real(num) / den; }

void check_close(const std::vector<real> &got, const std::vector<real> &want,
                 const real &tol) {
  REQUIRE(got.size() >= want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    INFO("k = " << k << ", got " << to_double(got[k]) << ", want "
                << to_double(want[k]));
    CHECK(abs(got[k] - want[k]) <= tol * std::max(real(1), abs(want[k])));
  }
}

Hypothesis stationary_failure(const PhaseProblem &p) {
  try {
    find_stationary_point(p);
  } catch (const HypothesisError &e) {
    return e.kind();
  }
  FAIL("expected a hypothesis failure");
  return Hypothesis::no_sign_change;
}

// lambda_0..lambda_{order+2} with |lambda_k / lambda_2| <= 0.3, |eta_k| <= 1.
struct RandomSet {
  std::vector<real> lambda, eta;
};

RandomSet random_set(std::mt19937_64 &rng, int order) {
  std::uniform_real_distribution<double> ratio(-0.3, 0.3), unit(-1, 1),
      scale(0.2, 5);
  RandomSet s;
  const real lambda2 = scale(rng);
  s.lambda.assign(static_cast<std::size_t>(order) + 3, real(0));
  s.lambda[2] = lambda2;
  for (int k = 3; k <= order + 2; ++k)
    s.lambda[static_cast<std::size_t>(k)] = lambda2 * ratio(rng);
  s.eta.resize(static_cast<std::size_t>(order) + 1);
  for (auto &v : s.eta)
    v = unit(rng);
  return s;
}

} // namespace

TEST_CASE("stationary point of a quadratic") {
  CHECK(find_stationary_point(problem("x^2", "1", -1, 1)) == 0);
  const real gamma = find_stationary_point(problem("(x-0.3)^2 + x^3/10", "1", -1, 1));
  // f' = 2(x - 0.3) + 0.3 x^2 = 0
  const real c("0.3");
  const real root = (-2 + sqrt(4 + 8 * c * c)) / (2 * c);
  CHECK(abs(gamma - root) < real(1e-30));
}

TEST_CASE("stationary point hypotheses") {
  CHECK(stationary_failure(problem("100*(x + x^2/10)", "1", 1, 2)) ==
        Hypothesis::no_sign_change);
  CHECK(stationary_failure(problem("cos(2*pi*x)", "1", 0.2, 1.3)) ==
        Hypothesis::multiple_sign_changes);
  CHECK(stationary_failure(problem("x^2", "1", 0, 1)) ==
        Hypothesis::stationary_at_endpoint);
  CHECK(stationary_failure(problem("(x - 1e-12)^2", "1", 0, 1)) ==
        Hypothesis::stationary_at_endpoint);
}

TEST_CASE("taylor data") {
  const PhaseProblem p = problem("x^2+x^3", "1", -0.25, 0.25);
  const TaylorData td = taylor_data(p, real(0));
  CHECK(td.lambda.size() == 7);
  CHECK(td.lambda[2] == 1);
  CHECK(td.lambda[3] == 1);
  for (std::size_t k = 4; k < td.lambda.size(); ++k)
    CHECK(td.lambda[k] == 0);
  CHECK(td.eta[0] == 1);
  for (std::size_t k = 1; k < td.eta.size(); ++k)
    CHECK(td.eta[k] == 0);

  PhaseProblem q = problem("T*x^2", "1", -1, 1);
  q.params["T"] = 50;
  CHECK(taylor_data(q, real(0)).lambda[2] == 50);

  const PhaseProblem flat = problem("x^4/4", "1", -1, 1);
  CHECK(find_stationary_point(flat) == 0);
  CHECK_THROWS_AS(taylor_data(flat, real(0)), HypothesisError);
}

TEST_CASE("amplitude series for lambda_2 = lambda_3 = 1, g = 1") {
  const std::vector<real> lambda{0, 0, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<real> eta{1, 0, 0, 0, 0, 0, 0, 0};
  const AmplitudeSeries s = amplitude_series(lambda, eta, 7);
  check_close(s.varpi,
              {1, -1, frac(15, 8), -4, frac(1155, 128), -21, frac(51051, 1024), -120},
              real(1e-30));
  const std::vector<real> x_of_y{0, 1, frac(-1, 2), frac(5, 8), -1,
                                 frac(231, 128), frac(-7, 2), frac(7293, 1024)};
  for (int k = 0; k <= 7; ++k)
    CHECK(abs(s.x_of_y[k] - x_of_y[static_cast<std::size_t>(k)]) < real(1e-30));
  CHECK(s.rho[0] == 1);
  // g = 1, so rho and varpi coincide.
  check_close(s.rho, s.varpi, real(1e-32));
}

TEST_CASE("amplitude series with a non-constant weight") {
  // g = 1/(1+x^2) at gamma = 0
  const std::vector<real> lambda{0, 0, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<real> eta{1, 0, -1, 0, 1, 0, -1, 0};
  const AmplitudeSeries s = amplitude_series(lambda, eta, 7);
  check_close(s.varpi,
              {1, -1, frac(7, 8), -2, frac(723, 128), -14, frac(34067, 1024), -80},
              real(1e-30));
}

TEST_CASE("pure quadratic phase leaves the weight untouched") {
  const std::vector<real> lambda{0, 0, 4, 0, 0, 0, 0};
  const std::vector<real> eta{real(2.5), 0, 0, 0, 0};
  const AmplitudeSeries s = amplitude_series(lambda, eta, 4);
  check_close(s.varpi, {real(2.5), 0, 0, 0, 0}, real(1e-32));
  check_close(s.rho, {1, 0, 0, 0, 0}, real(1e-32));

  const RecursionCoefficients r = recursion_coefficients(lambda, eta, 4);
  for (std::size_t j = 1; j < r.mu.size(); ++j) {
    CHECK(r.mu[j][0] == 1);
    for (std::size_t k = 1; k < r.mu[j].size(); ++k)
      CHECK(r.mu[j][k] == 0);
  }
  check_close(r.eta_prime, eta, real(1e-32));
  check_close(r.varpi_check, eta, real(1e-32));
}

TEST_CASE("recursion route on lambda_2 = lambda_3 = 1") {
  const std::vector<real> lambda{0, 0, 1, 1, 0, 0, 0};
  const std::vector<real> eta{1, 0, 0, 0, 0};
  const RecursionCoefficients r = recursion_coefficients(lambda, eta, 4);
  CHECK(r.mu[1][1] == frac(1, 2));
  CHECK(r.mu[2][1] == 1);
  CHECK(r.mu[1][2] == frac(-1, 8));
  check_close(r.varpi_check, {1, -1, frac(15, 8), -4, frac(1155, 128)},
              real(1e-30));
}

TEST_CASE("structural invariants of the coefficient set") {
  PhaseProblem p = problem("x^2 + x^3/3 + sin(x)^4", "exp(x)/(2+x)", -0.5, 0.7, 3);
  const CoefficientSet cs = compute_coefficients(p);
  CHECK(cs.orientation == Orientation::min);
  CHECK(cs.lambda[2] > 0);
  const real g_gamma = BoundProblem(p).g(cs.gamma);
  CHECK(abs(cs.varpi[0] - g_gamma) < real(1e-30));
  CHECK(abs(cs.eta_prime[0] - g_gamma) < real(1e-30));
  CHECK(abs(cs.eta_prime[1] - cs.eta[1]) < real(1e-30));
  CHECK(cs.rho[0] == 1);
  for (std::size_t j = 1; j < cs.mu.size(); ++j)
    CHECK(cs.mu[j][0] == 1);
  check_close(cs.varpi_check, cs.varpi, real(1e-28));
}

TEST_CASE("a maximum is expanded through -f") {
  const CoefficientSet up = compute_coefficients(problem("x^2+x^3", "1/(1+x^2)", -0.25, 0.25));
  const CoefficientSet down = compute_coefficients(problem("-(x^2+x^3)", "1/(1+x^2)", -0.25, 0.25));
  CHECK(down.orientation == Orientation::max);
  CHECK(down.lambda[2] == -1);
  check_close(down.varpi, up.varpi, real(1e-30));
}

TEST_CASE("both routes agree on random coefficient sets") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const int order = 2 * n;
    const RandomSet s = random_set(rng, order);
    const AmplitudeSeries a = amplitude_series(s.lambda, s.eta, order);
    const RecursionCoefficients r = recursion_coefficients(s.lambda, s.eta, order);
    for (int k = 0; k <= order; ++k) {
      const real v = a.varpi[static_cast<std::size_t>(k)];
      const real w = r.varpi_check[static_cast<std::size_t>(k)];
      CHECK(abs(v - w) <= real(1e-10) * std::max(real(1), abs(v)));
    }
    check_close(r.rho, a.rho, real(1e-25));
  }
}

TEST_CASE("reflection maps varpi_k to (-1)^k varpi_k") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int order = 2 * (1 + trial % 4);
    RandomSet s = random_set(rng, order);
    const AmplitudeSeries a = amplitude_series(s.lambda, s.eta, order);
    for (std::size_t k = 0; k < s.lambda.size(); ++k)
      if (k % 2)
        s.lambda[k] = -s.lambda[k];
    for (std::size_t k = 0; k < s.eta.size(); ++k)
      if (k % 2)
        s.eta[k] = -s.eta[k];
    const AmplitudeSeries b = amplitude_series(s.lambda, s.eta, order);
    for (int k = 0; k <= order; ++k) {
      const real v = a.varpi[static_cast<std::size_t>(k)];
      const real w = (k % 2 ? real(-1) : real(1)) * b.varpi[static_cast<std::size_t>(k)];
      CHECK(abs(v - w) <= real(1e-10) * std::max(real(1), abs(v)));
    }
  }
}

TEST_CASE("reflected problem has alternating coefficients") {
  PhaseProblem p = problem("x^2 + x^3 + x^4/5", "exp(x)", -0.3, 0.4);
  PhaseProblem q = problem("x^2 - x^3 + x^4/5", "exp(-x)", -0.4, 0.3);
  const CoefficientSet a = compute_coefficients(p);
  const CoefficientSet b = compute_coefficients(q);
  for (std::size_t k = 0; k < a.varpi.size(); ++k) {
    const real w = (k % 2 ? real(-1) : real(1)) * b.varpi[k];
    CHECK(abs(a.varpi[k] - w) <= real(1e-10) * std::max(real(1), abs(w)));
  }
}

TEST_CASE("coefficient size stays moderate") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const int order = 8;
    RandomSet s = random_set(rng, order);
    for (std::size_t k = 3; k < s.lambda.size(); ++k)
      s.lambda[k] /= s.lambda[2];
    s.lambda[2] = 1;
    const AmplitudeSeries a = amplitude_series(s.lambda, s.eta, order);
    for (int k = 0; k <= order; ++k)
      CHECK(abs(a.varpi[static_cast<std::size_t>(k)]) <= real(100) * 2);
  }
}

TEST_CASE("residual Q") {
  PhaseProblem quad = problem("x^2", "1 + x - x^2/3 + x^4", -1, 1, 2);
  const CoefficientSet cq = compute_coefficients(quad);
  for (double y : {-0.3, -0.01, 0.02, 0.5})
    CHECK(abs(residual_Q(quad, cq, real(y))) < real(1e-12));
  CHECK_THROWS_AS(residual_Q(quad, cq, real(0)), std::invalid_argument);
  CHECK_THROWS_AS(residual_Q(quad, cq, real(2)), std::domain_error);

  for (int n : {1, 2}) {
    PhaseProblem p = problem("x^2+x^3", "1", -0.25, 0.25, n);
    const CoefficientSet cs = compute_coefficients(p);
    std::vector<double> xs, ys;
    for (int e = 4; e <= 12; ++e) {
      const real y = real(0.02) / real(1 << e);
      xs.push_back(std::log(to_double(y)));
      ys.push_back(std::log(to_double(abs(residual_Q(p, cs, y)))));
    }
    CHECK(fit_slope(xs, ys) >= 2 * n + 1 - 0.2);
  }
}

TEST_CASE("substitution point solves f(x) - f(gamma) = lambda_2 y^2") {
  PhaseProblem p = problem("x^2+x^3", "1", -0.25, 0.25);
  const CoefficientSet cs = compute_coefficients(p);
  const BoundProblem bp(p);
  for (double y : {-0.1, -1e-6, 1e-6, 0.1}) {
    const real x = substitution_point(p, cs, real(y));
    CHECK((x > cs.gamma) == (y > 0));
    CHECK(abs(bp.f(x) - real(y) * real(y)) < real(1e-32));
  }
}
