#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsp/expansion.hpp"
#include "wsp/oracle.hpp"

using namespace wsp;

namespace {

PhaseProblem problem(const char *f, const char *g, double a, double b,
                     double T = 1, int n = 2) {
  PhaseProblem p;
  p.f = Expr::parse(f);
  p.g = Expr::parse(g);
  p.alpha = a;
  p.beta = b;
  p.M = b - a;
  p.T = T;
  p.params["T"] = T;
  p.n = n;
  return p;
}

const complex I(real(0), real(1));

} // namespace

TEST_CASE("boundary terms of x^2 at x = 1") {
  const PhaseProblem p = problem("x^2", "1", -1, 1);
  const auto h = boundary_terms(p, real(1), 3);
  REQUIRE(h.size() == 3);
  const real pi_ = pi();
  CHECK(abs(h[0] - (-I / (4 * pi_))) < real(1e-32));
  CHECK(abs(h[1] - complex(-1 / (16 * pi_ * pi_))) < real(1e-32));
  CHECK(abs(h[2] - real(3) * I / (64 * pi_ * pi_ * pi_)) < real(1e-32));
  CHECK(to_double(h[1].real()) == doctest::Approx(-0.00633257397764611).epsilon(1e-14));
}

TEST_CASE("second boundary term agrees with a finite difference of the first") {
  // H_1(x) = -i / (4 pi x), so H_2 = -H_1' / (2 pi i f') with H_1' from
  // central differences of 1/(4 pi x).
  const double d = fd_derivatives(Expr::parse("1/(4*pi*x)"), 1.0, 1)[0];
  const std::complex<double> h1_prime(0, -d);
  const std::complex<double> h2 =
      -h1_prime / (2 * M_PI * std::complex<double>(0, 1) * 2.0);
  const auto h = boundary_terms(problem("x^2", "1", -1, 1), real(1), 2);
  CHECK(std::abs(to_double(h[1]) - h2) < 1e-9);
}

TEST_CASE("boundary terms vanish with the weight") {
  const auto h = boundary_terms(problem("x^2", "0", -1, 1), real(0.5), 4);
  for (const complex &v : h)
    CHECK(v == complex(0));
}

TEST_CASE("boundary terms need a non-vanishing derivative") {
  CHECK_THROWS_AS(boundary_terms(problem("x^2", "1", -1, 1), real(0), 2),
                  HypothesisError);
}

TEST_CASE("first-derivative test with integer frequencies is exact") {
  const ExpansionResult r = first_derivative_test(problem("100*x", "1", 1, 2));
  CHECK(r.theorem == Theorem::fdt);
  CHECK(r.value == complex(0));
  CHECK(r.main_term == complex(0));
}

TEST_CASE("first-derivative test with zero weight") {
  const ExpansionResult r = first_derivative_test(problem("3*x + x^2", "0", 1, 2));
  CHECK(r.value == complex(0));
  CHECK(r.error_scale == 0);
}

TEST_CASE("first-derivative test rejects a stationary phase") {
  try {
    first_derivative_test(problem("x^2", "1", -1, 1));
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError &e) {
    CHECK(e.kind() == Hypothesis::phase_not_monotone);
  }
}

TEST_CASE("first-derivative test against the oracle") {
  const PhaseProblem p = problem("T*(x+x^2/10)", "1/x", 1, 2, 1e4, 3);
  const ExpansionResult r = first_derivative_test(p);
  const complex oracle = oscillatory_quadrature(p).value;
  CHECK(abs(r.value - oracle) <= 10 * r.error_scale);
  CHECK(r.value == r.boundary_beta - r.boundary_alpha);
}

TEST_CASE("first-derivative test splits at interior points") {
  PhaseProblem whole = problem("T*(x+x^2/10)", "1/x", 1, 2, 1000, 3);
  PhaseProblem left = whole, right = whole;
  left.beta = real("1.5");
  right.alpha = real("1.5");
  const complex a = first_derivative_test(left).value;
  const complex b = first_derivative_test(right).value;
  const complex all = first_derivative_test(whole).value;
  CHECK(abs(a + b - all) < real(1e-30));
}

TEST_CASE("double factorial") {
  CHECK(double_factorial_odd(0) == 1);
  CHECK(double_factorial_odd(1) == 1);
  CHECK(double_factorial_odd(3) == 15);
  CHECK(double_factorial_odd(5) == 945);
}

TEST_CASE("pure quadratic main term") {
  const ExpansionResult r = stationary_phase_expand(problem("T*x^2", "1", -1, 1, 1));
  CHECK(r.theorem == Theorem::wsp);
  CHECK(r.orientation == Orientation::min);
  CHECK(abs(r.main_term - complex(real(0.5), real(0.5))) < real(1e-32));
  REQUIRE(r.per_order_main.size() == 3);
  CHECK(r.per_order_main[1] == complex(0));
  CHECK(r.per_order_main[2] == complex(0));
  CHECK(r.value == r.main_term + r.boundary_beta - r.boundary_alpha);
}

TEST_CASE("per-order terms sum to the main term") {
  const ExpansionResult r = stationary_phase_expand(
      problem("T*(x^2+x^3/3)", "1/(1+x^2)", -0.5, 0.5, 4096, 3));
  complex sum(0);
  for (const complex &t : r.per_order_main)
    sum += t;
  CHECK(abs(sum - r.main_term) < real(1e-32));
  REQUIRE(r.coefficients);
  CHECK(r.coefficients->varpi.size() == 7);
}

TEST_CASE("error scale terms") {
  PhaseProblem p = problem("T*x^2", "1", -0.5, 0.5, 1e4);
  p.M = 1;
  const auto t = error_scale_terms(p, real(0));
  CHECK(to_double(t[3]) == doctest::Approx(2e-12).epsilon(1e-12));

  PhaseProblem q = p;
  q.T = 2e4;
  const auto u = error_scale_terms(q, real(0));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(u[i] <= t[i] / 8 * (1 + real(1e-30)));

  const auto near = error_scale_terms(p, real(-0.499));
  const auto nearer = error_scale_terms(p, real(-0.4995));
  CHECK(to_double(nearer[1] / near[1]) == doctest::Approx(128).epsilon(1e-3));
  CHECK_THROWS_AS(error_scale_terms(p, real(-0.5)), HypothesisError);
}

TEST_CASE("stationary point too close to an endpoint") {
  try {
    stationary_phase_expand(problem("(x - 1e-7)^2", "1", 0, 1));
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError &e) {
    CHECK(e.kind() == Hypothesis::stationary_too_close_to_endpoint);
  }
}

TEST_CASE("a maximum gives the complex conjugate") {
  const ExpansionResult up = stationary_phase_expand(
      problem("T*(x^2+x^3/3)", "1/(1+x^2)", -0.5, 0.5, 2048));
  const ExpansionResult down = stationary_phase_expand(
      problem("-T*(x^2+x^3/3)", "1/(1+x^2)", -0.5, 0.5, 2048));
  CHECK(down.orientation == Orientation::max);
  CHECK(abs(down.value - conj(up.value)) <= real(1e-12) * abs(up.value));
  CHECK(abs(down.main_term - conj(up.main_term)) <= real(1e-12) * abs(up.main_term));
}

TEST_CASE("stationary phase against the oracle") {
  PhaseProblem p = problem("T*(x^2+x^3/3)", "1/(1+x^2)", -0.5, 0.5, 16384, 2);
  const complex oracle = oscillatory_quadrature(p).value;
  const ExpansionResult r2 = stationary_phase_expand(p);
  p.n = 1;
  const ExpansionResult r1 = stationary_phase_expand(p);
  CHECK(abs(r2.value - oracle) <= 10 * r2.error_scale);
  CHECK(abs(r2.value - oracle) < abs(r1.value - oracle));
  bool flagged = false;
  for (const auto &w : r1.warnings)
    flagged = flagged || w.find("n = 1") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("audit of a pure quadratic") {
  PhaseProblem p = problem("T*x^2", "1", -1, 1, 1);
  p.M = 2;
  const AuditReport a = hypothesis_audit(p);
  CHECK(a.C_f.at(2) == 8);
  CHECK(a.Delta == real(1) / 512);
  CHECK(a.r1 == 1);
  CHECK(a.r2 == 1);
  CHECK(a.r == real(1) / 256);
  CHECK_FALSE(a.validity_ok);
  CHECK(a.C2_lower_ok);
  CHECK(a.M_ok);
  REQUIRE(a.gamma);
  CHECK(*a.gamma == 0);

  p.T = std::pow(2.0, 20);
  p.params["T"] = p.T;
  const AuditReport b = hypothesis_audit(p);
  CHECK(b.Delta == real(1) / 512);
  CHECK(to_double(b.validity_product) == doctest::Approx(std::pow(2.0, 20.0 / 7) / 512));
  CHECK_FALSE(b.validity_ok);
}

TEST_CASE("audit flags violated hypotheses") {
  const AuditReport concave = hypothesis_audit(problem("-x^2", "1", -1, 1));
  CHECK_FALSE(concave.C2_lower_ok);

  PhaseProblem p = problem("x^2", "abs(x - 0.2)", -1, 1);
  p.M = 1;
  const AuditReport a = hypothesis_audit(p);
  CHECK_FALSE(a.M_ok);
  REQUIRE(a.abs_kinks.size() == 1);

  const AuditReport wiggly = hypothesis_audit(problem("x^3 - x/4", "1", -1, 1));
  CHECK_FALSE(wiggly.fpp_constant_sign);
  CHECK_FALSE(wiggly.gamma);
}

TEST_CASE("per-order terms decrease in the valid regime") {
  PhaseProblem p = problem("T*(x^2 + x^3/40)", "1/(1+x^2/4)", -0.35, 0.35,
                           std::pow(2.0, 16), 3);
  p.M = real(0.71);
  const AuditReport a = hypothesis_audit(p);
  REQUIRE(a.validity_ok);
  const ExpansionResult r = stationary_phase_expand(p);
  for (std::size_t j = 0; j + 1 < r.per_order_main.size(); ++j)
    CHECK(abs(r.per_order_main[j + 1]) < abs(r.per_order_main[j]));
}
