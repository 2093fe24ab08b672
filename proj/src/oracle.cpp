#include "wsp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsp/coefficients.hpp"
#include "wsp/expansion.hpp"

namespace wsp {

namespace {

constexpr double kMaxPhasePerPanel = 0.5;

// Root of f' in (a, b), where f' has opposite signs at the ends.
real bisect_fprime(const BoundProblem &bp, real a, real b) {
  const bool a_negative = bp.f_prime(a) < 0;
  for (int it = 0; it < 200; ++it) {
    const real mid = (a + b) / 2;
    if (mid <= a || mid >= b)
      break;
    const real v = bp.f_prime(mid);
    if (v == 0)
      return mid;
    ((v < 0) == a_negative ? a : b) = mid;
  }
  return (a + b) / 2;
}

std::vector<real> base_panels(const PhaseProblem &p, const BoundProblem &bp) {
  const auto grid = sample_grid(p);
  std::vector<real> cuts;
  cuts.reserve(grid.size() * 2);
  cuts.push_back(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const real a = grid[i - 1], b = grid[i];
    const real fa = bp.f_prime(a), fb = bp.f_prime(b);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0))
      cuts.push_back(bisect_fprime(bp, a, b));
    cuts.push_back(b);
  }

  std::vector<real> edges;
  edges.push_back(cuts[0]);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const real a = cuts[i - 1], b = cuts[i];
    if (!(b > a))
      continue;
    const Jet<real> ja = bp.f_jet(a, 1), jb = bp.f_jet(b, 1);
    const real slope_bound = std::max(abs(ja[1]), abs(jb[1])) * (b - a);
    const real variation = std::max(abs(jb[0] - ja[0]), slope_bound);
    const long pieces =
        std::max(1L, static_cast<long>(ceil(variation / kMaxPhasePerPanel)));
    for (long k = 1; k < pieces; ++k)
      edges.push_back(a + (b - a) * k / pieces);
    edges.push_back(b);
  }
  return edges;
}

complex integrate_level(const BoundProblem &bp, const std::vector<real> &edges,
                        int split, const std::vector<real> &nodes,
                        const std::vector<real> &weights) {
  complex total(0);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const real a = edges[i - 1];
    const real width = (edges[i] - a) / split;
    for (int s = 0; s < split; ++s) {
      const real lo = a + width * s;
      const real half = width / 2;
      const real mid = lo + half;
      complex panel(0);
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const real x = mid + half * nodes[j];
        panel += (weights[j] * bp.g(x)) * unit_phase(bp.f(x));
      }
      total += panel * half;
    }
  }
  return total;
}

} // namespace

void gauss_legendre(int count, std::vector<real> &nodes,
                    std::vector<real> &weights) {
  nodes.assign(static_cast<std::size_t>(count), real(0));
  weights.assign(static_cast<std::size_t>(count), real(0));
  const real eps = std::numeric_limits<real>::epsilon();
  for (int i = 0; i < (count + 1) / 2; ++i) {
    real x = cos(pi() * (i + real(0.75)) / (count + real(0.5)));
    real dp = 0;
    for (int it = 0; it < 100; ++it) {
      real p0 = 1, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1);
      const real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps)
        break;
    }
    const real w = 2 / ((1 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
  if (count % 2 == 1)
    nodes[static_cast<std::size_t>(count / 2)] = 0;
}

QuadratureResult oscillatory_quadrature(const PhaseProblem &p,
                                        const QuadratureSettings &s) {
  validate(p);
  if (s.nodes_per_panel < 8)
    throw std::invalid_argument("nodes_per_panel must be at least 8");
  if (!(s.tol >= real(1e-14)))
    throw QuadratureError("tolerance below the attainable floor 1e-14");

  const BoundProblem bp(p);
  const std::vector<real> edges = base_panels(p, bp);
  const long base = static_cast<long>(edges.size()) - 1;
  std::vector<real> nodes, weights;
  gauss_legendre(s.nodes_per_panel, nodes, weights);

  if (2 * base > s.max_panels)
    throw QuadratureError("panel budget exceeded before convergence");
  QuadratureResult result;
  complex previous = integrate_level(bp, edges, 1, nodes, weights);
  for (int level = 1;; ++level) {
    const long split = 1L << level;
    if (base * split > s.max_panels)
      throw QuadratureError("panel budget exceeded before convergence");
    const complex current =
        integrate_level(bp, edges, static_cast<int>(split), nodes, weights);
    if (abs(current - previous) < s.tol) {
      result.value = current;
      result.panels = base * split;
      result.doublings = level;
      return result;
    }
    previous = current;
  }
}

std::vector<double> fd_derivatives(const Expr &e, double x0, int order,
                                   double h, const Params &params) {
  if (order < 1 || order > 6)
    throw std::invalid_argument("fd_derivatives supports orders 1..6");
  const BoundExpr be(e, params);
  const real x(x0);
  const double eps = std::numeric_limits<double>::epsilon();

  // k-th central difference; its error expands in even powers of the step.
  auto central = [&](int k, const real &step) {
    real sum = 0;
    real binom = 1;
    for (int i = 0; i <= k; ++i) {
      const real offset = (real(k) / 2 - i) * step;
      const real term = binom * be(x + offset);
      sum += (i % 2 == 0) ? term : real(-term);
      binom = binom * (k - i) / (i + 1);
    }
    real scale = 1;
    for (int i = 0; i < k; ++i)
      scale *= step;
    return sum / scale;
  };

  std::vector<double> out;
  for (int k = 1; k <= order; ++k) {
    const double hk =
        h > 0 ? h : std::pow(eps, 1.0 / (k + 2)) * std::max(1.0, std::abs(x0));
    const real coarse = central(k, real(hk));
    const real fine = central(k, real(hk) / 2);
    out.push_back(static_cast<double>((4 * fine - coarse) / 3));
  }
  return out;
}

ReversionFit numeric_reversion_oracle(const PhaseProblem &p, const real &gamma,
                                      int order, const real &radius) {
  if (order < 0 || order > 2 * p.n)
    throw std::invalid_argument("order must lie in 0..2n");
  const BoundProblem bp(p);
  const Jet<real> fj = bp.f_jet(gamma, 2);
  if (fj[2] == 0)
    throw std::invalid_argument("f''(gamma) vanishes");

  real r = radius;
  if (!(r > 0)) {
    r = hypothesis_audit(p).r;
    if (!(r > 0))
      throw std::domain_error("audit produced no substitution radius");
  }
  ReversionFit fit;
  fit.radius = r / 8;

  // substitution_point needs only gamma, f(gamma) and lambda_2.
  CoefficientSet local;
  local.gamma = gamma;
  local.lambda = {fj[0], fj[1], fj[2]};

  const int cols = order + 3;
  const int rows = 2 * cols;
  std::vector<std::vector<real>> a(static_cast<std::size_t>(rows),
                                   std::vector<real>(static_cast<std::size_t>(cols)));
  std::vector<real> rhs(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    const real s = cos(pi() * (i + real(0.5)) / rows);
    const real y = fit.radius * s;
    const real x = substitution_point(p, local, y);
    rhs[static_cast<std::size_t>(i)] = bp.g(x) * 2 * fj[2] * y / bp.f_prime(x);
    real power = 1;
    for (int k = 0; k < cols; ++k) {
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = power;
      power *= s;
    }
  }

  // Householder QR, column by column.
  for (int k = 0; k < cols; ++k) {
    real norm = 0;
    for (int i = k; i < rows; ++i)
      norm += a[i][k] * a[i][k];
    norm = sqrt(norm);
    if (norm == 0)
      throw std::domain_error("rank-deficient reversion fit");
    const real alpha = a[k][k] > 0 ? real(-norm) : norm;
    std::vector<real> v(static_cast<std::size_t>(rows), real(0));
    for (int i = k; i < rows; ++i)
      v[i] = a[i][k];
    v[k] -= alpha;
    real vv = 0;
    for (int i = k; i < rows; ++i)
      vv += v[i] * v[i];
    for (int j = k; j < cols; ++j) {
      real dot = 0;
      for (int i = k; i < rows; ++i)
        dot += v[i] * a[i][j];
      for (int i = k; i < rows; ++i)
        a[i][j] -= 2 * dot / vv * v[i];
    }
    real dot = 0;
    for (int i = k; i < rows; ++i)
      dot += v[i] * rhs[i];
    for (int i = k; i < rows; ++i)
      rhs[i] -= 2 * dot / vv * v[i];
  }
  real rmax = 0, rmin = std::numeric_limits<real>::max();
  for (int k = 0; k < cols; ++k) {
    rmax = std::max(rmax, abs(a[k][k]));
    rmin = std::min(rmin, abs(a[k][k]));
  }
  fit.condition = rmax / rmin;
  if (fit.condition > real(1e20))
    throw std::domain_error("ill-conditioned reversion fit");

  std::vector<real> c(static_cast<std::size_t>(cols));
  for (int k = cols - 1; k >= 0; --k) {
    real s = rhs[k];
    for (int j = k + 1; j < cols; ++j)
      s -= a[k][j] * c[j];
    c[k] = s / a[k][k];
  }
  real scale = 1;
  for (int k = 0; k <= order; ++k) {
    fit.coefficients.push_back(c[k] / scale);
    scale *= fit.radius;
  }
  return fit;
}

} // namespace wsp
