#include "wsp/problem.hpp"

namespace wsp {

void validate(const PhaseProblem &p) {
  if (!(p.alpha < p.beta))
    throw std::invalid_argument("alpha must be less than beta");
  if (!(p.M > 0) || !(p.N > 0) || !(p.T > 0) || !(p.U > 0))
    throw std::invalid_argument("M, N, T, U must be positive");
  if (p.n < 1)
    throw std::invalid_argument("expansion order n must be at least 1");
  if (p.grid < 2)
    throw std::invalid_argument("grid needs at least 2 samples");
}

PhaseProblem negated_phase(const PhaseProblem &p) {
  PhaseProblem q = p;
  q.f = p.f.negated();
  return q;
}

const char *to_string(Hypothesis h) {
  switch (h) {
  case Hypothesis::no_sign_change: return "NoSignChange";
  case Hypothesis::multiple_sign_changes: return "MultipleSignChanges";
  case Hypothesis::stationary_at_endpoint: return "StationaryAtEndpoint";
  case Hypothesis::degenerate_stationary_point:
    return "DegenerateStationaryPoint";
  case Hypothesis::stationary_too_close_to_endpoint:
    return "StationaryTooCloseToEndpoint";
  case Hypothesis::phase_not_monotone: return "PhaseNotMonotone";
  case Hypothesis::vanishing_derivative: return "VanishingDerivative";
  }
  return "Unknown";
}

BoundProblem::BoundProblem(const PhaseProblem &p)
    : f_(p.f, p.params), g_(p.g, p.params) {}

std::vector<real> sample_grid(const PhaseProblem &p) {
  const int count = std::max(p.grid, 2);
  std::vector<real> xs(static_cast<std::size_t>(count));
  const real width = p.beta - p.alpha;
  for (int i = 0; i < count; ++i)
    xs[static_cast<std::size_t>(i)] = p.alpha + width * i / (count - 1);
  xs.back() = p.beta;
  return xs;
}

} // namespace wsp
