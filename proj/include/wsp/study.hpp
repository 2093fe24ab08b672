#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wsp/expansion.hpp"
#include "wsp/oracle.hpp"
#include "wsp/problem.hpp"

namespace wsp {

/// Parses "Tmin:Tmax:factor" into Tmin, Tmin*factor, ... up to Tmax.
std::vector<real> parse_t_grid(std::string_view spec);

/// Parses "1,2,3".
std::vector<int> parse_n_list(std::string_view spec);

/// Stationary phase when f' changes sign on the grid, the first-derivative
/// test otherwise.
ExpansionResult expand_auto(const PhaseProblem &p);

struct StudyRow {
  real T = 0;
  int n = 0;
  bool ok = false;
  complex expansion;
  complex oracle;
  real abs_error = 0;
  real error_scale = 0;
  std::string error;
};

struct StudyResult {
  std::vector<StudyRow> rows; ///< T-major, n-minor
  std::map<int, double> slopes;
  bool any_failed = false;
};

/// Runs the expansion for every (T, n) and the oracle once per T. The phase
/// is expected to scale linearly in the parameter T (f = T phi(x)); each
/// row rebinds both the problem's T and the expression parameter T.
StudyResult run_study(const PhaseProblem &base, const std::vector<real> &Ts,
                      const std::vector<int> &ns,
                      const QuadratureSettings &settings = {});

/// Least-squares slope of ys against xs; NaN with fewer than two points.
double fit_slope(const std::vector<double> &xs, const std::vector<double> &ys);

void write_csv(std::ostream &out, const StudyResult &result);

} // namespace wsp
