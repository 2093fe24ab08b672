#include "wsp/study.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wsp/coefficients.hpp"

namespace wsp {

namespace {

real parse_real(std::string_view text, const char *what) {
  try {
    const Expr e = Expr::parse(text);
    if (e.uses("x"))
      throw std::invalid_argument(std::string(what) + " must be a constant");
    return BoundExpr(e, {})(real(0));
  } catch (const ParseError &err) {
    throw std::invalid_argument(std::string(what) + ": " + err.what());
  } catch (const EvalError &err) {
    throw std::invalid_argument(std::string(what) + ": " + err.what());
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::vector<real> parse_t_grid(std::string_view spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos)
    throw std::invalid_argument("T grid must look like Tmin:Tmax:factor");
  const real lo = parse_real(spec.substr(0, c1), "Tmin");
  const real hi = parse_real(spec.substr(c1 + 1, c2 - c1 - 1), "Tmax");
  const real factor = parse_real(spec.substr(c2 + 1), "factor");
  if (!(lo > 0) || hi < lo)
    throw std::invalid_argument("T grid needs 0 < Tmin <= Tmax");
  if (!(factor > 1) && hi > lo)
    throw std::invalid_argument("T grid factor must exceed 1");
  std::vector<real> out;
  // Tolerate rounding in Tmax so that 2^10:2^18:4 includes 2^18.
  const real limit = hi * (1 + real(1e-12));
  for (real t = lo; t <= limit; t *= factor) {
    out.push_back(t);
    if (!(factor > 1))
      break;
  }
  return out;
}

std::vector<int> parse_n_list(std::string_view spec) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto piece = spec.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    int v = 0;
    const auto [ptr, ec] =
        std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size() || v < 1)
      throw std::invalid_argument("n list must be comma-separated integers >= 1");
    out.push_back(v);
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

ExpansionResult expand_auto(const PhaseProblem &p) {
  const SignScan scan = scan_phase_derivative(p, 1);
  if (scan.changes == 0 && !scan.all_zero && !scan.zero_at_alpha &&
      !scan.zero_at_beta)
    return first_derivative_test(p);
  return stationary_phase_expand(p);
}

StudyResult run_study(const PhaseProblem &base, const std::vector<real> &Ts,
                      const std::vector<int> &ns,
                      const QuadratureSettings &settings) {
  StudyResult result;
  const real nan = std::numeric_limits<real>::quiet_NaN();
  for (const real &T : Ts) {
    PhaseProblem p = base;
    p.T = T;
    p.params["T"] = T;

    std::string oracle_error;
    complex oracle(nan, nan);
    try {
      oracle = oscillatory_quadrature(p, settings).value;
    } catch (const std::exception &err) {
      oracle_error = std::string("oracle: ") + err.what();
    }

    for (int n : ns) {
      StudyRow row;
      row.T = T;
      row.n = n;
      row.oracle = oracle;
      row.expansion = complex(nan, nan);
      row.abs_error = nan;
      row.error_scale = nan;
      if (!oracle_error.empty()) {
        row.error = oracle_error;
      } else {
        try {
          p.n = n;
          const ExpansionResult r = expand_auto(p);
          row.expansion = r.value;
          row.error_scale = r.error_scale;
          row.abs_error = abs(r.value - oracle);
          row.ok = true;
        } catch (const std::exception &err) {
          row.error = err.what();
          row.oracle = complex(nan, nan);
        }
      }
      result.any_failed = result.any_failed || !row.ok;
      result.rows.push_back(std::move(row));
    }
  }

  for (int n : ns) {
    std::vector<double> xs, ys;
    for (const StudyRow &row : result.rows) {
      if (row.n != n || !row.ok || !(row.abs_error > 0))
        continue;
      xs.push_back(std::log2(to_double(row.T)));
      ys.push_back(std::log2(to_double(row.abs_error)));
    }
    result.slopes[n] = fit_slope(xs, ys);
  }
  return result;
}

double fit_slope(const std::vector<double> &xs, const std::vector<double> &ys) {
  const std::size_t count = std::min(xs.size(), ys.size());
  if (count < 2)
    return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < count; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

void write_csv(std::ostream &out, const StudyResult &result) {
  out << "T,n,expansion_re,expansion_im,oracle_re,oracle_im,abs_error,"
         "error_scale\n";
  for (const StudyRow &row : result.rows) {
    out << g17(to_double(row.T)) << ',' << row.n << ','
        << g17(to_double(row.expansion.real())) << ','
        << g17(to_double(row.expansion.imag())) << ','
        << g17(to_double(row.oracle.real())) << ','
        << g17(to_double(row.oracle.imag())) << ','
        << g17(to_double(row.abs_error)) << ','
        << g17(to_double(row.error_scale)) << '\n';
  }
}

} // namespace wsp
