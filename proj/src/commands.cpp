#include "wsp/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "wsp/config.hpp"
#include "wsp/expansion.hpp"
#include "wsp/oracle.hpp"
#include "wsp/study.hpp"

namespace wsp {

namespace {

std::string g17(const real &v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(v));
  return buf;
}

std::string complex17(const complex &z) {
  const double im = to_double(z.imag());
  return g17(z.real()) + (std::signbit(im) ? " - " : " + ") +
         g17(real(std::fabs(im))) + "i";
}

std::string fixed12(double v) {
  if (std::fabs(v) < 5e-13)
    v = 0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

struct Common {
  std::string config;
  std::optional<int> n;
  std::optional<int> grid;
};

void add_common(CLI::App *sub, Common &c, bool with_n) {
  sub->add_option("-c,--config", c.config, "problem config file")->required();
  if (with_n)
    sub->add_option("--n", c.n, "expansion order override")
        ->check(CLI::PositiveNumber);
  sub->add_option("--grid", c.grid, "sample grid size override")
      ->check(CLI::Range(2, 1 << 24));
}

PhaseProblem load(const Common &c) {
  PhaseProblem p = load_config(c.config);
  if (c.n)
    p.n = *c.n;
  if (c.grid)
    p.grid = *c.grid;
  return p;
}

QuadratureSettings settings_from(const std::string &tol) {
  QuadratureSettings s;
  if (!tol.empty()) {
    try {
      s.tol = real(tol);
    } catch (const std::exception &) {
      throw ConfigError("--tol: not a number: " + tol);
    }
    if (!(s.tol > 0))
      throw ConfigError("--tol must be positive");
  }
  return s;
}

void print_warnings(std::ostream &out, const ExpansionResult &r) {
  for (const std::string &w : r.warnings)
    out << "warning: " << w << '\n';
}

void print_boundaries(std::ostream &out, const ExpansionResult &r) {
  out << "boundary alpha: " << complex17(r.boundary_alpha) << '\n';
  out << "boundary beta: " << complex17(r.boundary_beta) << '\n';
}

int cmd_expand(const Common &c, std::ostream &out) {
  const PhaseProblem p = load(c);
  const ExpansionResult r = stationary_phase_expand(p);
  const CoefficientSet &cs = *r.coefficients;
  out << "theorem: weighted stationary phase, n = " << p.n << '\n';
  out << "gamma: " << g17(cs.gamma) << '\n';
  out << "lambda_2: " << g17(cs.lambda[2]) << '\n';
  out << "orientation: "
      << (r.orientation == Orientation::min ? "minimum" : "maximum") << '\n';
  for (std::size_t k = 0; k < cs.varpi.size(); ++k)
    out << "varpi_" << k << ": " << g17(cs.varpi[k]) << '\n';
  out << "main term: " << complex17(r.main_term) << '\n';
  for (std::size_t j = 0; j < r.per_order_main.size(); ++j)
    out << "main term order " << j << ": " << complex17(r.per_order_main[j])
        << '\n';
  print_boundaries(out, r);
  out << "value: " << complex17(r.value) << '\n';
  out << "error_scale: " << g17(r.error_scale) << '\n';
  const AuditReport a = hypothesis_audit(p);
  out << "Delta: " << g17(a.Delta) << '\n';
  out << "validity_ok: " << (a.validity_ok ? "true" : "false") << '\n';
  print_warnings(out, r);
  return exit_ok;
}

int cmd_fdt(const Common &c, std::ostream &out) {
  const PhaseProblem p = load(c);
  const ExpansionResult r = first_derivative_test(p);
  out << "theorem: weighted first-derivative test, n = " << p.n << '\n';
  print_boundaries(out, r);
  out << "value: " << complex17(r.value) << '\n';
  out << "error_scale: " << g17(r.error_scale) << '\n';
  print_warnings(out, r);
  return exit_ok;
}

int cmd_quad(const Common &c, const std::string &tol, std::ostream &out) {
  const PhaseProblem p = load(c);
  const QuadratureResult q = oscillatory_quadrature(p, settings_from(tol));
  const double im = to_double(q.value.imag());
  std::string im_text = fixed12(std::fabs(im));
  out << fixed12(to_double(q.value.real()))
      << (std::signbit(im) && im_text != fixed12(0) ? " - " : " + ")
      << im_text << "i\n";
  out << "panels: " << q.panels << '\n';
  return exit_ok;
}

int cmd_audit(const Common &c, std::ostream &out) {
  const PhaseProblem p = load(c);
  const AuditReport a = hypothesis_audit(p);
  for (const auto &[r, v] : a.C_f)
    out << "C_" << r << " (f): " << g17(v) << '\n';
  for (const auto &[s, v] : a.C_g)
    out << "C_" << s << " (g): " << g17(v) << '\n';
  if (!a.C2_lower_ok)
    out << "L-f'' violated: f'' is not positive on the grid\n";
  out << "Delta: " << g17(a.Delta) << '\n';
  out << "T^(1/(2n+3)) Delta: " << g17(a.validity_product) << '\n';
  out << "validity: " << (a.validity_ok ? "ok" : "fails") << '\n';
  out << "f' profile: " << a.sign_profile << '\n';
  if (a.gamma)
    out << "gamma: " << g17(*a.gamma) << '\n';
  out << "r1: " << g17(a.r1) << '\n';
  out << "r2: " << g17(a.r2) << '\n';
  out << "r: " << g17(a.r) << '\n';
  out << "M >= beta - alpha: " << (a.M_ok ? "ok" : "violated") << '\n';
  if (!a.fpp_constant_sign)
    out << "warning: f'' changes sign on [alpha, beta]\n";
  for (const std::string &k : a.abs_kinks)
    out << "warning: " << k << '\n';
  return exit_ok;
}

int cmd_study(const Common &c, const std::string &t_grid,
              const std::string &n_list, const std::string &tol,
              std::ostream &out, std::ostream &err) {
  const PhaseProblem p = load(c);
  std::vector<real> Ts;
  std::vector<int> ns;
  try {
    Ts = parse_t_grid(t_grid);
    ns = n_list.empty() ? std::vector<int>{p.n} : parse_n_list(n_list);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  const StudyResult result = run_study(p, Ts, ns, settings_from(tol));
  write_csv(out, result);
  for (const auto &[n, slope] : result.slopes) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", slope);
    err << "slope n=" << n << ": " << buf << '\n';
  }
  for (const StudyRow &row : result.rows)
    if (!row.ok)
      err << "row T=" << g17(row.T) << " n=" << row.n
          << " failed: " << row.error << '\n';
  return result.any_failed ? exit_study_rows : exit_ok;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Weighted stationary phase expansions and their oracle",
               "wsphase"};
  app.require_subcommand(1);

  Common expand_opts, fdt_opts, quad_opts, audit_opts, study_opts;
  std::string quad_tol, study_tol, t_grid, n_list;

  CLI::App *expand = app.add_subcommand(
      "expand", "stationary phase expansion with coefficients and audit");
  add_common(expand, expand_opts, true);

  CLI::App *fdt = app.add_subcommand(
      "fdt", "first-derivative test for a phase without stationary points");
  add_common(fdt, fdt_opts, true);

  CLI::App *quad = app.add_subcommand("quad", "direct quadrature oracle");
  add_common(quad, quad_opts, false);
  quad->add_option("--tol", quad_tol, "absolute tolerance (>= 1e-14)");

  CLI::App *study = app.add_subcommand(
      "study", "expansion vs oracle over a T grid; CSV on stdout");
  add_common(study, study_opts, false);
  study->add_option("-T,--T-grid", t_grid, "Tmin:Tmax:factor")->required();
  study->add_option("--n", n_list, "comma-separated orders (default: config n)");
  study->add_option("--tol", study_tol, "oracle tolerance (>= 1e-14)");

  CLI::App *audit = app.add_subcommand("audit", "hypothesis audit table");
  add_common(audit, audit_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*expand) {
      try {
        return cmd_expand(expand_opts, out);
      } catch (const HypothesisError &e) {
        if (e.kind() == Hypothesis::no_sign_change) {
          out << "no stationary point; use quad or fdt\n";
          err << "error: " << e.what() << '\n';
          return exit_hypothesis;
        }
        throw;
      }
    }
    if (*fdt)
      return cmd_fdt(fdt_opts, out);
    if (*quad)
      return cmd_quad(quad_opts, quad_tol, out);
    if (*audit)
      return cmd_audit(audit_opts, out);
    if (*study)
      return cmd_study(study_opts, t_grid, n_list, study_tol, out, err);
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const QuadratureError &e) {
    err << "error: " << e.what() << '\n';
    return exit_quadrature;
  } catch (const HypothesisError &e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_hypothesis;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_hypothesis;
  }
  return exit_config;
}

} // namespace wsp
