#include "wsp/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace wsp {

namespace {

const char *const kKeys[] = {"f", "g",     "alpha", "beta", "M",
                             "N", "T",     "U",     "n",    "grid"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool known_key(const std::string &key) {
  return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

real constant_value(const std::string &key, const std::string &text,
                    const Params &params) {
  try {
    const Expr e = Expr::parse(text);
    if (e.uses("x"))
      throw ConfigError(key + ": value must not depend on x");
    return BoundExpr(e, params)(real(0));
  } catch (const ParseError &err) {
    throw ConfigError(key + ": " + err.what());
  } catch (const EvalError &err) {
    throw ConfigError(key + ": " + err.what());
  }
}

int integer_value(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

Expr expression(const std::string &key, const std::string &text) {
  try {
    return Expr::parse(text);
  } catch (const ParseError &err) {
    throw ConfigError(key + ": " + err.what());
  }
}

real inferred_T(const PhaseProblem &p) {
  const BoundExpr f(p.f, p.params);
  real max_second = 0, max_first = 0;
  for (const real &x : sample_grid(p)) {
    const Jet<real> j = f(Jet<real>::variable(x, 2));
    max_first = std::max(max_first, abs(j[1]));
    max_second = std::max(max_second, abs(j.derivative(2)));
  }
  if (max_second > 0)
    return max_second * p.M * p.M;
  if (max_first > 0)
    return max_first * p.M;
  return real(1);
}

} // namespace

PhaseProblem parse_config(std::string_view text) {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, std::string>> param_lines;
  bool in_params = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line != "[params]")
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section " + line);
      in_params = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    if (in_params) {
      for (const auto &[name, _] : param_lines)
        if (name == key)
          throw ConfigError("duplicate parameter: " + key);
      param_lines.emplace_back(key, value);
      continue;
    }
    if (!known_key(key))
      throw ConfigError("unknown key: " + key);
    if (!values.emplace(key, value).second)
      throw ConfigError("duplicate key: " + key);
  }

  for (const char *required : {"f", "alpha", "beta"})
    if (!values.count(required))
      throw ConfigError(std::string("missing key: ") + required);

  PhaseProblem p;
  for (const auto &[name, value] : param_lines) {
    if (name == "x" || name == "M" || name == "N" || name == "T" || name == "U")
      throw ConfigError("parameter name is reserved: " + name);
    p.params[name] = constant_value(name, value, p.params);
  }

  p.f = expression("f", values["f"]);
  p.g = values.count("g") ? expression("g", values["g"]) : Expr::parse("1");
  p.alpha = constant_value("alpha", values["alpha"], p.params);
  p.beta = constant_value("beta", values["beta"], p.params);
  if (!(p.alpha < p.beta))
    throw ConfigError("alpha must be less than beta");
  if (values.count("n"))
    p.n = integer_value("n", values["n"]);
  if (values.count("grid"))
    p.grid = integer_value("grid", values["grid"]);

  p.M = values.count("M") ? constant_value("M", values["M"], p.params)
                          : p.beta - p.alpha;
  p.N = values.count("N") ? constant_value("N", values["N"], p.params) : 1;
  p.U = values.count("U") ? constant_value("U", values["U"], p.params) : 1;
  p.params["M"] = p.M;
  p.params["N"] = p.N;
  p.params["U"] = p.U;
  if (values.count("T")) {
    p.T = constant_value("T", values["T"], p.params);
    p.params["T"] = p.T;
  } else {
    if (p.f.uses("T") || p.g.uses("T"))
      throw ConfigError("missing key: T");
    p.T = inferred_T(p);
    p.params["T"] = p.T;
  }

  try {
    validate(p);
    BoundProblem probe(p);
  } catch (const std::invalid_argument &err) {
    throw ConfigError(err.what());
  } catch (const EvalError &err) {
    throw ConfigError(err.what());
  }
  return p;
}

PhaseProblem load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace wsp
