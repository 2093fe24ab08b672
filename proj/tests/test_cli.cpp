#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "wsp/commands.hpp"
#include "wsp/config.hpp"
#include "wsp/expansion.hpp"

using namespace wsp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

class TempConfig {
public:
  explicit TempConfig(const std::string &text) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("wsphase_cli_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".cfg");
    std::ofstream(path_) << text;
  }
  ~TempConfig() { fs::remove(path_); }
  std::string path() const { return path_.string(); }

private:
  fs::path path_;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "wsphase");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string &text, const std::string &needle) {
  return text.find(needle) != std::string::npos;
}

std::string line_after(const std::string &text, const std::string &prefix) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0)
      return line.substr(prefix.size());
  return {};
}

const char *kQuadratic = "f = x^2\ng = 1\nalpha = -1\nbeta = 1\nn = 2\n";

} // namespace

TEST_CASE("expand on a pure quadratic") {
  const TempConfig cfg(kQuadratic);
  const Run r = run({"expand", "-c", cfg.path()});
  CHECK(r.code == exit_ok);
  CHECK(line_after(r.out, "main term: ") == "0.5 + 0.5i");
  CHECK(contains(r.out, "varpi_4: 0"));
  CHECK(contains(r.out, "validity_ok: "));
}

TEST_CASE("expand prints the library value without loss") {
  const TempConfig cfg("f = T*(x^2 + x^3/3)\ng = 1/(1+x^2)\nalpha = -1/2\n"
                       "beta = 1/2\nT = 4096\nn = 3\n");
  const Run r = run({"expand", "--config", cfg.path()});
  REQUIRE(r.code == exit_ok);
  const ExpansionResult lib = stationary_phase_expand(load_config(cfg.path()));
  const std::string value = line_after(r.out, "value: ");
  const auto split = value.find(' ', 1);
  REQUIRE(split != std::string::npos);
  const double re = std::strtod(value.c_str(), nullptr);
  const double sign = value[split + 1] == '-' ? -1 : 1;
  const double im = sign * std::strtod(value.c_str() + split + 3, nullptr);
  CHECK(re == to_double(lib.value.real()));
  CHECK(im == to_double(lib.value.imag()));
}

TEST_CASE("expand on a monotone phase points to quad or fdt") {
  const TempConfig cfg("f = T*(x + x^2/10)\ng = 1/x\nalpha = 1\nbeta = 2\nT = 100\n");
  const Run r = run({"expand", "-c", cfg.path()});
  CHECK(r.code == exit_hypothesis);
  CHECK(contains(r.out, "no stationary point; use quad or fdt"));

  const Run f = run({"fdt", "-c", cfg.path(), "--n", "3"});
  CHECK(f.code == exit_ok);
  CHECK(contains(f.out, "value: "));
}

TEST_CASE("config errors exit with 1") {
  const TempConfig missing("g = 1\nalpha = -1\nbeta = 1\n");
  const Run r = run({"expand", "-c", missing.path()});
  CHECK(r.code == exit_config);
  CHECK(contains(r.err, "missing key: f"));

  const TempConfig unknown(std::string(kQuadratic) + "colour = blue\n");
  CHECK(run({"quad", "-c", unknown.path()}).code == exit_config);

  CHECK(run({"quad", "-c", "/nonexistent/problem.cfg"}).code == exit_config);
  CHECK(run({"quad"}).code == exit_config);
  CHECK(run({}).code == exit_config);
  CHECK(run({"frobnicate"}).code == exit_config);
  CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("quad prints the Fresnel value") {
  const TempConfig cfg(kQuadratic);
  const Run r = run({"quad", "-c", cfg.path()});
  CHECK(r.code == exit_ok);
  CHECK(contains(r.out, "0.488253406075 + 0.343415678364i\n"));
  CHECK(contains(r.out, "panels: "));
}

TEST_CASE("quad of a full period prints zeros") {
  const TempConfig cfg("f = x\ng = 1\nalpha = 0\nbeta = 1\n");
  const Run r = run({"quad", "-c", cfg.path()});
  CHECK(r.code == exit_ok);
  CHECK(contains(r.out, "0.000000000000 + 0.000000000000i\n"));
}

TEST_CASE("unattainable tolerance exits with 3") {
  const TempConfig cfg(kQuadratic);
  CHECK(run({"quad", "-c", cfg.path(), "--tol", "1e-30"}).code == exit_quadrature);
  CHECK(run({"quad", "-c", cfg.path(), "--tol", "-1"}).code == exit_config);
}

TEST_CASE("audit prints Delta and flags a concave phase") {
  const TempConfig cfg("f = T*x^2\ng = 1\nalpha = -1\nbeta = 1\nM = 2\nT = 1\nn = 2\n");
  const Run r = run({"audit", "-c", cfg.path()});
  CHECK(r.code == exit_ok);
  CHECK(line_after(r.out, "Delta: ") == "0.001953125");
  CHECK(line_after(r.out, "validity: ") == "fails");

  const TempConfig big("f = T*x^2\ng = 1\nalpha = -1\nbeta = 1\nM = 2\nT = 2^20\nn = 2\n");
  const Run b = run({"audit", "-c", big.path()});
  CHECK(line_after(b.out, "Delta: ") == "0.001953125");
  CHECK(line_after(b.out, "validity: ") == "fails");

  const TempConfig concave("f = -x^2\ng = 1\nalpha = -1\nbeta = 1\n");
  const Run c = run({"audit", "-c", concave.path()});
  CHECK(c.code == exit_ok);
  CHECK(contains(c.out, "L-f'' violated"));
}

TEST_CASE("study writes CSV and slopes") {
  const TempConfig cfg("f = T*(x^2 + x^3/3)\ng = 1/(1+x^2)\nalpha = -1/2\n"
                       "beta = 1/2\nT = 1024\nn = 2\n");
  const Run r = run({"study", "-c", cfg.path(), "-T", "1024:4096:2", "--n", "1,2"});
  CHECK(r.code == exit_ok);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "T,n,expansion_re,expansion_im,oracle_re,oracle_im,abs_error,error_scale");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    ++rows;
  CHECK(rows == 6);
  CHECK(contains(r.err, "slope n=1: "));
  CHECK(contains(r.err, "slope n=2: "));

  const Run again = run({"study", "-c", cfg.path(), "-T", "1024:4096:2", "--n", "1,2"});
  CHECK(again.out == r.out);

  const Run single = run({"study", "-c", cfg.path(), "--T-grid", "1024:1024:2"});
  CHECK(single.code == exit_ok);
  CHECK(contains(single.err, "slope n=2: nan"));

  CHECK(run({"study", "-c", cfg.path(), "-T", "1024:x:2"}).code == exit_config);
  CHECK(run({"study", "-c", cfg.path()}).code == exit_config);
}

TEST_CASE("study rows that fail give exit 4") {
  // The stationary point is the left endpoint, which the expansion rejects.
  const TempConfig cfg("f = T*x^2\ng = 1\nalpha = 0\nbeta = 1\nT = 64\n");
  const Run r = run({"study", "-c", cfg.path(), "-T", "16:64:2"});
  CHECK(r.code == exit_study_rows);
  CHECK(contains(r.out, "nan"));
  CHECK(contains(r.err, "failed"));
}
