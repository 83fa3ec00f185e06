#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "hypan/io.hpp"
#include "hypan/symbol.hpp"

using namespace hypan;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io_cli");

namespace {

std::string data_path(const std::string& name) {
  return std::string(HYPAN_DATA_DIR) + "/" + name;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(HYPAN_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("hypan-test-" + tag + "-" +
                                              std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ini parsing: sections, comments, line numbers") {
  ConfigFile cfg = parse_ini("# header\n[one]\na = 1\n\n[two]\nb= x # trailing\n");
  REQUIRE(cfg.size() == 2);
  CHECK(cfg[0].name == "one");
  CHECK(cfg[0].line == 2);
  REQUIRE(cfg[0].entries.size() == 1);
  CHECK(cfg[0].entries[0].key == "a");
  CHECK(cfg[0].entries[0].value == "1");
  CHECK(cfg[0].entries[0].line == 3);
  CHECK(cfg[1].entries[0].value == "x");
  CHECK(lookup_value(cfg, "two", "b") == std::string("x"));
  CHECK_FALSE(lookup_value(cfg, "two", "missing").has_value());
  CHECK_THROWS_AS(require_value(cfg, "two", "missing"), config_error);
}

TEST_CASE("ini parsing rejects malformed input with positions") {
  CHECK_THROWS_AS(parse_ini("a = 1\n"), config_error);       // entry before section
  CHECK_THROWS_AS(parse_ini("[open\na = 1\n"), config_error);
  try {
    parse_ini("[s]\nok = 1\nbroken line\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("scalar and list parsing") {
  CHECK(parse_int("42") == 42);
  CHECK_THROWS_AS(parse_int("4x"), config_error);
  CHECK(parse_double("2.5e-3") == doctest::Approx(0.0025));
  CHECK_THROWS_AS(parse_double("two"), config_error);
  auto list = parse_double_list("1, 2.5,-3");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == doctest::Approx(2.5));
}

TEST_CASE("system files load into the expected symbol") {
  SystemSymbol sys = load_system(data_path("la_a2i.system"));
  CHECK(sys.N() == 3);
  CHECK(sys.d() == 2);
  CotangentPoint rho =
      make_point(2, 0.1, Eigen::Vector2d(0.4, -0.2), 0.3, Eigen::Vector2d(0.7, 1.1));
  cplx det = det_symbol(sys, rho);
  double tau = 0.3, xi = 0.7, eta = 1.1, x = 0.4;
  cplx expected = tau * (tau * tau - xi * xi - x * x * eta * eta);
  CHECK(std::abs(det - expected) < 1e-12);
  CHECK_THROWS_AS(load_system(data_path("does_not_exist.system")), config_error);
}

TEST_CASE("coefficient entries must not involve the covariables") {
  fs::path bad = fresh_dir("badsys") / "bad.system";
  write_text(bad.string(),
             "[system]\nname = bad\ndimension = 2\nspace_dim = 1\n[A1]\nrow1 = tau, 0\nrow2 = "
             "0, 0\n");
  CHECK_THROWS_AS(load_system(bad.string()), config_error);
}

TEST_CASE("chart files load their defining functions") {
  ManifoldChart chart = load_chart(data_path("sigma_la.chart"));
  CHECK(chart.layout.d == 2);
  REQUIRE(chart.codim() == 3);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(chart.layout.size());
  z[chart.layout.tau()] = 0.7;
  CHECK(std::abs(chart.defining_functions[0].eval(z) - 0.7) < 1e-14);
}

TEST_CASE("deterministic formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(1e-9) == "1e-09");
  CHECK(format_complex(cplx(1.5, 0)) == "1.5");
  CHECK(format_complex(cplx(0, -2)) == "0-2i");
  CHECK(format_complex(cplx(1, 2)) == "1+2i");
}

TEST_CASE("hash is deterministic and content sensitive") {
  CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
  CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
  CHECK(fnv1a_hash("") != fnv1a_hash("x"));
}

TEST_CASE("cli analyze on the reference family") {
  fs::path out = fresh_dir("analyze");
  CliResult res = run_cli("--config " + data_path("analyze_la.cfg") + " --out " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("characteristic multiplicity r = 3") != std::string::npos);
  CHECK(res.output.find("transversally strictly hyperbolic: true") != std::string::npos);
  CHECK(res.output.find("neither involutive nor symplectic") != std::string::npos);
  CHECK(fs::exists(out / "analyze.txt"));
}

TEST_CASE("cli analyze flags a Jordan block with exit code 2") {
  fs::path out = fresh_dir("jordan");
  CliResult res = run_cli("--config " + data_path("analyze_jordan.cfg") + " --out " + out.string());
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("semisimple: false") != std::string::npos);
}

TEST_CASE("cli reports missing configs as usage errors") {
  CliResult res = run_cli("--config /nonexistent/path.cfg --out /tmp/hypan-none");
  CHECK(res.exit_code == 1);
}

TEST_CASE("cli cones reports the inclusion chain") {
  fs::path out = fresh_dir("cones");
  CliResult res = run_cli("--config " + data_path("cones_la.cfg") + " --out " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("lineality dimension: 3") != std::string::npos);
  CHECK(res.output.find("inside sigma-orthogonal of tangent: true") != std::string::npos);
  CHECK(res.output.find("meets tangent space: true") != std::string::npos);
  CHECK(res.output.find("strictly larger than its tangent part: true") != std::string::npos);
}

TEST_CASE("cli simulate output is byte-identical across repeats") {
  fs::path out1 = fresh_dir("sim1"), out2 = fresh_dir("sim2");
  CliResult r1 =
      run_cli("--config " + data_path("simulate_mu05.cfg") + " --out " + out1.string());
  CliResult r2 =
      run_cli("--config " + data_path("simulate_mu05.cfg") + " --out " + out2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.output.find("energy bound (SU,U) <= e^{2t}(SU,U)(0): holds") != std::string::npos);
  CHECK(r1.output.find("gronwall check (K=2): passed") != std::string::npos);
  std::string csv1 = read_file((out1 / "timeseries.csv").string());
  std::string csv2 = read_file((out2 / "timeseries.csv").string());
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("t,norm2,SUU,E,seminorm1\n", 0) == 0);
}

TEST_CASE("cli verify passes on the discrete identities") {
  fs::path out = fresh_dir("verify");
  fs::path cfg = out / "verify.cfg";
  write_text(cfg.string(), "[run]\ncommand = verify\n[params]\nmu = 0.5\nn = 65\n");
  CliResult res = run_cli("--config " + cfg.string() + " --out " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("FAIL") == std::string::npos);
  CHECK(res.output.find("pass oscillator ground level") != std::string::npos);
}

TEST_SUITE_END();
