// End-to-end checks of the command-line tool: spec'd subcommands, exit-code
// contract, file outputs, and byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

#ifndef LYAP_CLI_PATH
#define LYAP_CLI_PATH "./lyap"
#endif

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  fs::path tmp = fs::temp_directory_path() / "lyap_cli_stdout.txt";
  std::string cmd = std::string(LYAP_CLI_PATH) + " " + args + " > " + tmp.string() +
                    " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  return RunResult{WEXITSTATUS(rc), ss.str()};
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

} // namespace

TEST_CASE("constants subcommand reproduces the closed form") {
  auto r = run_cli("constants --problem periodic-l1 --n 1 --T 3.141592653589793");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.stdout_text);
  CHECK(j.at("value").get<double>() == doctest::Approx(28.566370614359176).epsilon(1e-14));
  CHECK(j.at("schema_version") == "1");
  CHECK(j.at("config").at("n") == 1);
}

TEST_CASE("certify hill on a constant coefficient") {
  auto coeff = write_file("lyap_a5.json",
                          R"({"T": 3.141592653589793, "kind": "constant", "value": 5})");
  auto r = run_cli("certify --theorem hill --input " + coeff.string());
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.stdout_text);
  CHECK(j.at("certificate").at("verdict") == "Certified");
  CHECK(j.at("certificate").at("oracle_agrees") == true);
}

TEST_CASE("NotCertified is a verdict, not an error (exit 0)") {
  auto coeff =
      write_file("lyap_a0.json", R"({"T": 2.0, "kind": "constant", "value": 0})");
  auto r = run_cli("certify --theorem classical --input " + coeff.string());
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.stdout_text);
  CHECK(j.at("certificate").at("verdict") == "NotCertified");
}

TEST_CASE("exit codes: parse and input errors are 2") {
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
  CHECK(run_cli("certify --theorem hill --input /does/not/exist.json").exit_code == 2);
  auto bad = write_file("lyap_badT.json", R"({"T": 1.0, "kind": "constant", "value": 5})");
  CHECK(run_cli("certify --theorem hill --input " + bad.string()).exit_code == 2);
  auto garbage = write_file("lyap_garbage.json", "{not json");
  CHECK(run_cli("spectrum --coeff " + garbage.string()).exit_code == 2);
}

TEST_CASE("sweep writes an SVG with a CSV sibling") {
  fs::path svg = fs::temp_directory_path() / "lyap_chart.svg";
  fs::path csv = fs::temp_directory_path() / "lyap_chart.csv";
  std::error_code ec;
  fs::remove(svg, ec);
  fs::remove(csv, ec);
  auto r = run_cli("sweep --alpha 0:4:8 --beta 0:2:8 --T 6.283185307179586 --steps 128 "
                   "--out " + svg.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(svg));
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "alpha,beta,class,detail");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 64);
}

TEST_CASE("reports are byte-identical across reruns") {
  auto coeff = write_file("lyap_mathieu.json",
                          R"({"T": 6.283185307179586, "kind": "fourier", "a0": 0.2,
                              "terms": [[1.0, 0.0]]})");
  std::string args = "spectrum --coeff " + coeff.string() +
                     " --boundary antiperiodic --count 4 --steps 1024";
  auto r1 = run_cli(args);
  auto r2 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.stdout_text == r2.stdout_text);

  std::string margs = "minimize --quotient antiperiodic --p 2 --T 1 --mesh 128 --seed 7";
  auto m1 = run_cli(margs);
  auto m2 = run_cli(margs);
  REQUIRE(m1.exit_code == 0);
  CHECK(m1.stdout_text == m2.stdout_text);
}

TEST_CASE("spectrum csv export") {
  auto coeff = write_file("lyap_zero.json", R"({"T": 1.0, "kind": "constant", "value": 0})");
  auto r = run_cli("spectrum --coeff " + coeff.string() + " --count 3 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.rfind("index,value,multiplicity", 0) == 0);
}

TEST_CASE("resonant subcommand with a JSON spec") {
  auto spec = write_file("lyap_spec.json", R"({
    "components": [{"kind": "blend",
                    "b": {"kind": "constant", "value": 2.0},
                    "s0": 1.0,
                    "forcing": {"kind": "cosine", "amplitude": 0.05}}],
    "A": [{"kind": "constant", "value": 1.0}],
    "B": [{"kind": "constant", "value": 2.0}],
    "p": ["inf"]
  })");
  auto r = run_cli("resonant --spec " + spec.string() + " --cells 128 --probe 3");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.stdout_text);
  CHECK(j.at("hypotheses").at("verdict") == "Certified");
  CHECK(j.at("solve").at("converged") == true);
  CHECK(j.at("solve").at("residual").get<double>() <= 1e-8);
  CHECK(j.at("uniqueness").at("max_spread").get<double>() <= 1e-7);
}

TEST_CASE("pde lambda1 subcommand") {
  auto r = run_cli("pde --op lambda1 --domain square --cells 64");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.stdout_text);
  CHECK(j.at("lambda1").get<double>() == doctest::Approx(9.8696).epsilon(0.005));
}
