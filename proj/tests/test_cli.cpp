#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <locale>

#include "cli.hpp"
#include "qnm/report.hpp"

using namespace qnm::cli;

namespace {

const std::string models = QNM_MODELS_DIR;

RunConfig solve_config() {
  RunConfig c;
  c.command = "solve";
  c.model_path = models + "/rod.json";
  c.re_max = 20.0;
  c.im_min = -2.0;
  return c;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST_CASE("solve report lists the rod spectrum") {
  const auto r = run(solve_config());
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["tool"] == "qnm");
  CHECK(doc["version"] == "0.1.0");
  CHECK(doc["model"]["sha256"] == qnm::sha256_hex(qnm::read_file(models + "/rod.json")));
  CHECK(doc["result"]["count"] == 13);
  CHECK(doc["result"]["modes"][0]["omega"]["re"].get<double>() == doctest::Approx(0.7853981633974483));
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  setenv("QNM_THREADS", "1", 1);
  const auto one = run(solve_config()).report;
  setenv("QNM_THREADS", "4", 1);
  const auto four = run(solve_config()).report;
  unsetenv("QNM_THREADS");
  CHECK(one == four);
  CHECK(one == run(solve_config()).report);
}

TEST_CASE("CSV output ignores the global locale") {
  auto c = solve_config();
  c.format = "csv";
  const auto plain = run(c).report;
  const auto previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const auto localized = run(c).report;
  std::locale::global(previous);
  CHECK(plain == localized);
  CHECK(plain.rfind("# qnm 0.1.0 solve sha256=", 0) == 0);
  CHECK(plain.find("0,78539816339744828") == std::string::npos);
  CHECK(plain.find("0.78539816339744828") != std::string::npos);
}

TEST_CASE("gram reads frequencies from a solve report") {
  const auto dir = std::filesystem::temp_directory_path() / "qnm_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "solve.json").string();
  qnm::write_file(path, run(solve_config()).report);
  RunConfig c;
  c.command = "gram";
  c.model_path = models + "/rod.json";
  c.modes_path = path;
  const auto r = run(c);
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["result"]["offdiag_max"].get<double>() < 1e-8);
  CHECK(doc["result"]["omegas"].size() == 13);
}

TEST_CASE("errors become reports with exit codes") {
  RunConfig bad = solve_config();
  bad.model_path = models + "/missing.json";
  auto r = run(bad);
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.report)["error"]["kind"] == "InvalidConfig");

  bad = solve_config();
  bad.format = "xml";
  CHECK(run(bad).exit_code == 2);

  RunConfig p;
  p.command = "perturb";
  p.model_path = models + "/rod.json";
  p.v_left = 0.0;
  p.v_right = 0.95;
  p.v_value = 5.0;
  p.mu = {1.0};
  p.truncation = 4;
  r = run(p);
  CHECK(r.exit_code == 3);
  const auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["status"] == "error");
  CHECK(doc["error"]["kind"] == "RootLeftRectangle");

  RunConfig e;
  e.command = "evolve";
  e.model_path = models + "/kg_barrier.json";
  CHECK(run(e).exit_code == 2);
}

TEST_CASE("perturb report layout") {
  RunConfig p;
  p.command = "perturb";
  p.model_path = models + "/rod.json";
  p.truncation = 10;
  const auto r = run(p);
  REQUIRE(r.exit_code == 0);
  const auto res = nlohmann::json::parse(r.report)["result"];
  for (const char* key : {"mode_index", "omega0", "first_order", "second_order", "exact", "residual_scaling"})
    CHECK(res.contains(key));
  CHECK(res["exact"].size() == 3);
}

TEST_CASE("sumrule table") {
  RunConfig c;
  c.command = "sumrule";
  c.model_path = models + "/rod.json";
  c.max_modes = 12;
  const auto r = run(c);
  REQUIRE(r.exit_code == 0);
  const auto table = nlohmann::json::parse(r.report)["result"]["table"];
  CHECK(table.size() == 11);
  CHECK(table[0]["pairs"] == 2);
  CHECK(table[10]["modes"] == 24);
}
