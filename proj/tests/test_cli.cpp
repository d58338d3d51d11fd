#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "warpgeo/errors.hpp"
#include "warpgeo/suite.hpp"

using namespace warpgeo;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "name": "tiny",
  "coords": ["x", "y"],
  "box": [[-1, 1], [-1, 1]],
  "metric": [["1", "0"], ["0", "METRIC"]]
})";

std::string with_metric(const std::string& entry) {
  std::string s = kMinimal;
  s.replace(s.find("METRIC"), 6, entry);
  return s;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  const fs::path tmp = fs::temp_directory_path() / "warpgeo_cli_out.txt";
  const std::string cmd = std::string(WARPGEO_CLI) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("every bundled fixture loads") {
  for (const std::string& n : fixture_names()) {
    INFO(n);
    const ManifoldSpecFile f = load_fixture(n);
    CHECK(f.name == n);
    CHECK(f.manifold.dim() >= 2);
  }
}

TEST_CASE("spec errors") {
  CHECK_NOTHROW(parse_spec(with_metric("1 + x^2")));
  try {
    parse_spec(with_metric("x^"));
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse_spec(with_metric("q")), SpecError);
  CHECK_THROWS_AS(parse_spec(with_metric("-1")), SpecError);
  CHECK_THROWS_AS(parse_spec("{ not json"), SpecError);
  CHECK_THROWS_AS(parse_spec(with_metric("1").insert(1, "\"colour\": 1,")), SpecError);
  std::string asym = with_metric("1");
  asym.replace(asym.find("[\"1\", \"0\"]"), 10, "[\"1\", \"x\"]");
  CHECK_THROWS_AS(parse_spec(asym), SpecError);
}

TEST_CASE("load-time axiom checks honour expect_fail") {
  std::string s = R"({
    "name": "bad-contact",
    "coords": ["x", "y", "z"],
    "box": [[-1, 1], [-1, 1], [-1, 1]],
    "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
    "contact": {"phi": [["0", "-2", "0"], ["2", "0", "0"], ["0", "0", "0"]],
                "xi": ["0", "0", "1"], "eta": ["0", "0", "1"]}
  })";
  CHECK_THROWS_AS(parse_spec(s), SpecError);
  LoadOptions quiet;
  quiet.run_checks = false;
  CHECK_NOTHROW(parse_spec(s, "<string>", quiet));
}

TEST_CASE("suite composition and determinism") {
  SuiteOptions o;
  o.suite = "axioms";
  o.samples = 5;
  const RunReport a = run_suite(o);
  CHECK(a.hard_failures() == 0);
  CHECK(a.reports.size() >= 20);
  CHECK(a.find("contact_metric", "sasakian-r3") != nullptr);
  o.jobs = 3;
  const RunReport b = run_suite(o);
  CHECK(render(a) == render(b));
  CHECK(diff_reports(to_json(a), to_json(b)).empty());
  o.seed = 43;
  CHECK_FALSE(diff_reports(to_json(a), to_json(run_suite(o))).empty());
}

TEST_CASE("tolerance overrides rejudge reports") {
  SuiteOptions o;
  o.suite = "axioms";
  o.samples = 3;
  o.tolerances["almost_contact"] = 0.0;
  o.tolerances["algebraic"] = 1e-3;
  const RunReport r = run_suite(o);
  const CheckReport* ac = r.find("almost_contact", "sasakian-r3");
  REQUIRE(ac != nullptr);
  CHECK(ac->tolerance == 0.0);
  o.tolerances = {{"no_such_check", 1.0}};
  CHECK_THROWS_AS(run_suite(o), std::invalid_argument);
  o.tolerances.clear();
  o.suite = "nope";
  CHECK_THROWS_AS(run_suite(o), std::invalid_argument);
}

TEST_CASE("command line exit codes") {
  std::string out;
  CHECK(run_cli("verify --suite nope") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("verify --suite axioms --jobs 0") == 2);
  CHECK(run_cli("verify --suite axioms --samples 3 --tol bogus=1") == 2);
  CHECK(run_cli("verify --suite contactization --alpha 2 --samples 5", &out) == 0);
  CHECK(out.find("\"expected-fail\"") != std::string::npos);

  CHECK(run_cli("christoffel sphere --point 0.7853981633974483,0", &out) == 0);
  CHECK(out.find("\"value\": -0.5") != std::string::npos);
  CHECK(run_cli("christoffel sphere --point 1") == 2);

  const fs::path dir = fs::temp_directory_path();
  const std::string csv = (dir / "warpgeo_eq.csv").string();
  CHECK(run_cli("geodesic sphere --p0 1.5707963267948966,0 --v0 0,1 --t 1 --csv " + csv, &out) == 0);
  CHECK(fs::exists(csv));

  const fs::path bad = dir / "warpgeo_bad.spec";
  std::ofstream(bad) << with_metric("x^");
  CHECK(run_cli("christoffel " + bad.string() + " --point 0,0") == 2);
}

TEST_CASE("report diff") {
  const fs::path dir = fs::temp_directory_path();
  const std::string a = (dir / "warpgeo_a.json").string(), b = (dir / "warpgeo_b.json").string(),
                    c = (dir / "warpgeo_c.json").string();
  CHECK(run_cli("verify --suite axioms --samples 3 --out " + a) == 0);
  CHECK(run_cli("verify --suite axioms --samples 3 --out " + b) == 0);
  CHECK(run_cli("verify --suite axioms --samples 3 --seed 9 --out " + c) == 0);
  std::string out;
  CHECK(run_cli("report --diff " + a + " " + b, &out) == 0);
  CHECK(out == "identical\n");
  CHECK(run_cli("report --diff " + a + " " + c) == 1);
}
