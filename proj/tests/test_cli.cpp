#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace {

using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + CONFHESS_CLI_PATH + "\" " + args + " >cli_out.tmp 2>cli_err.tmp";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp("cli_out.tmp");
  r.err = slurp("cli_err.tmp");
  return r;
}

void ensure_fixtures() {
  static bool done = false;
  if (done) return;
  done = true;
  spill("cli_bubble.json",
        "{\"kind\": \"bubble\", \"n\": 3, \"params\": {\"a\": 1.0, \"b\": 1.0, "
        "\"xbar\": [0, 0, 0]}}\n");
  spill("cli_bubble_match.json",
        "{\"kind\": \"bubble\", \"n\": 3, \"params\": {\"a\": 1.0, "
        "\"b\": 0.16666666666666666, \"xbar\": [0.3, -0.2, 0.5]}}\n");
  spill("cli_bubble_off.json",
        "{\"kind\": \"bubble\", \"n\": 3, \"params\": {\"a\": 1.0, \"b\": 0.2, "
        "\"xbar\": [0.3, -0.2, 0.5]}}\n");
  spill("cli_well.json",
        "{\"kind\": \"custom\", \"n\": 3, \"params\": "
        "{\"expr\": \"0 - 20*(x1*x1 + x2*x2 + x3*x3)\"}}\n");
}

// Byte comparison against tests/golden; set CONFHESS_UPDATE_GOLDEN=1 to
// regenerate after an intentional format change.
void check_golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(CONFHESS_GOLDEN_DIR) + "/" + name;
  if (std::getenv("CONFHESS_UPDATE_GOLDEN") != nullptr) {
    spill(path, actual);
    MESSAGE("regenerated golden ", name);
    return;
  }
  const std::string want = slurp(path);
  REQUIRE_MESSAGE(!want.empty(), "missing golden file ", path);
  CHECK_MESSAGE(actual == want, "golden mismatch for ", name, "\n--- actual ---\n", actual);
}

json parse(const CliResult& r) { return json::parse(r.out); }

}  // namespace

TEST_CASE("eig reports the analytic spectrum and honors --expect") {
  ensure_fixtures();
  CliResult r = run_cli("eig --field cli_bubble.json --point 0,0,1 --expect 2,2,2 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("eig_bubble.json", r.out);
  json j = parse(r);
  CHECK(j["pass"] == true);
  CHECK(j["report"]["method"] == "analytic");
  CHECK(j["report"]["expect_gap"].get<double>() <= 1e-9);
}

TEST_CASE("eig with a wrong expectation exits 1") {
  ensure_fixtures();
  CliResult r = run_cli("eig --field cli_bubble.json --point 0,0,1 --expect 1,0,0 --no-timestamp");
  CHECK(r.code == 1);
  json j = parse(r);
  CHECK(j["pass"] == false);
  CHECK(j["report"]["expect_gap"].get<double>() > 0.9);
}

TEST_CASE("eig with a missing spec file exits 2 with a diagnostic") {
  CliResult r = run_cli("eig --field cli_no_such.json --point 0,0,1");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(!r.err.empty());
}

TEST_CASE("invariance passes at the default tolerance") {
  ensure_fixtures();
  CliResult r = run_cli("invariance --field cli_bubble.json --samples 10 --seed 5 --no-timestamp");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j["pass"] == true);
  CHECK(j["report"]["max_gap"].get<double>() <= 1e-9);
}

TEST_CASE("invariance with an impossible tolerance exits 1") {
  ensure_fixtures();
  CliResult r = run_cli(
      "invariance --field cli_bubble.json --samples 10 --seed 5 --tol 1e-30 --no-timestamp");
  CHECK(r.code == 1);
  CHECK(parse(r)["pass"] == false);
}

TEST_CASE("invariance without --field is a usage error") {
  CliResult r = run_cli("invariance");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("cone prints constants, membership, and checks --expect-mu") {
  CliResult r = run_cli(
      "cone --cone gamma_k:1 --dim 3 --point 3,-1,-1 --expect-mu 2 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("cone_gamma1.json", r.out);
  json j = parse(r);
  CHECK(j["report"]["status"] == "interior");
  CHECK(j["report"]["mu_minus"].get<double>() == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("cone with a wrong --expect-mu exits 1") {
  CliResult r = run_cli("cone --cone gamma_k:1 --dim 3 --expect-mu 5 --no-timestamp");
  CHECK(r.code == 1);
  CHECK(parse(r)["pass"] == false);
}

TEST_CASE("cone reports an unbounded ray constant as a string") {
  CliResult r = run_cli("cone --cone gamma_k:2 --dim 3 --expect-mu unbounded --no-timestamp");
  CHECK(r.code == 0);
  CHECK(parse(r)["report"]["mu_minus"] == "unbounded");
}

TEST_CASE("cone with an unknown catalog name exits 2") {
  CliResult r = run_cli("cone --cone bogus:1 --dim 3");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("conditions fits the homogeneity degree") {
  CliResult r = run_cli(
      "conditions --f sigma_k:1 --samples 60 --seed 3 --expect-degree 1 --no-timestamp");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j["report"]["fitted_degree"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(j["report"]["min_partial"].get<double>() > 0.0);
}

TEST_CASE("conditions with a wrong degree expectation exits 1") {
  CliResult r = run_cli(
      "conditions --f sigma_k:1 --samples 60 --seed 3 --expect-degree 7 --no-timestamp");
  CHECK(r.code == 1);
}

TEST_CASE("conditions with an unknown function exits 2") {
  CliResult r = run_cli("conditions --f sigma_k:9 --samples 20");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("ode writes the CSV, the sidecar, and classifies the run") {
  CliResult r = run_cli(
      "ode --mu 3 --p 6 --v0 0 --w0 1.1 --tmax 5 --expect global --out cli_traj.csv "
      "--no-timestamp");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j["report"]["classification"] == "global");
  std::string csv = slurp("cli_traj.csv");
  CHECK(csv.rfind("t,v,w,phi,I,drift,cone_margin\n", 0) == 0);
  json side = json::parse(slurp("cli_traj.csv.json"));
  CHECK(side["classification"] == "global");
}

TEST_CASE("ode with a wrong classification expectation exits 1") {
  CliResult r = run_cli("ode --mu 3 --p 6 --v0 0 --w0 1.1 --tmax 5 --expect blowup --no-timestamp");
  CHECK(r.code == 1);
  CHECK(parse(r)["pass"] == false);
}

TEST_CASE("ode rejects mu at or below 1") {
  CliResult r = run_cli("ode --mu 0.5 --p 6 --v0 0 --w0 1");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("threshold prints the closed form and honors --expect") {
  CliResult r = run_cli("threshold --mu 3 --p 6 --v0 0 --expect 1 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("threshold_basic.json", r.out);
  CHECK(parse(r)["report"]["threshold_w0"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("threshold with a wrong expectation exits 1") {
  CliResult r = run_cli("threshold --mu 3 --p 6 --v0 0 --expect 2 --no-timestamp");
  CHECK(r.code == 1);
}

TEST_CASE("threshold outside the admissible exponent range exits 2") {
  CliResult r = run_cli("threshold --mu 3 --p 3 --v0 0");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("spheres locates the critical radius of a centered profile") {
  ensure_fixtures();
  CliResult r = run_cli(
      "spheres --field cli_bubble.json --point 0,0,0 --expect 1 --seed 7 --no-timestamp");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j["report"]["critical_lambda"].get<double>() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("spheres tests a single radius with --lam") {
  ensure_fixtures();
  CliResult r = run_cli(
      "spheres --field cli_bubble.json --point 0,0,0 --lam 0.5 --seed 7 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("spheres_lam.json", r.out);
  json j = parse(r);
  CHECK(j["report"]["holds"] == true);
  CHECK(j["report"]["comparison_min"].get<double>() >= 0.0);
}

TEST_CASE("spheres with a wrong critical expectation exits 1") {
  ensure_fixtures();
  CliResult r = run_cli(
      "spheres --field cli_bubble.json --point 0,0,0 --expect 3 --seed 7 --no-timestamp");
  CHECK(r.code == 1);
}

TEST_CASE("spheres flags a starting violation instead of erroring out") {
  ensure_fixtures();
  CliResult r = run_cli("spheres --field cli_well.json --point 0,0,0 --seed 7 --no-timestamp");
  CHECK(r.code == 1);
  json j = parse(r);
  CHECK(j["report"]["starting_violation"] == true);
  CHECK(j["pass"] == false);
}

TEST_CASE("spheres rejects a center off the boundary") {
  ensure_fixtures();
  CliResult r = run_cli("spheres --field cli_bubble.json --point 0,0,1 --seed 7");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("rigidity accepts a matched normalized profile") {
  ensure_fixtures();
  CliResult r = run_cli(
      "rigidity --field cli_bubble_match.json --f sigma_k:1 --cone gamma_k:1 "
      "--c 0.16666666666666666 --p 0 --seed 2 --no-timestamp");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j["report"]["rigidity"]["pass"] == true);
  CHECK(j["report"]["rigidity"]["f_gap"].get<double>() <= 1e-8);
  CHECK(j["report"]["residual"]["pass"] == true);
}

TEST_CASE("rigidity rejects a profile with the wrong normalization") {
  ensure_fixtures();
  CliResult r = run_cli(
      "rigidity --field cli_bubble_off.json --f sigma_k:1 --cone gamma_k:1 "
      "--c 0.16666666666666666 --p 0 --seed 2 --no-timestamp");
  CHECK(r.code == 1);
  json j = parse(r);
  CHECK(j["report"]["rigidity"]["pass"] == false);
  CHECK(j["report"]["rigidity"]["f_gap"].get<double>() > 0.1);
}

TEST_CASE("rigidity with a bad function index exits 2") {
  ensure_fixtures();
  CliResult r = run_cli(
      "rigidity --field cli_bubble_match.json --f sigma_k:0 --cone gamma_k:1 --c 0.1");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("counterexample certifies the one-variable profile") {
  CliResult r = run_cli("counterexample xn_only --mu 3 --c 1 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("counterexample_xn_only.json", r.out);
  json j = parse(r);
  CHECK(j["report"]["report"]["pass"] == true);
}

TEST_CASE("counterexample fails honestly under a cone it was not built for") {
  CliResult r = run_cli("counterexample boundary_drift --cone gamma_k:1 --no-timestamp");
  CHECK(r.code == 1);
  CHECK(parse(r)["pass"] == false);
}

TEST_CASE("counterexample with an unknown kind exits 2") {
  CliResult r = run_cli("counterexample bogus");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("residual certifies a matched profile and echoes the report keys") {
  ensure_fixtures();
  CliResult r = run_cli(
      "residual --field cli_bubble_match.json --f sigma_k:1 --cone gamma_k:1 --p 0 "
      "--c 0.16666666666666666 --seed 4 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("residual_match.json", r.out);
  json rep = parse(r)["report"];
  CHECK(rep.size() == 6);
  for (const char* key : {"interior_residual_max", "boundary_residual_max", "cone_margin_min",
                          "pass", "grid", "seed"})
    CHECK(rep.contains(key));
}

TEST_CASE("residual with a mismatched exponent exits 1") {
  ensure_fixtures();
  CliResult r = run_cli(
      "residual --field cli_bubble_match.json --f sigma_k:1 --cone gamma_k:1 --p 1 "
      "--c 0.16666666666666666 --seed 4 --no-timestamp");
  CHECK(r.code == 1);
  CHECK(parse(r)["report"]["pass"] == false);
}

TEST_CASE("residual with a missing grid file exits 2") {
  ensure_fixtures();
  CliResult r = run_cli(
      "residual --field cli_bubble_match.json --f sigma_k:1 --cone gamma_k:1 --p 0 --c 0.1 "
      "--grid cli_no_grid.json");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("ricci maps a spectrum forward and honors --expect") {
  CliResult r = run_cli("ricci --lams 1,-1,-1 --expect 0,-2,-2 --no-timestamp");
  CHECK(r.code == 0);
  check_golden("ricci_forward.json", r.out);
  json j = parse(r);
  CHECK(j["report"]["output"] == json::array({0.0, -2.0, -2.0}));
}

TEST_CASE("ricci with a wrong expectation exits 1") {
  CliResult r = run_cli("ricci --lams 1,-1,-1 --expect 1,1,1 --no-timestamp");
  CHECK(r.code == 1);
}

TEST_CASE("ricci rejects an undersized eigenvalue list") {
  CliResult r = run_cli("ricci --lams 1,2");
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("repeat runs are byte-identical on stdout and --out") {
  ensure_fixtures();
  CliResult r1 = run_cli(
      "spheres --field cli_bubble.json --point 0,0,0 --expect 1 --seed 7 --no-timestamp "
      "--out cli_rep_a.json");
  CliResult r2 = run_cli(
      "spheres --field cli_bubble.json --point 0,0,0 --expect 1 --seed 7 --no-timestamp "
      "--out cli_rep_b.json");
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(slurp("cli_rep_a.json") == slurp("cli_rep_b.json"));
  CHECK(slurp("cli_rep_a.json") == r1.out);
}

TEST_CASE("timestamps appear unless suppressed") {
  CliResult r = run_cli("threshold --mu 3 --p 6 --v0 0");
  CHECK(r.code == 0);
  json j = parse(r);
  CHECK(j.contains("generated_at"));
}

TEST_CASE("help exits 0") {
  CliResult r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(!r.out.empty());
}
