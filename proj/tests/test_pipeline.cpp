#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "neflab/io.hpp"
#include "neflab/runner.hpp"

using namespace neflab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "neflab_pipeline" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string small_config_text(const std::string& out_dir) {
  return std::string(R"({
    "n": 1, "N": 32, "k": 1, "p": 3.0,
    "rho": {"terms": [{"amplitude": 0.01, "freq": [1, 0]}]},
    "F": {"family": "bump", "amplitude": 0.05, "sharpness": 2.0},
    "t_list": [0.5],
    "beta_schedule": [25, 50, 100],
    "s_grid": {"count": 24, "max_factor": 1.5},
    "output_dir": ")") +
         out_dir + R"("})";
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults and echo") {
    ExperimentConfig cfg = parse_config(R"({"n": 2, "N": 16})");
    CHECK(cfg.n == 2);
    CHECK(cfg.k == 2);  // defaults to k = n
    CHECK(cfg.p == 3.0);
    CHECK(cfg.t_list == std::vector<double>{1.0});
    CHECK(cfg.beta_schedule.size() == 5);
  }
  SUBCASE("malformed JSON") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"N": 16})"), ConfigError);  // n missing
  }
  SUBCASE("invariant violations name the offending field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"n": 2, "N": 16, "p": 1.5})"),
                         "config: p > n is required", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"n": 1, "N": 16, "k": 2})"),
                         "config: k must lie in {1..n}", ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 16, "t_list": [0.2, 0.5]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 16, "t_list": [1.5]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 16, "beta_schedule": [0.5, 2]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 12})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 16, "g": 0.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1, "N": 16, "F": {"family": "spikes"}})"),
                    ConfigError);
  }
}

TEST_CASE("solve pipeline produces artifacts and a passing report") {
  std::string dir = fresh_dir("solve");
  ExperimentConfig cfg = parse_config(small_config_text(dir));
  RunReport rep = run_solve(cfg);
  for (const std::string& f : rep.failures) MESSAGE(f);
  CHECK(rep.passed);

  CHECK(fs::exists(dir + "/phi_t0.neff"));
  CHECK(fs::exists(dir + "/V_t0.neff"));
  CHECK(fs::exists(dir + "/levels_t0.csv"));
  CHECK(fs::exists(dir + "/report_solve.json"));

  json doc = json::parse(rep.json_text);
  CHECK(doc["schema"] == "nef-lab-report/1");
  CHECK(doc["verb"] == "solve");
  CHECK(doc["passed"] == true);
  REQUIRE(doc["runs"].size() == 1);
  const json& run = doc["runs"][0];
  CHECK(run["residual_sup"].get<double>() <= 1e-9);
  CHECK(run["positivity_margin"].get<double>() > 0.0);
  CHECK(run["alpha0"].get<double>() > 0.0);
  CHECK(doc.contains("timings"));

  // the dumped potential round-trips
  PeriodicField phi = load_field(dir + "/phi_t0.neff");
  CHECK(phi.grid.n == 1);
  CHECK(phi.grid.N == 32);
  CHECK(phi.sup() <= 1e-12);  // sup-normalized
}

TEST_CASE("verify pipeline passes and is deterministic") {
  std::string dir1 = fresh_dir("verify1");
  std::string dir2 = fresh_dir("verify2");
  ExperimentConfig cfg = parse_config(small_config_text(dir1));
  RunReport rep1 = run_verify(cfg);
  for (const std::string& f : rep1.failures) MESSAGE(f);
  CHECK(rep1.passed);

  cfg.output_dir = dir2;
  RunReport rep2 = run_verify(cfg);
  CHECK(rep2.passed);

  json d1 = json::parse(rep1.json_text);
  json d2 = json::parse(rep2.json_text);
  CHECK(d1.contains("timings"));
  d1.erase("timings");
  d2.erase("timings");
  CHECK(d1.dump() == d2.dump());

  // report content sanity
  const json& run = d1["runs"][0];
  CHECK(run["young"]["violations"].get<int>() == 0);
  CHECK(run["trudinger_margin"].get<double>() >= 0.0);
  CHECK(run["holder"]["min_margin_levels"].get<double>() >= -1e-12);
  CHECK(run["degiorgi"]["S_infinity"].get<double>() >=
        run["sup_deficit"].get<double>() - 1e-6);
  // k = n = 1: the comparison pipeline runs
  CHECK(run["phi_comparison"]["sup_Phi"].get<double>() <=
        run["phi_comparison"]["eps_beta"].get<double>() + 1e-6);
  CHECK(d1["chain_constant"].get<double>() > 0.0);
}

TEST_CASE("verify rejects corrupt pre-existing artifacts") {
  std::string dir = fresh_dir("corrupt");
  ExperimentConfig cfg = parse_config(small_config_text(dir));

  SUBCASE("garbage payload") {
    std::FILE* fp = std::fopen((dir + "/phi_t0.neff").c_str(), "wb");
    std::fputs("not a field dump at all", fp);
    std::fclose(fp);
    CHECK_THROWS_AS(run_verify(cfg), MissingArtifacts);
  }
  SUBCASE("grid mismatch") {
    PeriodicField wrong{Grid(1, 16)};
    dump_field(wrong, dir + "/V_t0.neff");
    CHECK_THROWS_AS(run_verify(cfg), MissingArtifacts);
  }
}

TEST_CASE("power-law fitting") {
  std::vector<double> t{1.0, 0.3, 0.1, 0.03};
  std::vector<double> y;
  for (double ti : t) y.push_back(3.0 * ti * ti);
  CHECK(fit_power_exponent(t, y) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_power_exponent({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_exponent(t, {1.0}), std::invalid_argument);
}

TEST_CASE("sweep detects the degeneration exponent") {
  SUBCASE("t_list too short") {
    std::string dir = fresh_dir("sweep_short");
    ExperimentConfig cfg = parse_config(small_config_text(dir));
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  }
  SUBCASE("nu = 0 class, k = 1: exponent 1") {
    std::string dir = fresh_dir("sweep_n1");
    ExperimentConfig cfg = parse_config(small_config_text(dir));
    cfg.t_list = {1.0, 0.5, 0.25, 0.125};
    RunReport rep = run_sweep(cfg);
    for (const std::string& f : rep.failures) MESSAGE(f);
    CHECK(rep.passed);
    json doc = json::parse(rep.json_text);
    CHECK(doc["expected_exponent"].get<double>() == 1.0);
    CHECK(std::abs(doc["fitted_exponent"].get<double>() - 1.0) <= 0.1);
    CHECK(doc["uniformity_verdict"] == "uniform");
  }
  SUBCASE("n = 2 rank-one class, k = 2: exponent 1") {
    // quadrature-only check through the same fit used by the sweep
    ExperimentConfig cfg = parse_config(
        R"({"n": 2, "N": 8, "k": 2, "chi0": [1.0, 0.0],
            "rho": {"terms": [{"amplitude": 0.03, "freq": [1, 0, 0, 0]}]}})");
    ProblemSpec spec = build_problem(cfg);
    SpectralTransform st(spec.grid);
    std::vector<double> t{0.04, 0.02, 0.01, 0.005}, c;
    for (double ti : t) c.push_back(cohomology_constant(st, spec, ti, 2));
    CHECK(spec.nef.nu == 1);
    CHECK(std::abs(fit_power_exponent(t, c) - 1.0) <= 0.1);
  }
}
