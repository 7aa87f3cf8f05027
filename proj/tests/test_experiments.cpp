#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zo/errors.hpp"
#include "zo/experiments.hpp"

using namespace zo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig c;
  apply_config_json(c, R"({"problem": "quadratic", "dim": 6, "mu": 0.5, "L": 3,
                           "setting": "det_smooth_scvx", "eps": 0.01, "seeds": [3, 4],
                           "out": "x", "corrupt": {"L": 0.5}, "gnuplot": true})");
  CHECK(c.problem == "quadratic");
  CHECK(c.params.dim == 6);
  CHECK(*c.params.mu == 0.5);
  CHECK(c.params.L == 3.0);
  CHECK(*c.epsilon == 0.01);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(c.corrupt.at("L") == 0.5);
  CHECK(c.gnuplot);
  CHECK_THROWS_AS(apply_config_json(c, R"({"problme": "norm"})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(c, R"({"dim": "six"})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(c, "[1, 2]"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(c, "{"), ConfigError);
}

TEST_CASE("corrupted constants") {
  ExperimentConfig c;
  c.problem = "quadratic";
  const double L = *build_problem(c).constants().L;
  c.corrupt["L"] = 0.5;
  CHECK(*build_problem(c).constants().L == doctest::Approx(L / 2));
  c.corrupt = {{"sigma0", 2.0}};
  CHECK_THROWS_AS(build_problem(c), ConfigError);  // not declared on a deterministic problem
  c.corrupt = {{"kappa", 2.0}};
  CHECK_THROWS_AS(build_problem(c), ConfigError);
}

TEST_CASE("line fitters recover exact slopes") {
  std::vector<double> d = {2, 4, 8, 16, 32}, T;
  for (double x : d) T.push_back(5 * x);
  const LineFit f = fit_loglog(d, T);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));

  std::vector<double> eps = {0.4, 0.2, 0.1, 0.05}, Te;
  for (double e : eps) Te.push_back(std::pow(e, -2.0));
  CHECK(fit_loglog(eps, Te).slope == doctest::Approx(-2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), ParameterError);
  CHECK_THROWS_AS(fit_line({1.0, 2.0}, {2.0}), DimensionError);
  CHECK_THROWS_AS(fit_loglog({1.0, -2.0}, {1.0, 1.0}), ParameterError);
}

TEST_CASE("T_eps search: grid then one bisection, censoring at the cap") {
  // metric(T) = 100 / T: the first grid pass is T = 128 (0.78 <= 1), the
  // bisection probes round(sqrt(64 * 128)) = 91 (1.099 > 1) and keeps 128.
  const auto m = [](std::int64_t T) { return 100.0 / double(T); };
  const TEpsEntry e = search_T_eps(m, 1.0, 1 << 20);
  CHECK(e.T_eps == 128);
  CHECK(!e.censored);
  CHECK(e.probes.back().first == 91);

  const TEpsEntry e2 = search_T_eps(m, 1.5, 1 << 20);  // 100/91 <= 1.5: bisection wins
  CHECK(e2.T_eps == 91);

  const TEpsEntry c = search_T_eps(m, 1e-9, 1024);
  CHECK(c.censored);

  const TEpsEntry one = search_T_eps([](std::int64_t) { return 0.0; }, 0.1, 10);
  CHECK(one.T_eps == 1);
}

TEST_CASE("sweep-d on the constant problem gives T_eps = 1") {
  ExperimentConfig c;
  c.problem = "constant";
  c.setting = "det_nonsmooth_cvx";
  c.epsilon = 0.01;
  c.d_sweep = {2, 8, 32};
  c.seeds = {1, 2};
  const SweepResult r = sweep_dimension(c);
  REQUIRE(r.entries.size() == 3);
  for (const auto& e : r.entries) CHECK(e.T_eps == 1);
}

TEST_CASE("censored cells stay out of the fit") {
  ExperimentConfig c;
  c.problem = "norm";
  c.setting = "det_nonsmooth_cvx";
  c.epsilon = 0.12;
  c.d_sweep = {2, 4, 64};
  c.seeds = {1, 2, 3};
  c.T_cap = 4096;
  const SweepResult r = sweep_dimension(c);
  CHECK(r.entries[2].censored);
  CHECK(r.n_censored == 1);
  CHECK(r.fit.n == 2);
}

TEST_CASE("sweep-eps on the norm problem: exponent near -2") {
  ExperimentConfig c;
  c.problem = "norm";
  c.params.dim = 8;
  c.setting = "det_nonsmooth_cvx";
  c.eps_list = {0.2, 0.1, 0.05, 0.025};
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const SweepResult r = sweep_precision(c);
  MESSAGE("exponent " << r.fit.slope);
  CHECK(r.n_censored == 0);
  CHECK(r.fit.slope >= -2.4);
  CHECK(r.fit.slope <= -1.6);
}

TEST_CASE("cmd_run writes per-seed files and an aggregate, deterministically") {
  ExperimentConfig c;
  c.problem = "norm";
  c.setting = "det_nonsmooth_cvx";
  c.T = 500;
  c.seeds = {7, 8};
  c.output_dir = scratch("run_a").string();
  std::ostringstream log;
  CHECK(cmd_run(c, log) == 0);
  for (const char* f : {"run_7.csv", "run_7.json", "run_8.csv", "summary.json"})
    CHECK(fs::exists(fs::path(c.output_dir) / f));
  const std::string first = slurp(fs::path(c.output_dir) / "run_7.csv");
  c.output_dir = scratch("run_b").string();
  CHECK(cmd_run(c, log) == 0);
  CHECK(slurp(fs::path(c.output_dir) / "run_7.csv") == first);
  const std::string summary = slurp(fs::path(c.output_dir) / "summary.json");
  CHECK(summary.find("\"mean_final_metric\"") != std::string::npos);
  CHECK(summary.find("\"std_final_metric\"") != std::string::npos);
}

TEST_CASE("cmd_run: missing sigma0 is a config error, diverged runs still exit 0") {
  ExperimentConfig c;
  c.setting = "sto_nonsmooth_cvx";
  c.T = 100;
  c.output_dir = scratch("run_c").string();
  std::ostringstream log;
  try {
    cmd_run(c, log);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing constant sigma0") != std::string::npos);
  }
  ExperimentConfig d;
  d.problem = "quadratic";
  d.setting = "det_smooth_cvx";
  d.T = 2000;
  d.eta = 50.0;
  d.output_dir = scratch("run_d").string();
  CHECK(cmd_run(d, log) == 0);
  CHECK(slurp(fs::path(d.output_dir) / "summary.json").find("\"n_diverged\": 1") !=
        std::string::npos);
}

TEST_CASE("cmd_diagnose: unknown suite, moments suite, corrupted constant") {
  ExperimentConfig c;
  c.output_dir = scratch("diag").string();
  std::ostringstream log;
  CHECK(cmd_diagnose(c, "everything", log) == 2);
  CHECK(cmd_diagnose(c, "moments", log) == 0);
  CHECK(fs::exists(fs::path(c.output_dir) / "diagnose_moments.json"));
  CHECK(cmd_diagnose(c, "proposition1", log) == 0);
}

TEST_CASE("cmd_estimate_constants writes c0 and noise levels") {
  ExperimentConfig c;
  c.problem = "norm";
  c.params.sigma0 = 0.3;
  c.output_dir = scratch("const").string();
  std::ostringstream log;
  CHECK(cmd_estimate_constants(c, log) == 0);
  const std::string js = slurp(fs::path(c.output_dir) / "constants.json");
  CHECK(js.find("\"c0\"") != std::string::npos);
  CHECK(js.find("\"sigma0_hat\"") != std::string::npos);
}

TEST_CASE("ensemble statistics") {
  ExperimentConfig c;
  c.problem = "norm";
  c.setting = "det_nonsmooth_cvx";
  c.seeds = {1, 2, 3, 4};
  const Problem p = build_problem(c);
  const EnsembleResult e = run_ensemble(c, p, 300, false);
  double m = 0;
  for (const auto& r : e.runs) m += r.summary.final_metric / 4;
  CHECK(e.mean == doctest::Approx(m));
  CHECK(e.std > 0);
  CHECK(e.n_diverged == 0);
  c.seeds.clear();
  CHECK_THROWS_AS(run_ensemble(c, p, 300), ConfigError);
}
