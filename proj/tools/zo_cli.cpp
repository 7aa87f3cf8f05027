// Command-line front end: run, sweep-d, sweep-eps, diagnose, estimate-constants.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "zo/errors.hpp"
#include "zo/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> problem, setting, estimator, out, suite;
  std::optional<std::int64_t> T, row_stride;
  std::optional<double> eps, eta, alpha, mu, L, sigma0, c0, temperature;
  std::optional<int> dim;
  std::vector<std::uint64_t> seeds;
  std::vector<int> d_sweep;
  std::vector<double> eps_list;
  std::vector<std::string> corrupt;
  bool gnuplot = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override it)");
  sub->add_option("--problem", f.problem, "norm|quadratic|logsumexp|nonconvex|least_squares|...");
  sub->add_option("--setting", f.setting, "one of the ten schedule settings");
  sub->add_option("--estimator", f.estimator, "residual|residual_gaussian|one_point|two_point|spsa1");
  sub->add_option("--T", f.T, "iterations");
  sub->add_option("--eps", f.eps, "target accuracy");
  sub->add_option("--seeds", f.seeds, "comma-separated seeds")->delimiter(',');
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--eta", f.eta, "step size override");
  sub->add_option("--alpha", f.alpha, "smoothing radius override");
  sub->add_option("--dim", f.dim, "dimension");
  sub->add_option("--mu", f.mu);
  sub->add_option("--L", f.L);
  sub->add_option("--temperature", f.temperature);
  sub->add_option("--sigma0", f.sigma0, "value-noise level");
  sub->add_option("--c0", f.c0, "measured fourth-moment constant");
  sub->add_option("--row-stride", f.row_stride, "keep every k-th trajectory row");
  sub->add_option("--corrupt", f.corrupt, "NAME=FACTOR, scales a declared constant");
  sub->add_option("--d-sweep", f.d_sweep)->delimiter(',');
  sub->add_option("--eps-list", f.eps_list)->delimiter(',');
  sub->add_flag("--gnuplot", f.gnuplot, "also write a gnuplot script");
}

zo::ExperimentConfig resolve(const Flags& f) {
  zo::ExperimentConfig c = f.config.empty() ? zo::ExperimentConfig{} : zo::load_config(f.config);
  if (f.problem) c.problem = *f.problem;
  if (f.setting) c.setting = *f.setting;
  if (f.estimator) c.estimator = *f.estimator;
  if (f.out) c.output_dir = *f.out;
  if (f.T) c.T = f.T;
  if (f.eps) c.epsilon = f.eps;
  if (f.eta) c.eta = f.eta;
  if (f.alpha) c.alpha = f.alpha;
  if (f.c0) c.c0 = f.c0;
  if (f.row_stride) c.row_stride = *f.row_stride;
  if (f.dim) c.params.dim = *f.dim;
  if (f.mu) c.params.mu = f.mu;
  if (f.L) c.params.L = *f.L;
  if (f.temperature) c.params.temperature = *f.temperature;
  if (f.sigma0) c.params.sigma0 = *f.sigma0;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (!f.d_sweep.empty()) c.d_sweep = f.d_sweep;
  if (!f.eps_list.empty()) c.eps_list = f.eps_list;
  if (f.gnuplot) c.gnuplot = true;
  for (const auto& kv : f.corrupt) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw zo::ConfigError("--corrupt expects NAME=FACTOR, got " + kv);
    try {
      c.corrupt[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw zo::ConfigError("bad factor in --corrupt " + kv);
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeroth-order residual-feedback toolkit"};
  app.require_subcommand(1);
  Flags f;
  std::string suite = "all";
  auto* run = app.add_subcommand("run", "run the optimizer for each seed");
  auto* sd = app.add_subcommand("sweep-d", "T_eps against dimension");
  auto* se = app.add_subcommand("sweep-eps", "T_eps against accuracy");
  auto* dg = app.add_subcommand("diagnose", "bound checks");
  auto* ec = app.add_subcommand("estimate-constants", "estimate c0 and noise levels");
  for (auto* s : {run, sd, se, dg, ec}) add_common(s, f);
  dg->add_option("--suite", suite, "moments|smoothing|variance|proposition1|all");

  CLI11_PARSE(app, argc, argv);

  try {
    const zo::ExperimentConfig cfg = resolve(f);
    if (run->parsed()) return zo::cmd_run(cfg, std::cout);
    if (sd->parsed()) return zo::cmd_sweep_dimension(cfg, std::cout);
    if (se->parsed()) return zo::cmd_sweep_precision(cfg, std::cout);
    if (dg->parsed()) return zo::cmd_diagnose(cfg, suite, std::cout);
    if (ec->parsed()) return zo::cmd_estimate_constants(cfg, std::cout);
  } catch (const zo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
