#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zo/diagnostics.hpp"
#include "zo/optimizer.hpp"
#include "zo/problems.hpp"

namespace zo {

struct ExperimentConfig {
  std::string problem = "norm";
  ProblemParams params;
  std::string estimator = "residual";
  std::string setting = "det_nonsmooth_cvx";
  std::optional<std::int64_t> T;
  std::optional<double> epsilon;
  std::vector<std::uint64_t> seeds{1};
  std::vector<int> d_sweep;
  std::vector<double> eps_list;
  std::string output_dir = "zo_out";
  std::optional<double> eta;
  std::optional<double> alpha;
  std::optional<double> c0;
  std::int64_t row_stride = 1;
  std::int64_t T_cap = std::int64_t{1} << 22;  // sweep budget per cell
  std::map<std::string, double> corrupt;       // constant name -> multiplier
  bool gnuplot = false;
};

// Flat JSON object; keys mirror the CLI flags. Unknown keys are an error.
ExperimentConfig load_config(const std::string& path);
void apply_config_json(ExperimentConfig& cfg, const std::string& json_text);

// Problem for the config, with declared constants scaled by `corrupt`
// (names L0, L, mu, sigma0, sigma1, f_star).
Problem build_problem(const ExperimentConfig& cfg);
Problem build_problem(const ExperimentConfig& cfg, int dim);

ScheduleRequest schedule_request(const ExperimentConfig& cfg);

// ---- fitting ---------------------------------------------------------------

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Least-squares line y = intercept + slope x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Slope of log y against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// ---- runs --------------------------------------------------------------------

struct EnsembleResult {
  std::vector<RunRecord> runs;
  double mean = 0.0;
  double std = 0.0;
  int n_diverged = 0;
  Schedule schedule;
};

// One run per seed (in parallel), schedule from the config with T replaced by
// `T` when given.
EnsembleResult run_ensemble(const ExperimentConfig& cfg, const Problem& p,
                            std::optional<std::int64_t> T = std::nullopt,
                            bool keep_rows = true);

// ---- T_eps search ------------------------------------------------------------

struct TEpsEntry {
  double key = 0.0;  // d or eps
  std::int64_t T_eps = 0;
  bool censored = false;
  double metric = 0.0;  // seed-averaged metric at T_eps
  std::vector<std::pair<std::int64_t, double>> probes;
};

// Smallest T on the grid 2^k with mean_metric(T) <= eps, refined by one
// bisection step between the last failing and the first passing grid point.
// Exceeding `T_cap` marks the entry censored.
TEpsEntry search_T_eps(const std::function<double(std::int64_t)>& mean_metric, double eps,
                       std::int64_t T_cap);

struct SweepResult {
  std::vector<TEpsEntry> entries;
  LineFit fit;  // log T_eps against log key, censored entries excluded
  std::size_t n_censored = 0;
};

SweepResult sweep_dimension(const ExperimentConfig& cfg);
SweepResult sweep_precision(const ExperimentConfig& cfg);

// ---- diagnostics suites ------------------------------------------------------

inline constexpr const char* kSuites[] = {"moments", "smoothing", "variance", "proposition1",
                                          "all"};
bool is_suite(const std::string& name);

// Reports for a suite. "all" adds declared-constant and smoothing checks for
// the configured problem.
std::vector<BoundCheckReport> run_suite(const std::string& suite, const ExperimentConfig& cfg,
                                        std::uint64_t seed);

// ---- commands (return process exit codes) ---------------------------------------

int cmd_run(const ExperimentConfig& cfg, std::ostream& log);
int cmd_sweep_dimension(const ExperimentConfig& cfg, std::ostream& log);
int cmd_sweep_precision(const ExperimentConfig& cfg, std::ostream& log);
int cmd_diagnose(const ExperimentConfig& cfg, const std::string& suite, std::ostream& log);
int cmd_estimate_constants(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace zo
