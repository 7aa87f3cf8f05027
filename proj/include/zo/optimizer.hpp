#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zo/estimators.hpp"
#include "zo/problems.hpp"

namespace zo {

enum class Setting {
  det_nonsmooth_cvx,
  det_nonsmooth_scvx,
  det_smooth_cvx,
  det_smooth_scvx,
  det_smooth_noncvx,
  sto_nonsmooth_cvx,
  sto_nonsmooth_scvx,
  sto_smooth_cvx,
  sto_smooth_scvx,
  sto_smooth_noncvx,
};

inline constexpr Setting kAllSettings[] = {
    Setting::det_nonsmooth_cvx, Setting::det_nonsmooth_scvx, Setting::det_smooth_cvx,
    Setting::det_smooth_scvx,   Setting::det_smooth_noncvx,  Setting::sto_nonsmooth_cvx,
    Setting::sto_nonsmooth_scvx, Setting::sto_smooth_cvx,    Setting::sto_smooth_scvx,
    Setting::sto_smooth_noncvx};

Setting parse_setting(const std::string& id);
std::string_view to_string(Setting s);
bool is_stochastic(Setting s);
// Settings whose (eta, alpha) are derived from a target precision; the rest
// derive them from T.
bool needs_epsilon(Setting s);

enum class Averaging { last, uniform_mean, rho_weighted };
std::string_view to_string(Averaging a);

// What final_metric measures.
enum class Metric {
  mean_gap,       // (1/T) sum f(x_t) - f*
  weighted_gap,   // f(sum w_t x_t / sum w_t) - f*
  last_gap,       // f(x_{T+1}) - f*
  mean_grad_sq,   // (1/T) sum ||grad f(x_t)||^2
};
std::string_view to_string(Metric m);

struct Schedule {
  Setting setting = Setting::det_nonsmooth_cvx;
  double eta = 0.0;
  double alpha = 0.0;
  std::int64_t T = 0;
  Averaging averaging = Averaging::last;
  Metric metric = Metric::last_gap;
  std::optional<double> rho;
  std::optional<double> epsilon;
  double c0 = 1.0;
  std::vector<std::string> warnings;
};

struct ScheduleRequest {
  std::optional<std::int64_t> T = std::nullopt;
  std::optional<double> epsilon = std::nullopt;
  std::optional<double> c0 = std::nullopt;  // measured fourth-moment constant; 1.0 if unset
  std::optional<double> eta_override = std::nullopt;
  std::optional<double> alpha_override = std::nullopt;
};

// Largest T a schedule will report; corollary values above it are clamped.
inline constexpr std::int64_t kMaxIterations = 4'000'000'000LL;

// (eta, alpha, T, averaging) for a setting from the problem's declared
// constants. Throws ConfigError("missing constant <name>") when a needed
// constant is undeclared.
Schedule make_schedule(Setting setting, const Problem& problem, const ScheduleRequest& request,
                       const Vector& x1);
Schedule make_schedule(Setting setting, const Problem& problem, const ScheduleRequest& request);

// w_t = rho^{-t}, t = 1..T.
// Throws ParameterError once rho^{-t} overflows.
std::vector<double> rho_weights(double rho, std::int64_t T);
// Same weights times rho^T, i.e. rho^{T-t}; the last one is 1. Safe for long runs.
std::vector<double> rho_weights_scaled(double rho, std::int64_t T);

// sum w_t x_t / sum w_t, weights rescaled by their maximum first. w_t >= 0, some w_t > 0.
Vector weighted_average(const std::vector<Vector>& points, const std::vector<double>& weights);

struct RunRow {
  std::int64_t t = 0;
  double f_value = 0.0;
  double f_gap = 0.0;
  double grad_norm_sq = 0.0;
  double est_norm_sq = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::string setting;
  std::string estimator;
  std::string problem;
  int d = 0;
  std::int64_t T = 0;
  std::int64_t iterations_done = 0;
  long long queries = 0;
  std::string metric;
  double final_metric = 0.0;
  double output_gap = 0.0;  // gap at the output point of the averaging rule
  Vector output_point;
  bool diverged = false;
  bool exited_box = false;
  std::vector<std::string> warnings;
};

struct RunRecord {
  std::vector<RunRow> rows;
  RunSummary summary;
  // Filled when RunOptions::keep_trajectory is set. trajectory[k] = x_{k+1}
  // for k = 0..T; prev_values[k] is the stored residual value before step
  // k + 1, i.e. f(x_k + alpha u_k) (with x_0 = x_1).
  std::vector<Vector> trajectory;
  std::vector<double> prev_values;
  std::vector<double> est_norm_sq;
};

struct RunOptions {
  EstimatorKind estimator = EstimatorKind::residual;
  std::optional<Vector> x1;
  std::int64_t row_stride = 1;  // record every k-th row (always the last)
  bool keep_trajectory = false;
  bool record_gradient = true;  // diagnostic grad norm per row and for mean_grad_sq
};

// Divergence threshold as a multiple of max(||x_1||, 1).
inline constexpr double kDivergenceFactor = 1e6;

// Algorithm 1: deterministic oracle.
RunRecord run_deterministic(const Problem& p, const Schedule& s, std::uint64_t seed,
                            const RunOptions& opts = {});
// Algorithm 2: fresh xi_t per query from the stochastic oracle.
RunRecord run_stochastic(const Problem& p, const Schedule& s, std::uint64_t seed,
                         const RunOptions& opts = {});

void write_csv(std::ostream& os, const RunRecord& r);
std::string summary_json(const RunSummary& s);

}  // namespace zo
