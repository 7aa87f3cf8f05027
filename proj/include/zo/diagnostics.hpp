#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zo/estimators.hpp"
#include "zo/optimizer.hpp"
#include "zo/parallel.hpp"
#include "zo/problems.hpp"
#include "zo/report.hpp"
#include "zo/smoothing.hpp"

namespace zo {

// ---- moment identities ----------------------------------------------------

// |MC E||u u^T a||^2 - ||a||^2/d| against 3 SE, u on the sphere.
BoundCheckReport check_sphere_moment(int d, const Vector& a, std::int64_t n,
                                     const RandomStream& stream, Exec exec = Exec::parallel);
// |MC E||u||^2 - d/(d+2)| against 3 SE, u in the ball.
BoundCheckReport check_ball_second_moment(int d, std::int64_t n, const RandomStream& stream,
                                          Exec exec = Exec::parallel);
// Per-coordinate |MC E u| against 3 SE, for one distribution.
BoundCheckReport check_zero_mean(Distribution dist, int d, std::int64_t n,
                                 const RandomStream& stream, Exec exec = Exec::parallel);

// ---- fourth-moment constant ---------------------------------------------

struct C0Estimate {
  int d = 0;
  double c0_hat = 0.0;
  std::int64_t n_draws = 0;
  double alpha = 0.0;
  std::size_t argmax_probe = 0;
};

// c0_hat = max over probes of d sqrt(E (f(x + alpha u) - E f(x + alpha u))^4) / (alpha L0)^2,
// u on the sphere. Empty probes: x_init plus four points at distance 1 from
// x_star (or from x_init when x_star is unknown).
C0Estimate estimate_c0(const Problem& p, double alpha, std::int64_t n_draws,
                       const RandomStream& stream, std::vector<Vector> probes = {},
                       Exec exec = Exec::parallel);

// ---- variance lemmas ----------------------------------------------------
//
// Conditional checks along a recorded trajectory: the positions x_{t-1}, x_t
// and the realised ||g_{t-1}|| are frozen, and E||g_t||^2 is estimated by
// resampling u_t, u_{t-1} (and xi_t, xi_{t-1} in stochastic mode). This is
// the expectation the lemmas' proofs take.

struct VarianceCheckOptions {
  std::int64_t n_resample = 20'000;
  std::int64_t gradient_budget = 40'000;  // MC draws for grad f_alpha terms
  std::size_t max_iterates = 0;           // 0: every iterate; else an even subsample
  bool noisy = false;
  Exec exec = Exec::parallel;
};

// E||g_t||^2 <= 12 c0 d L0^2 (deterministic) or 24 c0 d L0^2 + 24 d^2 sigma0^2/alpha^2
// (stochastic). Needs eta <= alpha/(3 d L0).
BoundCheckReport check_variance_nonsmooth(const Problem& p, const RunRecord& run, double alpha,
                                          double eta, double c0, const RandomStream& stream,
                                          const VarianceCheckOptions& opts = {});

// Deterministic: E||g_t||^2 <= 1/2 ||g_{t-1}||^2 + 8d ||grad f_a(x_t)||^2
//   + 8d ||grad f_a(x_{t-1})||^2 + 10 d^2 L^2 alpha^2, needs eta <= alpha/(4 d L0).
// Stochastic: 1/4, 16d, 16d, + 64 d^2 sigma0^2/alpha^2 + 32 d sigma1^2 + 10 d^2 L^2 alpha^2,
//   needs eta <= alpha/(8 d L0).
BoundCheckReport check_variance_smooth(const Problem& p, const RunRecord& run, double alpha,
                                       double eta, const RandomStream& stream,
                                       const VarianceCheckOptions& opts = {});

// ---- residual unbiasedness --------------------------------------------

// Conditional MC mean of the residual estimate at x with a frozen previous
// value vs `reference` (grad f_alpha(x)); per coordinate, 5 SE.
BoundCheckReport check_residual_unbiased(const Problem& p, const Vector& x, double prev_value,
                                         double alpha, const Vector& reference, std::int64_t n,
                                         const RandomStream& stream, bool noisy = false,
                                         Exec exec = Exec::parallel);

// ---- least squares ----------------------------------------------------

struct Proposition1Options {
  int n_x = 20;
  int n_b_redraws = 20;
  double probe_radius = 1.0;  // probes uniform in the ball of this radius around x_true
};

// Value variance vs (1/d) gradient variance over the data, both averaged over
// fresh response draws. lhs = mean value variance, rhs = mean gradient
// variance / d; slack 3 SE of the redraw average.
BoundCheckReport check_proposition1(const LeastSquaresData& data, const RandomStream& stream,
                                    const Proposition1Options& opts = {});

// ---- exact checks ------------------------------------------------------

// 2 mu (f(x) - f*) <= ||grad f(x)||^2 at the probes.
BoundCheckReport check_pl_inequality(const Problem& p, const std::vector<Vector>& probes);

// Randomised Definition 1/2/3 checks of the declared L0, L, mu on pairs inside
// the experiment box, plus f(x_star) = f_star. One report per declared
// constant.
std::vector<BoundCheckReport> check_declared_constants(const Problem& p, int n_pairs,
                                                       const RandomStream& stream);

// Points uniform in the experiment box (ball of box_radius around x_star), or
// in the ball of radius `fallback_radius` around x_init.
std::vector<Vector> box_probes(const Problem& p, int n, const RandomStream& stream,
                               double fallback_radius = 1.0);

// ---- estimator variance ------------------------------------------------

struct VarianceRow {
  std::string estimator;
  double alpha = 0.0;
  double second_moment = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
};

// MC E||G||^2 per (estimator, alpha) at a fixed x. The residual estimators are
// evaluated in their steady state: the stored value comes from the same x
// with an independent direction.
std::vector<VarianceRow> variance_comparison_table(const Problem& p, const Vector& x,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<EstimatorKind>& estimators,
                                                   std::int64_t n, const RandomStream& stream,
                                                   Exec exec = Exec::parallel);

// ---- smoothing comparison ---------------------------------------------

struct SmoothingGapRow {
  int d = 0;
  double ball_gap = 0.0;
  double ball_se = 0.0;
  double gaussian_gap = 0.0;
  double gaussian_se = 0.0;
  double bound = 0.0;  // L alpha
};

// ||grad f_alpha - grad f|| for ball and Gaussian smoothing, each through the
// averaged-gradient route, worst over the probes.
SmoothingGapRow smoothing_gap(const Problem& p, double alpha, const std::vector<Vector>& probes,
                              std::int64_t n, const RandomStream& stream,
                              Exec exec = Exec::parallel);

// ---- output -------------------------------------------------------------

std::string reports_json(const std::string& suite, const std::vector<BoundCheckReport>& reports);
std::string reports_text(const std::vector<BoundCheckReport>& reports);
bool all_passed(const std::vector<BoundCheckReport>& reports);

}  // namespace zo
