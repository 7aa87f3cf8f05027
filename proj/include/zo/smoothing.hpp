#pragma once

#include <utility>
#include <vector>

#include "zo/parallel.hpp"
#include "zo/problems.hpp"
#include "zo/report.hpp"

namespace zo {

/// Uniform-ball smoothed surrogate f_alpha(x) = E f(x + alpha * u), u uniform
/// in the unit ball.
struct SmoothedSurrogate {
  Problem base;
  double alpha;
  int value_budget = 100'000;
  int gradient_budget = 1'000'000;

  SmoothedSurrogate(Problem base, double alpha, int value_budget = 100'000,
                    int gradient_budget = 1'000'000);
};

struct McValue {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
};

struct McVector {
  Vector mean;
  Vector std_err;     ///< per coordinate
  double cov_trace = 0.0;
  std::int64_t n = 0;
  /// Standard error of the mean vector in Euclidean norm, sqrt(tr Cov / n).
  double norm_std_err() const;
};

/// Monte Carlo f_alpha(x). Needs n >= 2.
McValue eval_falpha_mc(const SmoothedSurrogate& s, const Vector& x, const RandomStream& stream,
                       std::int64_t n, Exec exec = Exec::parallel);

/// f_alpha(x) from the problem's closed form when it has one, otherwise Monte
/// Carlo with the surrogate's value budget.
McValue eval_falpha(const SmoothedSurrogate& s, const Vector& x, const RandomStream& stream,
                    Exec exec = Exec::parallel);

/// Zeroth-order route to grad f_alpha: mean of (d/alpha)(f(x + alpha u) - f(x)) u
/// over u on the unit sphere. The f(x) baseline has zero mean contribution
/// (E u = 0) and only reduces the variance.
McVector eval_grad_falpha_mc(const SmoothedSurrogate& s, const Vector& x,
                             const RandomStream& stream, std::int64_t n,
                             Exec exec = Exec::parallel);

/// First-order route to grad f_alpha: mean of grad f(x + alpha u) over the unit
/// ball. Uses the diagnostic gradient oracle.
McVector grad_falpha_by_averaging(const SmoothedSurrogate& s, const Vector& x,
                                  const RandomStream& stream, std::int64_t n,
                                  Exec exec = Exec::parallel);

/// Gradient of the Gaussian-smoothed objective, mean of grad f(x + alpha u),
/// u ~ N(0, I). Used to contrast with ball smoothing.
McVector gaussian_smoothed_gradient(const Problem& p, const Vector& x, double alpha,
                                    const RandomStream& stream, std::int64_t n,
                                    Exec exec = Exec::parallel);

/// Smoothing-error bounds at each probe, as applicable to the base's tags:
/// f_alpha >= f (convex), |f_alpha - f| <= L0 alpha (Lipschitz),
/// |f_alpha - f| <= L alpha^2 / 2 and ||grad f_alpha - grad f|| <= L alpha
/// (smooth). Value checks use 3 SE slack, gradient checks 5 SE.
std::vector<BoundCheckReport> check_smoothing_bounds(const SmoothedSurrogate& s,
                                                     const std::vector<Vector>& probes,
                                                     const RandomStream& stream,
                                                     Exec exec = Exec::parallel);

/// Randomised checks that f_alpha keeps the base's Lipschitz, smoothness and
/// strong-convexity constants. Each pair is evaluated with common random
/// numbers; slack is 6 SE.
std::vector<BoundCheckReport> check_inherited_properties(
    const SmoothedSurrogate& s, const std::vector<std::pair<Vector, Vector>>& pairs,
    const RandomStream& stream, std::int64_t n_per_pair = 20'000, Exec exec = Exec::parallel);

}  // namespace zo
