#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "zo/problems.hpp"

namespace zo {

enum class EstimatorKind { spsa1, one_point, two_point, residual, residual_gaussian };

EstimatorKind parse_estimator(const std::string& id);
std::string_view to_string(EstimatorKind k);

// Carry-over of the residual estimator: the last perturbed (possibly noisy)
// value and its direction.
struct EstimatorState {
  double prev_value = 0.0;
  Vector prev_direction;
  bool initialized = false;
};

struct GradientEstimate {
  Vector vector;
  int queries_used = 1;
  double alpha = 0.0;
};

// G = f(x + alpha u) / alpha * u, u Rademacher.
GradientEstimate spsa1(const Problem& p, const Vector& x, double alpha, RandomStream& stream,
                       bool noisy = false);

// G = d f(x + alpha u, xi) / alpha * u, u on the unit sphere.
GradientEstimate bandit_one_point(const Problem& p, const Vector& x, double alpha,
                                  RandomStream& stream, bool noisy = false);

// G = d (f(x + alpha u) - f(x)) / alpha * u. In noisy mode both queries share
// one xi.
GradientEstimate two_point(const Problem& p, const Vector& x, double alpha, RandomStream& stream,
                           bool noisy = false);

// g_t = d (f(x_t + alpha u_t) - prev) / alpha * u_t with u_t on the sphere,
// where prev is the stored value from the previous step (never re-queried).
// An uninitialised state spends one query on f(x + alpha u_0), stores it and
// returns the zero vector.
//
// gaussian = true gives the printed ablation form (u_t ~ N(0, I), no factor d).
std::pair<GradientEstimate, EstimatorState> residual_step(const Problem& p, const Vector& x,
                                                          double alpha, EstimatorState state,
                                                          RandomStream& stream,
                                                          bool noisy = false,
                                                          bool gaussian = false);

// Dispatches on kind; residual kinds read and update `state`.
GradientEstimate estimate(EstimatorKind kind, const Problem& p, const Vector& x, double alpha,
                          EstimatorState& state, RandomStream& stream, bool noisy = false);

}  // namespace zo
