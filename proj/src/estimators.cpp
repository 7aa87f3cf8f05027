#include "zo/estimators.hpp"

#include "zo/errors.hpp"
#include "zo/samplers.hpp"

namespace zo {
namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0)) throw ParameterError("alpha must be > 0");
}

void require_oracle(const Problem& p, bool noisy) {
  if (noisy && !p.stochastic())
    throw CapabilityError("noisy estimate requested but problem '" + p.id() +
                          "' has no stochastic oracle");
}

// xi comes from a child keyed by the parent's position, so the direction
// sequence is the same with or without noise.
StochasticSample draw_xi(const Problem& p, const RandomStream& stream) {
  RandomStream child = stream.substream(stream.counter() | (std::uint64_t{1} << 63));
  return p.draw(child);
}

double query(const Problem& p, const Vector& x, const RandomStream& stream, bool noisy) {
  if (!noisy) return p.value(x);
  return p.value(x, draw_xi(p, stream));
}

}  // namespace

EstimatorKind parse_estimator(const std::string& id) {
  if (id == "spsa1") return EstimatorKind::spsa1;
  if (id == "one_point") return EstimatorKind::one_point;
  if (id == "two_point") return EstimatorKind::two_point;
  if (id == "residual") return EstimatorKind::residual;
  if (id == "residual_gaussian") return EstimatorKind::residual_gaussian;
  throw ConfigError("unknown estimator '" + id + "'");
}

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::spsa1: return "spsa1";
    case EstimatorKind::one_point: return "one_point";
    case EstimatorKind::two_point: return "two_point";
    case EstimatorKind::residual: return "residual";
    case EstimatorKind::residual_gaussian: return "residual_gaussian";
  }
  return "?";
}

GradientEstimate spsa1(const Problem& p, const Vector& x, double alpha, RandomStream& stream,
                       bool noisy) {
  require_alpha(alpha);
  require_oracle(p, noisy);
  const Vector u = sample_rademacher(stream, p.dim()).vector;
  const double f = query(p, x + alpha * u, stream, noisy);
  return {(f / alpha) * u, 1, alpha};
}

GradientEstimate bandit_one_point(const Problem& p, const Vector& x, double alpha,
                                  RandomStream& stream, bool noisy) {
  require_alpha(alpha);
  require_oracle(p, noisy);
  const int d = p.dim();
  const Vector u = sample_sphere(stream, d).vector;
  const double f = query(p, x + alpha * u, stream, noisy);
  return {(d * f / alpha) * u, 1, alpha};
}

GradientEstimate two_point(const Problem& p, const Vector& x, double alpha, RandomStream& stream,
                           bool noisy) {
  require_alpha(alpha);
  require_oracle(p, noisy);
  const int d = p.dim();
  const Vector u = sample_sphere(stream, d).vector;
  double diff;
  if (noisy) {
    const StochasticSample xi = draw_xi(p, stream);
    diff = p.value(x + alpha * u, xi) - p.value(x, xi);
  } else {
    diff = p.value(x + alpha * u) - p.value(x);
  }
  return {(d * diff / alpha) * u, 2, alpha};
}

std::pair<GradientEstimate, EstimatorState> residual_step(const Problem& p, const Vector& x,
                                                          double alpha, EstimatorState state,
                                                          RandomStream& stream, bool noisy,
                                                          bool gaussian) {
  require_alpha(alpha);
  require_oracle(p, noisy);
  const int d = p.dim();
  const Vector u = gaussian ? sample_gaussian(stream, d).vector : sample_sphere(stream, d).vector;
  const double f = query(p, x + alpha * u, stream, noisy);

  GradientEstimate g{Vector::Zero(d), 1, alpha};
  if (state.initialized) {
    const double scale = gaussian ? 1.0 / alpha : d / alpha;
    g.vector = (scale * (f - state.prev_value)) * u;
  }
  state.prev_value = f;
  state.prev_direction = u;
  state.initialized = true;
  return {std::move(g), std::move(state)};
}

GradientEstimate estimate(EstimatorKind kind, const Problem& p, const Vector& x, double alpha,
                          EstimatorState& state, RandomStream& stream, bool noisy) {
  switch (kind) {
    case EstimatorKind::spsa1: return spsa1(p, x, alpha, stream, noisy);
    case EstimatorKind::one_point: return bandit_one_point(p, x, alpha, stream, noisy);
    case EstimatorKind::two_point: return two_point(p, x, alpha, stream, noisy);
    case EstimatorKind::residual:
    case EstimatorKind::residual_gaussian: {
      auto [g, next] = residual_step(p, x, alpha, std::move(state), stream, noisy,
                                     kind == EstimatorKind::residual_gaussian);
      state = std::move(next);
      return g;
    }
  }
  throw ConfigError("unknown estimator");
}

}  // namespace zo
