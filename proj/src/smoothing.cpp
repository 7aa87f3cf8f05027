#include "zo/smoothing.hpp"

#include <cmath>

#include "zo/errors.hpp"
#include "zo/samplers.hpp"
#include "zo/stats.hpp"

namespace zo {
namespace {

McValue to_value(const ScalarStats& st, double shift) {
  return {shift + st.mean(), st.std_err(), static_cast<std::int64_t>(st.n)};
}

McVector to_vector(const VectorStats& st) {
  return {st.mean(), st.std_err(), st.cov_trace(), static_cast<std::int64_t>(st.n)};
}

void require_n(std::int64_t n) {
  if (n < 2) throw ParameterError("Monte Carlo estimates need n >= 2");
}

template <class Body>
McVector vector_mc(int d, std::int64_t n, const RandomStream& stream, Exec exec, Body body) {
  auto st = mc_reduce<VectorStats>(
      static_cast<std::size_t>(n), stream, [d] { return VectorStats(d); }, body,
      [](VectorStats& a, const VectorStats& b) { a.merge(b); }, exec);
  return to_vector(st);
}

template <class Body>
ScalarStats scalar_mc(std::int64_t n, const RandomStream& stream, Exec exec, Body body) {
  return mc_reduce<ScalarStats>(
      static_cast<std::size_t>(n), stream, [] { return ScalarStats{}; }, body,
      [](ScalarStats& a, const ScalarStats& b) { a.merge(b); }, exec);
}

}  // namespace

SmoothedSurrogate::SmoothedSurrogate(Problem base_, double alpha_, int value_budget_,
                                     int gradient_budget_)
    : base(std::move(base_)),
      alpha(alpha_),
      value_budget(value_budget_),
      gradient_budget(gradient_budget_) {
  if (!(alpha > 0)) throw ParameterError("smoothing radius alpha must be > 0");
  if (value_budget < 1 || gradient_budget < 1) throw ParameterError("mc budget must be >= 1");
}

double McVector::norm_std_err() const {
  return n > 0 ? std::sqrt(cov_trace / static_cast<double>(n)) : 0.0;
}

McValue eval_falpha_mc(const SmoothedSurrogate& s, const Vector& x, const RandomStream& stream,
                       std::int64_t n, Exec exec) {
  require_n(n);
  const Problem& f = s.base;
  const double fx = f.value(x);
  const double alpha = s.alpha;
  const int d = f.dim();
  auto st = scalar_mc(n, stream, exec, [&](RandomStream& r, ScalarStats& acc) {
    const Vector u = sample_ball(r, d).vector;
    acc.add(f.value(x + alpha * u) - fx);
  });
  return to_value(st, fx);
}

McValue eval_falpha(const SmoothedSurrogate& s, const Vector& x, const RandomStream& stream,
                    Exec exec) {
  if (s.base.exact_smoothed()) {
    return {s.base.exact_smoothed()(x, s.alpha), 0.0, 0};
  }
  return eval_falpha_mc(s, x, stream, s.value_budget, exec);
}

McVector eval_grad_falpha_mc(const SmoothedSurrogate& s, const Vector& x,
                             const RandomStream& stream, std::int64_t n, Exec exec) {
  require_n(n);
  const Problem& f = s.base;
  const int d = f.dim();
  const double fx = f.value(x);
  const double scale = d / s.alpha;
  const double alpha = s.alpha;
  return vector_mc(d, n, stream, exec, [&](RandomStream& r, VectorStats& acc) {
    const Vector u = sample_sphere(r, d).vector;
    acc.add(scale * (f.value(x + alpha * u) - fx) * u);
  });
}

McVector grad_falpha_by_averaging(const SmoothedSurrogate& s, const Vector& x,
                                  const RandomStream& stream, std::int64_t n, Exec exec) {
  require_n(n);
  const Problem& f = s.base;
  const int d = f.dim();
  const double alpha = s.alpha;
  return vector_mc(d, n, stream, exec, [&](RandomStream& r, VectorStats& acc) {
    acc.add(f.gradient(x + alpha * sample_ball(r, d).vector));
  });
}

McVector gaussian_smoothed_gradient(const Problem& f, const Vector& x, double alpha,
                                    const RandomStream& stream, std::int64_t n, Exec exec) {
  require_n(n);
  if (!(alpha > 0)) throw ParameterError("smoothing radius alpha must be > 0");
  const int d = f.dim();
  return vector_mc(d, n, stream, exec, [&](RandomStream& r, VectorStats& acc) {
    acc.add(f.gradient(x + alpha * sample_gaussian(r, d).vector));
  });
}

std::vector<BoundCheckReport> check_smoothing_bounds(const SmoothedSurrogate& s,
                                                     const std::vector<Vector>& probes,
                                                     const RandomStream& stream, Exec exec) {
  const Problem& f = s.base;
  const auto& k = f.constants();
  const ClassTags& tags = f.tags();
  const double alpha = s.alpha;

  BoundCheckReport convex = make_report("smoothing.convex_lower_bound", "f - f_alpha <= 0 + 3 SE");
  BoundCheckReport lipschitz = make_report("smoothing.lipschitz_value_gap", "|f_alpha - f| <= L0 alpha + 3 SE");
  BoundCheckReport smooth_value = make_report("smoothing.smooth_value_gap", "|f_alpha - f| <= L alpha^2 / 2 + 3 SE");
  BoundCheckReport smooth_grad = make_report("smoothing.smooth_gradient_gap", "||grad f_alpha - grad f|| <= L alpha + 5 SE");

  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vector& x = probes[i];
    const RandomStream ps = stream.substream(i);
    const McValue fa = eval_falpha(s, x, ps.substream(0), exec);
    const double gap = fa.mean - f.value(x);
    if (tags.convex) convex.add(-gap, 0.0, 3 * fa.std_err);
    if (tags.lipschitz && k.L0) lipschitz.add(std::abs(gap), *k.L0 * alpha, 3 * fa.std_err);
    if (tags.smooth && k.L) {
      smooth_value.add(std::abs(gap), *k.L * alpha * alpha / 2, 3 * fa.std_err);
      const McVector g = eval_grad_falpha_mc(s, x, ps.substream(1), s.gradient_budget, exec);
      smooth_grad.add((g.mean - f.gradient(x)).norm(), *k.L * alpha, 5 * g.norm_std_err());
      smooth_grad.n = g.n;
    }
    convex.n = lipschitz.n = smooth_value.n = fa.n;
  }

  std::vector<BoundCheckReport> out;
  for (BoundCheckReport* r : {&convex, &lipschitz, &smooth_value, &smooth_grad}) {
    if (r->size() == 0) continue;
    r->seed = stream.seed();
    r->finalize();
    out.push_back(std::move(*r));
  }
  return out;
}

std::vector<BoundCheckReport> check_inherited_properties(
    const SmoothedSurrogate& s, const std::vector<std::pair<Vector, Vector>>& pairs,
    const RandomStream& stream, std::int64_t n, Exec exec) {
  require_n(n);
  const Problem& f = s.base;
  const auto& k = f.constants();
  const ClassTags& tags = f.tags();
  const int d = f.dim();
  const double alpha = s.alpha;

  BoundCheckReport lipschitz = make_report("inherited.lipschitz", "|f_a(x) - f_a(y)| <= L0 ||x - y|| + 6 SE");
  BoundCheckReport smooth = make_report("inherited.smooth", "||grad f_a(x) - grad f_a(y)|| <= L ||x - y|| + 6 SE");
  BoundCheckReport strong = make_report("inherited.strongly_convex", "mu/2 ||y - x||^2 <= f_a(y) - f_a(x) - <grad f_a(x), y - x> + 6 SE");

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const Vector delta = y - x;
    const RandomStream ps = stream.substream(i);
    if (tags.lipschitz && k.L0) {
      auto st = scalar_mc(n, ps.substream(0), exec, [&](RandomStream& r, ScalarStats& acc) {
        const Vector u = alpha * sample_ball(r, d).vector;
        acc.add(f.value(x + u) - f.value(y + u));
      });
      lipschitz.add(std::abs(st.mean()), *k.L0 * delta.norm(), 6 * st.std_err());
    }
    if (tags.smooth && k.L) {
      const McVector g = vector_mc(d, n, ps.substream(1), exec, [&](RandomStream& r, VectorStats& acc) {
        const Vector u = alpha * sample_ball(r, d).vector;
        acc.add(f.gradient(x + u) - f.gradient(y + u));
      });
      smooth.add(g.mean.norm(), *k.L * delta.norm(), 6 * g.norm_std_err());
    }
    if (tags.strongly_convex && k.mu) {
      auto st = scalar_mc(n, ps.substream(2), exec, [&](RandomStream& r, ScalarStats& acc) {
        const Vector u = alpha * sample_ball(r, d).vector;
        acc.add(f.value(y + u) - f.value(x + u) - f.gradient(x + u).dot(delta));
      });
      strong.add(0.5 * *k.mu * delta.squaredNorm(), st.mean(), 6 * st.std_err());
    }
  }

  std::vector<BoundCheckReport> out;
  for (BoundCheckReport* r : {&lipschitz, &smooth, &strong}) {
    if (r->size() == 0) continue;
    r->n = n;
    r->seed = stream.seed();
    r->finalize();
    out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace zo
