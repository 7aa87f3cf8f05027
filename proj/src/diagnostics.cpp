#include "zo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "zo/errors.hpp"
#include "zo/samplers.hpp"
#include "zo/stats.hpp"

namespace zo {
namespace {

ScalarStats scalar_mc(std::int64_t n, const RandomStream& stream, Exec exec,
                      const std::function<void(RandomStream&, ScalarStats&)>& body) {
  return mc_reduce<ScalarStats>(
      static_cast<std::size_t>(n), stream, [] { return ScalarStats{}; }, body,
      [](ScalarStats& a, const ScalarStats& b) { a.merge(b); }, exec);
}

VectorStats vector_mc(int d, std::int64_t n, const RandomStream& stream, Exec exec,
                      const std::function<void(RandomStream&, VectorStats&)>& body) {
  return mc_reduce<VectorStats>(
      static_cast<std::size_t>(n), stream, [d] { return VectorStats(d); }, body,
      [](VectorStats& a, const VectorStats& b) { a.merge(b); }, exec);
}

void finish(BoundCheckReport& r, std::int64_t n, const RandomStream& stream) {
  r.n = n;
  r.seed = stream.seed();
  r.finalize();
}

// Indices 0..count-1, or an even subsample of at most `cap` of them.
std::vector<std::size_t> pick(std::size_t count, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (cap == 0 || cap >= count) {
    for (std::size_t i = 0; i < count; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t j = 0; j < cap; ++j) idx.push_back(j * (count - 1) / (cap - 1 > 0 ? cap - 1 : 1));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

void require_trajectory(const RunRecord& run) {
  if (run.trajectory.empty() || run.prev_values.empty())
    throw ParameterError("variance check needs a run recorded with keep_trajectory");
}

// (d/alpha)^2 (F(x_t + alpha u, xi) - F(x_prev + alpha u', xi'))^2 with
// fresh u, u' (and xi, xi').
ScalarStats residual_second_moment(const Problem& p, const Vector& xt, const Vector& xprev,
                                   double alpha, std::int64_t n, bool noisy,
                                   const RandomStream& stream, Exec exec) {
  const int d = p.dim();
  const double scale = (d / alpha) * (d / alpha);
  return scalar_mc(n, stream, exec, [&](RandomStream& r, ScalarStats& acc) {
    const Vector u = sample_sphere(r, d).vector;
    const Vector v = sample_sphere(r, d).vector;
    double a, b;
    if (noisy) {
      const StochasticSample xi = p.draw(r);
      const StochasticSample zeta = p.draw(r);
      a = p.value(xt + alpha * u, xi);
      b = p.value(xprev + alpha * v, zeta);
    } else {
      a = p.value(xt + alpha * u);
      b = p.value(xprev + alpha * v);
    }
    acc.add(scale * (a - b) * (a - b));
  });
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw ConfigError(std::string("missing constant ") + name);
  return *v;
}

}  // namespace

// ---- moments ---------------------------------------------------------------

BoundCheckReport check_sphere_moment(int d, const Vector& a, std::int64_t n,
                                     const RandomStream& stream, Exec exec) {
  if (a.size() != d) throw DimensionError("check_sphere_moment: a has the wrong size");
  auto st = scalar_mc(n, stream, exec, [&](RandomStream& r, ScalarStats& acc) {
    const Vector u = sample_sphere(r, d).vector;
    acc.add((u * u.dot(a)).squaredNorm());
  });
  BoundCheckReport rep = make_report("moments.sphere_uuTa_d" + std::to_string(d),
                                     "|MC - ||a||^2/d| <= 3 SE");
  rep.add(std::abs(st.mean() - a.squaredNorm() / d), 3 * st.std_err());
  finish(rep, n, stream);
  return rep;
}

BoundCheckReport check_ball_second_moment(int d, std::int64_t n, const RandomStream& stream,
                                          Exec exec) {
  auto st = scalar_mc(n, stream, exec, [&](RandomStream& r, ScalarStats& acc) {
    acc.add(sample_ball(r, d).vector.squaredNorm());
  });
  BoundCheckReport rep = make_report("moments.ball_second_moment_d" + std::to_string(d),
                                     "|MC - d/(d+2)| <= 3 SE");
  rep.add(std::abs(st.mean() - static_cast<double>(d) / (d + 2)), 3 * st.std_err());
  finish(rep, n, stream);
  return rep;
}

BoundCheckReport check_zero_mean(Distribution dist, int d, std::int64_t n,
                                 const RandomStream& stream, Exec exec) {
  auto st = vector_mc(d, n, stream, exec, [&](RandomStream& r, VectorStats& acc) {
    acc.add(sample_direction(dist, r, d).vector);
  });
  BoundCheckReport rep =
      make_report("moments.zero_mean_" + std::string(to_string(dist)) + "_d" + std::to_string(d),
                  "|MC mean_i| <= 3 SE_i");
  const Vector m = st.mean(), se = st.std_err();
  for (int i = 0; i < d; ++i) rep.add(std::abs(m[i]), 3 * se[i]);
  finish(rep, n, stream);
  return rep;
}

// ---- c0 ----------------------------------------------------------------------

C0Estimate estimate_c0(const Problem& p, double alpha, std::int64_t n_draws,
                       const RandomStream& stream, std::vector<Vector> probes, Exec exec) {
  if (!(alpha > 0)) throw ParameterError("alpha must be > 0");
  const double L0 = need(p.constants().L0, "L0");
  if (!(L0 > 0)) throw ParameterError("estimate_c0 needs L0 > 0");
  const int d = p.dim();
  if (probes.empty()) {
    probes.push_back(p.x_init());
    const Vector centre = p.constants().x_star.value_or(p.x_init());
    RandomStream r = stream.substream(1u << 20);
    for (int i = 0; i < 4; ++i) probes.push_back(centre + sample_sphere(r, d).vector);
  }
  C0Estimate out;
  out.d = d;
  out.n_draws = n_draws;
  out.alpha = alpha;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vector& x = probes[i];
    const double fx = p.value(x);
    auto st = scalar_mc(n_draws, stream.substream(i), exec, [&](RandomStream& r, ScalarStats& acc) {
      acc.add(p.value(x + alpha * sample_sphere(r, d).vector) - fx);
    });
    const double c0 = d * std::sqrt(st.central4()) / ((alpha * L0) * (alpha * L0));
    if (c0 > out.c0_hat || i == 0) {
      out.c0_hat = c0;
      out.argmax_probe = i;
    }
  }
  return out;
}

// ---- variance lemmas -------------------------------------------------------

BoundCheckReport check_variance_nonsmooth(const Problem& p, const RunRecord& run, double alpha,
                                          double eta, double c0, const RandomStream& stream,
                                          const VarianceCheckOptions& opts) {
  require_trajectory(run);
  const ProblemConstants& k = p.constants();
  const double L0 = need(k.L0, "L0");
  const double d = p.dim();
  if (eta > alpha / (3 * d * L0) * (1 + 1e-12))
    throw PreconditionError("nonsmooth variance bound needs eta <= alpha/(3 d L0)");
  double rhs = 12 * c0 * d * L0 * L0;
  std::string policy = "E||g_t||^2 <= 12 c0 d L0^2 + 3 SE";
  if (opts.noisy) {
    const double s0 = need(k.sigma0, "sigma0");
    rhs = 24 * c0 * d * L0 * L0 + 24 * d * d * s0 * s0 / (alpha * alpha);
    policy = "E||g_t||^2 <= 24 c0 d L0^2 + 24 d^2 sigma0^2/alpha^2 + 3 SE";
  }
  BoundCheckReport rep = make_report(
      opts.noisy ? "variance.nonsmooth_stochastic" : "variance.nonsmooth", policy);

  const std::size_t T = run.prev_values.size();
  const auto idx = pick(T, opts.max_iterates);
  std::vector<ScalarStats> res(idx.size());
  parallel_jobs(idx.size(), [&](std::size_t j) {
    const std::size_t k_ = idx[j];
    const Vector& xt = run.trajectory[k_];
    const Vector& xprev = run.trajectory[k_ == 0 ? 0 : k_ - 1];
    res[j] = residual_second_moment(p, xt, xprev, alpha, opts.n_resample, opts.noisy,
                                    stream.substream(k_), Exec::serial);
  }, opts.exec);
  for (const auto& st : res) rep.add(st.mean(), rhs, 3 * st.std_err());
  finish(rep, opts.n_resample, stream);
  return rep;
}

BoundCheckReport check_variance_smooth(const Problem& p, const RunRecord& run, double alpha,
                                       double eta, const RandomStream& stream,
                                       const VarianceCheckOptions& opts) {
  require_trajectory(run);
  const ProblemConstants& k = p.constants();
  const double L0 = need(k.L0, "L0");
  const double L = need(k.L, "L");
  const double d = p.dim();
  const double cap = opts.noisy ? alpha / (8 * d * L0) : alpha / (4 * d * L0);
  if (eta > cap * (1 + 1e-12))
    throw PreconditionError(opts.noisy ? "smooth variance bound needs eta <= alpha/(8 d L0)"
                                       : "smooth variance bound needs eta <= alpha/(4 d L0)");
  double carry = 0.5, grad_coef = 8 * d, constant = 10 * d * d * L * L * alpha * alpha;
  std::string policy =
      "E||g_t||^2 <= ||g_{t-1}||^2/2 + 8d||grad f_a(x_t)||^2 + 8d||grad f_a(x_{t-1})||^2 "
      "+ 10 d^2 L^2 alpha^2 + 3 SE";
  if (opts.noisy) {
    const double s0 = need(k.sigma0, "sigma0"), s1 = need(k.sigma1, "sigma1");
    carry = 0.25;
    grad_coef = 16 * d;
    constant += 64 * d * d * s0 * s0 / (alpha * alpha) + 32 * d * s1 * s1;
    policy =
        "E||g_t||^2 <= ||g_{t-1}||^2/4 + 16d||grad f_a(x_t)||^2 + 16d||grad f_a(x_{t-1})||^2 "
        "+ 64 d^2 sigma0^2/alpha^2 + 32 d sigma1^2 + 10 d^2 L^2 alpha^2 + 3 SE";
  }
  BoundCheckReport rep =
      make_report(opts.noisy ? "variance.smooth_stochastic" : "variance.smooth", policy);

  const SmoothedSurrogate sur(p, alpha);
  const std::size_t T = run.prev_values.size();
  const auto idx = pick(T, opts.max_iterates);

  // ||grad f_alpha||^2 at each needed trajectory point, bias-corrected by tr Cov / n.
  std::vector<std::size_t> points;
  for (std::size_t k_ : idx) {
    points.push_back(k_);
    if (k_ > 0) points.push_back(k_ - 1);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<double> gsq(T, 0.0);
  parallel_jobs(points.size(), [&](std::size_t j) {
    const std::size_t k_ = points[j];
    const McVector g = grad_falpha_by_averaging(sur, run.trajectory[k_],
                                                stream.substream(k_).substream(7),
                                                opts.gradient_budget, Exec::serial);
    gsq[k_] = std::max(0.0, g.mean.squaredNorm() - g.cov_trace / static_cast<double>(g.n));
  }, opts.exec);

  std::vector<ScalarStats> res(idx.size());
  parallel_jobs(idx.size(), [&](std::size_t j) {
    const std::size_t k_ = idx[j];
    const Vector& xt = run.trajectory[k_];
    const Vector& xprev = run.trajectory[k_ == 0 ? 0 : k_ - 1];
    res[j] = residual_second_moment(p, xt, xprev, alpha, opts.n_resample, opts.noisy,
                                    stream.substream(k_), Exec::serial);
  }, opts.exec);

  for (std::size_t j = 0; j < idx.size(); ++j) {
    const std::size_t k_ = idx[j];
    const double g_prev = k_ == 0 ? 0.0 : run.est_norm_sq[k_ - 1];
    const double grad_prev = gsq[k_ == 0 ? 0 : k_ - 1];
    const double rhs = carry * g_prev + grad_coef * (gsq[k_] + grad_prev) + constant;
    rep.add(res[j].mean(), rhs, 3 * res[j].std_err());
  }
  finish(rep, opts.n_resample, stream);
  return rep;
}

// ---- residual unbiasedness -------------------------------------------------

BoundCheckReport check_residual_unbiased(const Problem& p, const Vector& x, double prev_value,
                                         double alpha, const Vector& reference, std::int64_t n,
                                         const RandomStream& stream, bool noisy, Exec exec) {
  const int d = p.dim();
  if (reference.size() != d) throw DimensionError("reference gradient has the wrong size");
  EstimatorState frozen;
  frozen.prev_value = prev_value;
  frozen.prev_direction = Vector::Zero(d);
  frozen.initialized = true;
  auto st = vector_mc(d, n, stream, exec, [&](RandomStream& r, VectorStats& acc) {
    acc.add(residual_step(p, x, alpha, frozen, r, noisy).first.vector);
  });
  BoundCheckReport rep = make_report("estimators.residual_unbiased",
                                     "|MC mean_i - grad f_alpha_i| <= 5 SE_i");
  const Vector m = st.mean(), se = st.std_err();
  for (int i = 0; i < d; ++i) rep.add(std::abs(m[i] - reference[i]), 5 * se[i]);
  finish(rep, n, stream);
  return rep;
}

// ---- least squares ---------------------------------------------------------

BoundCheckReport check_proposition1(const LeastSquaresData& data, const RandomStream& stream,
                                    const Proposition1Options& opts) {
  const int d = data.d(), m = data.m();
  BoundCheckReport rep = make_report(
      "proposition1.value_vs_gradient_variance",
      "E[(1/m) sum (f_i - f)^2] <= (1/d) E[(1/m) sum ||grad f_i - grad f||^2] + 3 SE");
  for (int i = 0; i < m; ++i) {
    if (data.A.row(i).squaredNorm() < d * (1 - 1e-12)) {
      rep.warnings.push_back("row norm condition ||a_i||^2 >= d does not hold");
      break;
    }
  }

  std::vector<LeastSquaresData> redraws;
  for (int r = 0; r < opts.n_b_redraws; ++r) {
    RandomStream s = stream.substream(static_cast<std::uint64_t>(r));
    redraws.push_back(redraw_responses(data, s));
  }
  RandomStream probe_stream = stream.substream(1u << 30);
  for (int px = 0; px < opts.n_x; ++px) {
    Vector x = data.x_true;
    if (px > 0) x += opts.probe_radius * sample_ball(probe_stream, d).vector;
    ScalarStats v0, v1, diff;
    for (const auto& dr : redraws) {
      const Vector res = dr.A * x - dr.b;
      const Vector fi = res.cwiseAbs2();
      const double f = fi.mean();
      const double val_var = (fi.array() - f).square().mean();
      const Vector grad = (2.0 / m) * (dr.A.transpose() * res);
      double grad_var = 0.0;
      for (int i = 0; i < m; ++i)
        grad_var += (2 * res[i] * dr.A.row(i).transpose() - grad).squaredNorm();
      grad_var /= m;
      v0.add(val_var);
      v1.add(grad_var / d);
      diff.add(val_var - grad_var / d);
    }
    rep.add(v0.mean(), v1.mean(), 3 * diff.std_err());
  }
  finish(rep, opts.n_b_redraws, stream);
  return rep;
}

// ---- exact checks -------------------------------------------------------------

BoundCheckReport check_pl_inequality(const Problem& p, const std::vector<Vector>& probes) {
  const ProblemConstants& k = p.constants();
  const double mu = need(k.mu, "mu");
  const double f_star = need(k.f_star, "f_star");
  BoundCheckReport rep = make_report("exact.pl_inequality", "2 mu (f - f*) <= ||grad f||^2");
  for (const Vector& x : probes) {
    const double rhs = p.gradient(x).squaredNorm();
    // Rounding only: equality holds along the mu eigenvector.
    rep.add(2 * mu * (p.value(x) - f_star), rhs, 1e-12 * std::max(1.0, rhs));
  }
  rep.finalize();
  return rep;
}

std::vector<Vector> box_probes(const Problem& p, int n, const RandomStream& stream,
                               double fallback_radius) {
  const ProblemConstants& k = p.constants();
  const bool boxed = k.x_star && std::isfinite(k.box_radius);
  const Vector centre = boxed ? *k.x_star : p.x_init();
  const double radius = boxed ? k.box_radius : fallback_radius;
  RandomStream r = stream;
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) out.push_back(centre + radius * sample_ball(r, p.dim()).vector);
  return out;
}

std::vector<BoundCheckReport> check_declared_constants(const Problem& p, int n_pairs,
                                                       const RandomStream& stream) {
  const ProblemConstants& k = p.constants();
  const ClassTags& tags = p.tags();
  const auto xs = box_probes(p, n_pairs, stream.substream(0));
  const auto ys = box_probes(p, n_pairs, stream.substream(1));
  auto tol = [](double v) { return 1e-10 * std::max(1.0, std::abs(v)); };

  std::vector<BoundCheckReport> out;
  if (k.x_star && k.f_star) {
    BoundCheckReport r = make_report("constants.f_star", "|f(x_star) - f_star| <= 1e-10");
    r.add(std::abs(p.value(*k.x_star) - *k.f_star), 1e-10 * std::max(1.0, std::abs(*k.f_star)));
    r.finalize();
    out.push_back(std::move(r));
  }
  if (tags.lipschitz && k.L0) {
    BoundCheckReport r = make_report("constants.lipschitz_L0", "|f(x) - f(y)| <= L0 ||x - y||");
    for (int i = 0; i < n_pairs; ++i) {
      const double rhs = *k.L0 * (xs[i] - ys[i]).norm();
      r.add(std::abs(p.value(xs[i]) - p.value(ys[i])), rhs, tol(rhs));
    }
    r.finalize();
    out.push_back(std::move(r));
  }
  if (tags.smooth && k.L) {
    BoundCheckReport r =
        make_report("constants.smooth_L", "||grad f(x) - grad f(y)|| <= L ||x - y||");
    for (int i = 0; i < n_pairs; ++i) {
      const double rhs = *k.L * (xs[i] - ys[i]).norm();
      r.add((p.gradient(xs[i]) - p.gradient(ys[i])).norm(), rhs, tol(rhs));
    }
    r.finalize();
    out.push_back(std::move(r));
  }
  if (tags.strongly_convex && k.mu) {
    BoundCheckReport r = make_report(
        "constants.strongly_convex_mu", "f(x) + <grad f(x), y - x> + mu/2 ||y - x||^2 <= f(y)");
    for (int i = 0; i < n_pairs; ++i) {
      const Vector dlt = ys[i] - xs[i];
      const double lhs = p.value(xs[i]) + p.gradient(xs[i]).dot(dlt) + 0.5 * *k.mu * dlt.squaredNorm();
      const double rhs = p.value(ys[i]);
      r.add(lhs, rhs, tol(rhs));
    }
    r.finalize();
    out.push_back(std::move(r));
  }
  if (tags.strongly_convex && tags.smooth && k.mu && k.f_star) {
    std::vector<Vector> probes(xs.begin(), xs.end());
    out.push_back(check_pl_inequality(p, probes));
  }
  for (auto& r : out) r.seed = stream.seed();
  return out;
}

// ---- estimator variance ---------------------------------------------------

std::vector<VarianceRow> variance_comparison_table(const Problem& p, const Vector& x,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<EstimatorKind>& estimators,
                                                   std::int64_t n, const RandomStream& stream,
                                                   Exec exec) {
  const int d = p.dim();
  std::vector<VarianceRow> rows;
  std::uint64_t cell = 0;
  for (EstimatorKind kind : estimators) {
    for (double alpha : alphas) {
      const RandomStream s = stream.substream(cell++);
      ScalarStats st;
      if (kind == EstimatorKind::residual || kind == EstimatorKind::residual_gaussian) {
        const bool gaussian = kind == EstimatorKind::residual_gaussian;
        st = scalar_mc(n, s, exec, [&](RandomStream& r, ScalarStats& acc) {
          const Vector v = gaussian ? sample_gaussian(r, d).vector : sample_sphere(r, d).vector;
          EstimatorState prev;
          prev.prev_value = p.value(x + alpha * v);
          prev.prev_direction = v;
          prev.initialized = true;
          acc.add(residual_step(p, x, alpha, std::move(prev), r, false, gaussian)
                      .first.vector.squaredNorm());
        });
      } else {
        st = scalar_mc(n, s, exec, [&](RandomStream& r, ScalarStats& acc) {
          EstimatorState unused;
          acc.add(estimate(kind, p, x, alpha, unused, r).vector.squaredNorm());
        });
      }
      rows.push_back({std::string(to_string(kind)), alpha, st.mean(), st.std_err(),
                      static_cast<std::int64_t>(st.n)});
    }
  }
  return rows;
}

// ---- smoothing comparison ----------------------------------------------------

SmoothingGapRow smoothing_gap(const Problem& p, double alpha, const std::vector<Vector>& probes,
                              std::int64_t n, const RandomStream& stream, Exec exec) {
  const SmoothedSurrogate sur(p, alpha);
  SmoothingGapRow row;
  row.d = p.dim();
  row.bound = need(p.constants().L, "L") * alpha;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vector g = p.gradient(probes[i]);
    const McVector b = grad_falpha_by_averaging(sur, probes[i], stream.substream(2 * i), n, exec);
    const McVector gs =
        gaussian_smoothed_gradient(p, probes[i], alpha, stream.substream(2 * i + 1), n, exec);
    const double bg = (b.mean - g).norm(), gg = (gs.mean - g).norm();
    if (bg >= row.ball_gap) {
      row.ball_gap = bg;
      row.ball_se = b.norm_std_err();
    }
    if (gg >= row.gaussian_gap) {
      row.gaussian_gap = gg;
      row.gaussian_se = gs.norm_std_err();
    }
  }
  return row;
}

// ---- output ---------------------------------------------------------------------

namespace {
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
}  // namespace

std::string reports_json(const std::string& suite, const std::vector<BoundCheckReport>& reports) {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = all_passed(reports);
  j["checks"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["pass"] = r.passed;
    c["worst_ratio"] = num(r.worst_ratio);
    c["n"] = r.n;
    c["seed"] = r.seed;
    c["points"] = r.size();
    c["slack_policy"] = r.slack_policy;
    if (!r.warnings.empty()) c["warnings"] = r.warnings;
    j["checks"].push_back(std::move(c));
  }
  return j.dump(2);
}

std::string reports_text(const std::vector<BoundCheckReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(48) << "check" << std::setw(6) << "pass" << std::setw(8)
     << "points" << "worst lhs/rhs\n";
  for (const auto& r : reports) {
    os << std::setw(48) << r.name << std::setw(6) << (r.passed ? "yes" : "NO") << std::setw(8)
       << r.size() << std::setprecision(4) << r.worst_ratio << '\n';
    for (const auto& w : r.warnings) os << "    warning: " << w << '\n';
  }
  return os.str();
}

bool all_passed(const std::vector<BoundCheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

}  // namespace zo
