#include "zo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zo/errors.hpp"

namespace zo {
namespace {

struct Inputs {
  const Problem& p;
  const ProblemConstants& k;
  Setting setting;
  double d;

  double need(const std::optional<double>& v, const char* name) const {
    if (!v) throw ConfigError(std::string("missing constant ") + name);
    return *v;
  }
  double L0() const { return need(k.L0, "L0"); }
  double L() const { return need(k.L, "L"); }
  double mu() const { return need(k.mu, "mu"); }
  double sigma0() const {
    const double s = need(k.sigma0, "sigma0");
    if (!(s > 0))
      throw ConfigError("sigma0 must be > 0 for setting " + std::string(to_string(setting)));
    return s;
  }
  double sigma1() const { return need(k.sigma1, "sigma1"); }
};

std::int64_t to_iterations(double T, std::vector<std::string>& warnings) {
  if (!std::isfinite(T) || T > static_cast<double>(kMaxIterations)) {
    warnings.push_back("corollary T clamped to " + std::to_string(kMaxIterations));
    return kMaxIterations;
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(T)));
}

void floor_warning(std::vector<std::string>& w, std::int64_t T, double floor, const char* what) {
  if (static_cast<double>(T) < floor) {
    std::ostringstream os;
    os << "T = " << T << " below the floor " << what << " = " << floor;
    w.push_back(os.str());
  }
}

void cap_eta(Schedule& s, double cap, const char* what) {
  if (s.eta > cap) {
    s.eta = cap;
    s.warnings.push_back(std::string("eta capped at ") + what);
  }
}

}  // namespace

Setting parse_setting(const std::string& id) {
  for (Setting s : kAllSettings)
    if (to_string(s) == id) return s;
  throw ConfigError("unknown setting '" + id + "'");
}

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::det_nonsmooth_cvx: return "det_nonsmooth_cvx";
    case Setting::det_nonsmooth_scvx: return "det_nonsmooth_scvx";
    case Setting::det_smooth_cvx: return "det_smooth_cvx";
    case Setting::det_smooth_scvx: return "det_smooth_scvx";
    case Setting::det_smooth_noncvx: return "det_smooth_noncvx";
    case Setting::sto_nonsmooth_cvx: return "sto_nonsmooth_cvx";
    case Setting::sto_nonsmooth_scvx: return "sto_nonsmooth_scvx";
    case Setting::sto_smooth_cvx: return "sto_smooth_cvx";
    case Setting::sto_smooth_scvx: return "sto_smooth_scvx";
    case Setting::sto_smooth_noncvx: return "sto_smooth_noncvx";
  }
  return "?";
}

bool is_stochastic(Setting s) {
  switch (s) {
    case Setting::sto_nonsmooth_cvx:
    case Setting::sto_nonsmooth_scvx:
    case Setting::sto_smooth_cvx:
    case Setting::sto_smooth_scvx:
    case Setting::sto_smooth_noncvx: return true;
    default: return false;
  }
}

bool needs_epsilon(Setting s) {
  return s == Setting::det_nonsmooth_scvx || s == Setting::det_smooth_scvx ||
         s == Setting::sto_nonsmooth_scvx || s == Setting::sto_smooth_scvx;
}

std::string_view to_string(Averaging a) {
  switch (a) {
    case Averaging::last: return "last";
    case Averaging::uniform_mean: return "uniform_mean";
    case Averaging::rho_weighted: return "rho_weighted";
  }
  return "?";
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::mean_gap: return "mean_gap";
    case Metric::weighted_gap: return "weighted_gap";
    case Metric::last_gap: return "last_gap";
    case Metric::mean_grad_sq: return "mean_grad_sq";
  }
  return "?";
}

Schedule make_schedule(Setting setting, const Problem& problem, const ScheduleRequest& req) {
  return make_schedule(setting, problem, req, problem.x_init());
}

Schedule make_schedule(Setting setting, const Problem& problem, const ScheduleRequest& req,
                       const Vector& x1) {
  if (x1.size() != problem.dim()) throw DimensionError("x1 has the wrong dimension");
  const ProblemConstants& k = problem.constants();
  const Inputs in{problem, k, setting, static_cast<double>(problem.dim())};
  const double d = in.d;

  Schedule s;
  s.setting = setting;
  s.c0 = req.c0.value_or(1.0);
  s.epsilon = req.epsilon;
  const double c0 = s.c0;

  if (needs_epsilon(setting)) {
    if (!req.epsilon) throw ConfigError("setting " + std::string(to_string(setting)) +
                                        " needs a target precision (eps)");
  } else if (!req.T && !req.epsilon) {
    throw ConfigError("setting " + std::string(to_string(setting)) + " needs T or eps");
  } else if (req.T && req.epsilon) {
    throw ConfigError("setting " + std::string(to_string(setting)) +
                      " takes either T or eps, not both");
  }
  if (req.epsilon && !(*req.epsilon > 0)) throw ConfigError("eps must be > 0");
  if (req.T && *req.T < 1) throw ConfigError("T must be >= 1");

  auto R = [&] {
    if (!k.x_star) throw ConfigError("missing constant x_star");
    return (x1 - *k.x_star).norm();
  };
  auto Delta = [&] {
    if (!k.f_star) throw ConfigError("missing constant f_star");
    const double gap = problem.value(x1) - *k.f_star;
    if (!(gap > 0)) throw ConfigError("f(x1) - f_star must be > 0");
    return gap;
  };
  // T for a T-setting: given, or from the corollary's T(eps).
  auto T_or = [&](auto from_eps) -> std::int64_t {
    if (req.T) return *req.T;
    return to_iterations(from_eps(*req.epsilon), s.warnings);
  };
  // T for an eps-setting: override, or the corollary's T(eps).
  auto T_eps = [&](auto corollary) -> std::int64_t {
    if (req.T) return *req.T;
    return to_iterations(corollary(), s.warnings);
  };

  switch (setting) {
    case Setting::det_nonsmooth_cvx: {
      const double L0 = in.L0();
      s.T = T_or([&](double eps) {
        const double r = R();
        return std::max({81 * r * r * L0 * L0, 144 * c0 * c0 * L0 * L0, 9 * L0 * L0}) * d /
               (eps * eps);
      });
      const double T = static_cast<double>(s.T);
      s.alpha = std::sqrt(d / T);
      s.eta = 1.0 / (3 * std::sqrt(d * T) * L0);
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_gap;
      break;
    }
    case Setting::det_nonsmooth_scvx: {
      const double L0 = in.L0(), mu = in.mu(), eps = *req.epsilon;
      s.alpha = eps / (2 * (4 * c0 + 1) * L0);
      s.eta = s.alpha / (3 * d * L0);
      s.rho = 1 - mu * s.eta / 2;
      s.T = T_eps([&] {
        const double r = R();
        return 6 * (4 * c0 + 1) * L0 * L0 * d / (mu * eps) * std::log(mu * r * r / eps + 1);
      });
      s.averaging = Averaging::rho_weighted;
      s.metric = Metric::weighted_gap;
      break;
    }
    case Setting::det_smooth_cvx: {
      const double L0 = in.L0(), L = in.L(), r = R();
      s.T = T_or([&](double eps) {
        return std::max(std::pow(10.0, 1.5) * r * r * L * std::sqrt(L0) * d / std::pow(eps, 1.5),
                        std::pow(8.0, 0.75) * L0 * std::sqrt(r) / std::pow(L, 0.25) *
                            std::pow(d, 0.25) / std::pow(eps, 0.75));
      });
      const double T = static_cast<double>(s.T);
      s.alpha = std::pow(r, 2.0 / 3.0) * std::cbrt(d * L0 / (T * L));
      s.eta = s.alpha / (4 * d * L0);
      cap_eta(s, 1.0 / (64 * d * L), "1/(64 d L)");
      floor_warning(s.warnings, s.T, 4096 * r * r * std::pow(d, 4) * (L / L0) * (L / L0),
                    "2^12 R^2 d^4 (L/L0)^2");
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_gap;
      break;
    }
    case Setting::det_smooth_scvx: {
      const double L0 = in.L0(), L = in.L(), mu = in.mu(), eps = *req.epsilon;
      s.alpha = std::sqrt(eps / (9 * L));
      s.eta = s.alpha / (4 * d * L0);
      cap_eta(s, 1.0 / (56 * d * L), "1/(56 d L)");
      s.T = T_eps([&] {
        return 12 * d * L0 * std::sqrt(L) / (mu * std::sqrt(eps)) * std::log(3 * Delta() / eps);
      });
      const double eps_max = 9 * L0 * L0 * mu * mu / (196 * d * d * L * L * L);
      if (eps > eps_max) {
        std::ostringstream os;
        os << "eps = " << eps << " above the precision limit 9 L0^2 mu^2/(196 d^2 L^3) = "
           << eps_max;
        s.warnings.push_back(os.str());
      }
      s.averaging = Averaging::last;
      s.metric = Metric::last_gap;
      break;
    }
    case Setting::det_smooth_noncvx: {
      const double L0 = in.L0(), L = in.L(), D = Delta();
      s.T = T_or([&](double eps) { return std::pow(24.0, 1.5) * d * L0 * L * D / (eps * eps * eps); });
      const double T = static_cast<double>(s.T);
      s.alpha = std::cbrt(d * L0 * D / (L * L * T));
      s.eta = s.alpha / (4 * d * L0);
      cap_eta(s, 1.0 / (16 * d * L), "1/(16 d L)");
      floor_warning(s.warnings, s.T,
                    std::max({std::pow(6.0, 1.5) * d * L0 / std::sqrt(D * L),
                              125 * std::pow(d, 4) * D / (L * L * L0 * L0),
                              64 * L * std::pow(d, 4) * D / (L0 * L0)}),
                    "of the nonconvex corollary");
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_grad_sq;
      break;
    }
    case Setting::sto_nonsmooth_cvx: {
      const double L0 = in.L0(), s0 = in.sigma0(), r = R();
      s.T = T_or([&](double eps) {
        return 96 * L0 * L0 * r * r *
               std::max(16 * d * d * s0 * s0 / std::pow(eps, 4), d * c0 / (eps * eps));
      });
      const double T = static_cast<double>(s.T);
      s.alpha = std::pow(96.0, 0.25) * std::sqrt(d * s0 * r / L0) / std::pow(T, 0.25);
      s.eta = r * s.alpha /
              (std::sqrt(24 * d * T) * std::sqrt(c0 * L0 * L0 * s.alpha * s.alpha + d * s0 * s0));
      cap_eta(s, s.alpha / (3 * d * L0), "alpha/(3 d L0)");
      floor_warning(s.warnings, s.T, 3 * L0 * L0 * r * r / (2048 * c0 * c0 * s0 * s0),
                    "3 L0^2 R^2/(2^11 c0^2 sigma0^2)");
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_gap;
      break;
    }
    case Setting::sto_nonsmooth_scvx: {
      const double L0 = in.L0(), mu = in.mu(), s0 = in.sigma0(), eps = *req.epsilon;
      s.alpha = std::min(eps / (8 * L0), std::cbrt(d * s0 * s0 * eps / (4 * c0 * L0 * L0 * L0)));
      s.eta = L0 * std::pow(s.alpha, 3) / (24 * d * d * s0 * s0);
      cap_eta(s, s.alpha / (3 * d * L0), "alpha/(3 d L0)");
      s.rho = 1 - mu * s.eta / 2;
      s.T = T_eps([&] {
        const double r = R();
        return 48 * L0 * L0 / mu *
               std::max(512 * d * d * s0 * s0 / std::pow(eps, 3), 4 * c0 * d / eps) *
               std::log(mu * r * r / eps + 1);
      });
      const double eps_max = 4 * std::sqrt(8 * d * (8 * c0 + 1)) * s0;
      if (!(eps < eps_max)) {
        std::ostringstream os;
        os << "eps = " << eps << " not below 4 (8 d (8 c0 + 1))^(1/2) sigma0 = " << eps_max;
        s.warnings.push_back(os.str());
      }
      s.averaging = Averaging::rho_weighted;
      s.metric = Metric::weighted_gap;
      break;
    }
    case Setting::sto_smooth_cvx: {
      const double L0 = in.L0(), L = in.L(), s0 = in.sigma0(), r = R();
      s.T = T_or([&](double eps) {
        const double s1 = in.sigma1();
        return std::max(1728 * L * d * d * r * r * s0 * s0 / std::pow(eps, 3),
                        std::pow(2.0, 10.5) * std::sqrt(d) * r * r * std::pow(s1, 3) /
                            (std::sqrt(L) * s0 * std::pow(eps, 1.5)));
      });
      const double T = static_cast<double>(s.T);
      s.alpha = 4 * std::cbrt(d * r * s0 / L) / std::pow(T, 1.0 / 6.0);
      s.eta = s.alpha * r / (8 * std::sqrt(T) * d * s0);
      cap_eta(s, std::min(s.alpha / (8 * d * L0), 1.0 / (64 * d * L)),
              "min(alpha/(8 d L0), 1/(64 d L))");
      double floor = std::max({std::pow(20.0, 1.5) * L * r * r / (s0 * std::pow(d, 4)),
                               L0 * L0 * r * r / (s0 * s0),
                               std::pow(2.0, 3.5) * L * std::sqrt(d) * r * r / s0});
      if (k.sigma1 && *k.sigma1 > 0) floor = std::max(floor, L0 * L0 / (4 * *k.sigma1 * *k.sigma1));
      floor_warning(s.warnings, s.T, floor, "of the stochastic smooth convex corollary");
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_gap;
      break;
    }
    case Setting::sto_smooth_scvx: {
      const double L0 = in.L0(), L = in.L(), mu = in.mu(), s0 = in.sigma0(), s1 = in.sigma1();
      const double eps = *req.epsilon;
      double a2 = eps / (32 * L);
      if (s1 > 0) a2 = std::min(a2, std::sqrt(d * s0 * s0 * eps / (4 * L * s1 * s1)));
      s.alpha = std::sqrt(a2);
      s.eta = mu * a2 * a2 / (48 * d * d * s0 * s0);
      cap_eta(s, std::min(s.alpha / (8 * d * L0), 1.0 / (112 * d * L)),
              "min(alpha/(8 d L0), 1/(112 d L))");
      s.T = T_eps([&] {
        return std::max(3 * 16384 * L * L * d * d * s0 * s0 / (mu * mu * eps * eps),
                        192 * d * L * s1 * s1 / (mu * mu * eps)) *
               std::log(3 * Delta() / eps);
      });
      const double eps_max = std::min(64 * s0, s1 > 0 ? 16 * s1 * s1 / (d * L)
                                                      : std::numeric_limits<double>::infinity());
      if (eps > eps_max) {
        std::ostringstream os;
        os << "eps = " << eps << " above min(64 sigma0, 16 sigma1^2/(d L)) = " << eps_max;
        s.warnings.push_back(os.str());
      }
      s.averaging = Averaging::last;
      s.metric = Metric::last_gap;
      break;
    }
    case Setting::sto_smooth_noncvx: {
      const double L0 = in.L0(), L = in.L(), s0 = in.sigma0(), D = Delta();
      s.T = T_or([&](double eps) {
        const double s1 = in.sigma1();
        return D * std::max({std::pow(140.0, 3) * d * d * L * L * s0 * s0 / std::pow(eps, 6),
                             40 * L * d * d / (eps * eps),
                             512 * std::sqrt(d) * std::pow(s1, 3) / (L * s0 * std::pow(eps, 3)),
                             std::pow(96.0, 1.5) * d * d * s0 * s0 * std::sqrt(L) /
                                 (std::pow(eps, 3) * std::pow(D, 1.5))});
      });
      const double T = static_cast<double>(s.T);
      s.alpha = std::pow(D, 1.0 / 6.0) * std::cbrt(d * s0) /
                (std::pow(L, 2.0 / 3.0) * std::pow(T, 1.0 / 6.0));
      s.eta = s.alpha * std::sqrt(D) / (4 * std::sqrt(T) * d * s0);
      cap_eta(s, std::min(s.alpha / (8 * d * L0), 1.0 / (32 * d * L)),
              "min(alpha/(8 d L0), 1/(32 d L))");
      floor_warning(s.warnings, s.T, D * L0 * L0 / (d * s0 * s0), "(f(x1)-f*) L0^2/(d sigma0^2)");
      s.averaging = Averaging::uniform_mean;
      s.metric = Metric::mean_grad_sq;
      break;
    }
  }

  if (req.alpha_override) {
    if (!(*req.alpha_override > 0)) throw ConfigError("alpha override must be > 0");
    s.alpha = *req.alpha_override;
    s.warnings.push_back("alpha set explicitly");
  }
  if (req.eta_override) {
    if (!(*req.eta_override > 0)) throw ConfigError("eta override must be > 0");
    s.eta = *req.eta_override;
    s.warnings.push_back("eta set explicitly");
  }
  if (s.rho && (req.eta_override || req.alpha_override)) {
    s.rho = 1 - in.mu() * s.eta / 2;
  }
  if (s.rho && !(*s.rho > 0 && *s.rho < 1)) throw ConfigError("rho outside (0, 1)");
  if (!(s.eta > 0) || !(s.alpha > 0) || !std::isfinite(s.eta) || !std::isfinite(s.alpha))
    throw ConfigError("schedule produced non-positive eta or alpha");
  return s;
}

std::vector<double> rho_weights(double rho, std::int64_t T) {
  if (!(rho > 0 && rho < 1)) throw ParameterError("rho must lie in (0, 1)");
  std::vector<double> w(static_cast<std::size_t>(std::max<std::int64_t>(T, 0)));
  double v = 1.0;
  for (auto& x : w) {
    v /= rho;
    if (!std::isfinite(v)) throw ParameterError("rho_weights overflow; use rho_weights_scaled");
    x = v;
  }
  return w;
}

std::vector<double> rho_weights_scaled(double rho, std::int64_t T) {
  if (!(rho > 0 && rho < 1)) throw ParameterError("rho must lie in (0, 1)");
  std::vector<double> w(static_cast<std::size_t>(std::max<std::int64_t>(T, 0)));
  double v = 1.0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    *it = v;
    v *= rho;
  }
  return w;
}

Vector weighted_average(const std::vector<Vector>& points, const std::vector<double>& weights) {
  if (points.size() != weights.size())
    throw DimensionError("weighted_average: points and weights differ in length");
  if (points.empty()) throw DimensionError("weighted_average: no points");
  const double wmax = *std::max_element(weights.begin(), weights.end());
  if (!(wmax > 0) || !std::isfinite(wmax)) throw ParameterError("weighted_average: need a finite positive weight");
  Vector acc = Vector::Zero(points.front().size());
  double wsum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] >= 0)) throw ParameterError("weighted_average: weights must be nonnegative");
    if (points[i].size() != acc.size()) throw DimensionError("weighted_average: mixed dimensions");
    const double w = weights[i] / wmax;
    acc += w * points[i];
    wsum += w;
  }
  return acc / wsum;
}

namespace {

RunRecord run_impl(const Problem& p, const Schedule& s, std::uint64_t seed,
                   const RunOptions& opts, bool noisy) {
  if (s.T < 1) throw ParameterError("schedule T must be >= 1");
  if (!(s.eta > 0) || !(s.alpha > 0)) throw ParameterError("schedule eta and alpha must be > 0");
  if (opts.row_stride < 1) throw ParameterError("row_stride must be >= 1");
  if (noisy && !p.stochastic())
    throw CapabilityError("problem '" + p.id() + "' has no stochastic oracle");

  const ProblemConstants& k = p.constants();
  const int d = p.dim();
  const double f_star = k.f_star.value_or(std::numeric_limits<double>::quiet_NaN());

  auto counter = std::make_shared<std::atomic<long long>>(0);
  const Problem counted = p.with_query_counter(counter);

  Vector x = opts.x1.value_or(p.x_init());
  if (x.size() != d) throw DimensionError("x1 has the wrong dimension");
  const double limit = kDivergenceFactor * std::max(x.norm(), 1.0);

  RunRecord rec;
  RunSummary& sum = rec.summary;
  sum.seed = seed;
  sum.setting = std::string(to_string(s.setting));
  sum.estimator = std::string(to_string(opts.estimator));
  sum.problem = p.id();
  sum.d = d;
  sum.T = s.T;
  sum.metric = std::string(to_string(s.metric));
  sum.warnings = s.warnings;

  RandomStream stream(seed, 0x7a6f72756eULL);
  EstimatorState state;
  const bool residual =
      opts.estimator == EstimatorKind::residual || opts.estimator == EstimatorKind::residual_gaussian;
  // x_0 = x_1: the initial query f(x_1 + alpha u_0) fills the residual memory.
  if (residual) estimate(opts.estimator, counted, x, s.alpha, state, stream, noisy);

  auto in_box = [&](const Vector& y) {
    return !k.x_star || !std::isfinite(k.box_radius) || (y - *k.x_star).norm() <= k.box_radius;
  };

  Vector uniform_sum = Vector::Zero(d);
  Vector rho_sum = Vector::Zero(d);
  double rho_wsum = 0.0, gap_sum = 0.0, grad_sum = 0.0;
  const double rho = s.rho.value_or(0.0);

  if (opts.keep_trajectory) {
    rec.trajectory.reserve(static_cast<std::size_t>(s.T) + 1);
    rec.prev_values.reserve(static_cast<std::size_t>(s.T));
  }

  std::int64_t t = 1;
  for (; t <= s.T; ++t) {
    const double fx = p.value(x);
    if (!std::isfinite(fx) || !x.allFinite() || x.norm() > limit) {
      sum.diverged = true;
      break;
    }
    if (!in_box(x)) sum.exited_box = true;
    const double gap = fx - f_star;
    double gn2 = std::numeric_limits<double>::quiet_NaN();
    if (opts.record_gradient || s.metric == Metric::mean_grad_sq) gn2 = p.gradient(x).squaredNorm();

    if (opts.keep_trajectory) {
      rec.trajectory.push_back(x);
      rec.prev_values.push_back(state.prev_value);
    }
    const GradientEstimate g = estimate(opts.estimator, counted, x, s.alpha, state, stream, noisy);
    const double en2 = g.vector.squaredNorm();
    if (opts.keep_trajectory) rec.est_norm_sq.push_back(en2);

    uniform_sum += x;
    gap_sum += gap;
    grad_sum += gn2;
    if (s.averaging == Averaging::rho_weighted) {
      // Running sum normalised so the newest weight is 1.
      rho_sum = rho * rho_sum + x;
      rho_wsum = rho * rho_wsum + 1.0;
    }
    if ((t - 1) % opts.row_stride == 0 || t == s.T)
      rec.rows.push_back({t, fx, gap, gn2, en2, s.eta, s.alpha});

    x -= s.eta * g.vector;
  }
  sum.iterations_done = t - 1;
  sum.queries = counter->load();
  if (opts.keep_trajectory && !sum.diverged) rec.trajectory.push_back(x);

  if (sum.diverged || sum.iterations_done == 0) {
    sum.final_metric = std::numeric_limits<double>::infinity();
    sum.output_gap = std::numeric_limits<double>::infinity();
    sum.output_point = x;
    return rec;
  }
  if (!in_box(x)) sum.exited_box = true;

  const double n = static_cast<double>(sum.iterations_done);
  switch (s.averaging) {
    case Averaging::last: sum.output_point = x; break;
    case Averaging::uniform_mean: sum.output_point = uniform_sum / n; break;
    case Averaging::rho_weighted: sum.output_point = rho_sum / rho_wsum; break;
  }
  sum.output_gap = p.value(sum.output_point) - f_star;
  switch (s.metric) {
    case Metric::mean_gap: sum.final_metric = gap_sum / n; break;
    case Metric::weighted_gap:
    case Metric::last_gap: sum.final_metric = sum.output_gap; break;
    case Metric::mean_grad_sq: sum.final_metric = grad_sum / n; break;
  }
  return rec;
}

}  // namespace

RunRecord run_deterministic(const Problem& p, const Schedule& s, std::uint64_t seed,
                            const RunOptions& opts) {
  return run_impl(p, s, seed, opts, false);
}

RunRecord run_stochastic(const Problem& p, const Schedule& s, std::uint64_t seed,
                         const RunOptions& opts) {
  return run_impl(p, s, seed, opts, true);
}

void write_csv(std::ostream& os, const RunRecord& r) {
  os << "t,f_value,f_gap,grad_norm_sq,est_norm_sq,eta,alpha\n";
  os << std::setprecision(17);
  for (const RunRow& row : r.rows) {
    os << row.t << ',' << row.f_value << ',' << row.f_gap << ',' << row.grad_norm_sq << ','
       << row.est_norm_sq << ',' << row.eta << ',' << row.alpha << '\n';
  }
}

namespace {
// JSON has no inf/nan; write them as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
}  // namespace

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["setting"] = s.setting;
  j["estimator"] = s.estimator;
  j["problem"] = s.problem;
  j["d"] = s.d;
  j["T"] = s.T;
  j["iterations_done"] = s.iterations_done;
  j["queries"] = s.queries;
  j["metric"] = s.metric;
  j["final_metric"] = number(s.final_metric);
  j["output_gap"] = number(s.output_gap);
  j["diverged"] = s.diverged;
  j["exited_box"] = s.exited_box;
  j["warnings"] = s.warnings;
  return j.dump(2);
}

}  // namespace zo
