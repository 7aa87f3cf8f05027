#include "zo/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zo/errors.hpp"
#include "zo/parallel.hpp"
#include "zo/smoothing.hpp"

namespace zo {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << text;
}

fs::path prepare_dir(const ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

}  // namespace

// ---- config ------------------------------------------------------------------

void apply_config_json(ExperimentConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "problem") cfg.problem = v.get<std::string>();
      else if (key == "dim" || key == "d") cfg.params.dim = v.get<int>();
      else if (key == "mu") cfg.params.mu = v.get<double>();
      else if (key == "L") cfg.params.L = v.get<double>();
      else if (key == "temperature") cfg.params.temperature = v.get<double>();
      else if (key == "m") cfg.params.m = v.get<int>();
      else if (key == "rows") cfg.params.rows = parse_row_mode(v.get<std::string>());
      else if (key == "data_seed") cfg.params.data_seed = v.get<std::uint64_t>();
      else if (key == "sigma0") cfg.params.sigma0 = v.get<double>();
      else if (key == "box_radius") cfg.params.box_radius = v.get<double>();
      else if (key == "estimator") cfg.estimator = v.get<std::string>();
      else if (key == "setting") cfg.setting = v.get<std::string>();
      else if (key == "T") cfg.T = v.get<std::int64_t>();
      else if (key == "eps") cfg.epsilon = v.get<double>();
      else if (key == "seeds") cfg.seeds = v.get<std::vector<std::uint64_t>>();
      else if (key == "d_sweep") cfg.d_sweep = v.get<std::vector<int>>();
      else if (key == "eps_list") cfg.eps_list = v.get<std::vector<double>>();
      else if (key == "out") cfg.output_dir = v.get<std::string>();
      else if (key == "eta") cfg.eta = v.get<double>();
      else if (key == "alpha") cfg.alpha = v.get<double>();
      else if (key == "c0") cfg.c0 = v.get<double>();
      else if (key == "row_stride") cfg.row_stride = v.get<std::int64_t>();
      else if (key == "T_cap") cfg.T_cap = v.get<std::int64_t>();
      else if (key == "corrupt") cfg.corrupt = v.get<std::map<std::string, double>>();
      else if (key == "gnuplot") cfg.gnuplot = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  ExperimentConfig cfg;
  apply_config_json(cfg, ss.str());
  return cfg;
}

Problem build_problem(const ExperimentConfig& cfg) { return build_problem(cfg, cfg.params.dim); }

Problem build_problem(const ExperimentConfig& cfg, int dim) {
  ProblemParams params = cfg.params;
  params.dim = dim;
  Problem p = make_problem(cfg.problem, params);
  if (cfg.corrupt.empty()) return p;
  ProblemConstants k = p.constants();
  for (const auto& [name, factor] : cfg.corrupt) {
    std::optional<double>* slot = nullptr;
    if (name == "L0") slot = &k.L0;
    else if (name == "L") slot = &k.L;
    else if (name == "mu") slot = &k.mu;
    else if (name == "sigma0") slot = &k.sigma0;
    else if (name == "sigma1") slot = &k.sigma1;
    else if (name == "f_star") slot = &k.f_star;
    else throw ConfigError("cannot corrupt unknown constant '" + name + "'");
    if (!*slot) throw ConfigError("cannot corrupt undeclared constant '" + name + "'");
    **slot *= factor;
  }
  return p.with_constants(std::move(k));
}

ScheduleRequest schedule_request(const ExperimentConfig& cfg) {
  ScheduleRequest r;
  r.T = cfg.T;
  r.epsilon = cfg.epsilon;
  r.c0 = cfg.c0;
  r.eta_override = cfg.eta;
  r.alpha_override = cfg.alpha;
  return r;
}

// ---- fitting -----------------------------------------------------------------

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("fit_line: x and y differ in length");
  if (x.size() < 2) throw ParameterError("fit_line needs at least two points");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x[static_cast<std::size_t>(i)];
    Y[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
  const double ss_res = (Y - X * beta).squaredNorm();
  const double ss_tot = (Y.array() - Y.mean()).square().sum();
  LineFit f;
  f.intercept = beta[0];
  f.slope = beta[1];
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.n = x.size();
  return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ParameterError("fit_loglog needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

// ---- runs ----------------------------------------------------------------------

EnsembleResult run_ensemble(const ExperimentConfig& cfg, const Problem& p,
                            std::optional<std::int64_t> T, bool keep_rows) {
  if (cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
  const Setting setting = parse_setting(cfg.setting);
  ScheduleRequest req = schedule_request(cfg);
  if (T) {
    req.T = T;
    if (!needs_epsilon(setting)) req.epsilon.reset();
  }
  EnsembleResult out;
  out.schedule = make_schedule(setting, p, req);
  RunOptions opts;
  opts.estimator = parse_estimator(cfg.estimator);
  opts.row_stride = keep_rows ? cfg.row_stride : std::numeric_limits<std::int64_t>::max();
  opts.record_gradient = keep_rows;
  const bool sto = is_stochastic(setting);
  out.runs.resize(cfg.seeds.size());
  parallel_jobs(cfg.seeds.size(), [&](std::size_t i) {
    out.runs[i] = sto ? run_stochastic(p, out.schedule, cfg.seeds[i], opts)
                      : run_deterministic(p, out.schedule, cfg.seeds[i], opts);
  });
  double s1 = 0, s2 = 0;
  for (const auto& r : out.runs) {
    if (r.summary.diverged) ++out.n_diverged;
    s1 += r.summary.final_metric;
    s2 += r.summary.final_metric * r.summary.final_metric;
  }
  const double n = static_cast<double>(out.runs.size());
  out.mean = s1 / n;
  out.std = n > 1 && std::isfinite(out.mean)
                ? std::sqrt(std::max(0.0, (s2 - n * out.mean * out.mean) / (n - 1)))
                : 0.0;
  return out;
}

// ---- T_eps ---------------------------------------------------------------------

TEpsEntry search_T_eps(const std::function<double(std::int64_t)>& mean_metric, double eps,
                       std::int64_t T_cap) {
  TEpsEntry e;
  std::int64_t prev = 0, T = 1;
  double m = 0;
  for (;;) {
    if (T > T_cap) {
      e.censored = true;
      e.T_eps = T_cap;
      e.metric = m;
      return e;
    }
    m = mean_metric(T);
    e.probes.emplace_back(T, m);
    if (m <= eps) break;
    prev = T;
    T *= 2;
  }
  e.T_eps = T;
  e.metric = m;
  if (prev > 0) {
    const auto mid = static_cast<std::int64_t>(std::llround(std::sqrt(double(prev) * double(T))));
    if (mid > prev && mid < T) {
      const double mm = mean_metric(mid);
      e.probes.emplace_back(mid, mm);
      if (mm <= eps) {
        e.T_eps = mid;
        e.metric = mm;
      }
    }
  }
  return e;
}

namespace {

SweepResult finish_sweep(std::vector<TEpsEntry> entries) {
  SweepResult r;
  r.entries = std::move(entries);
  std::vector<double> x, y;
  for (const auto& e : r.entries) {
    if (e.censored) {
      ++r.n_censored;
      continue;
    }
    x.push_back(e.key);
    y.push_back(static_cast<double>(e.T_eps));
  }
  if (x.size() >= 2) r.fit = fit_loglog(x, y);
  else r.fit.slope = r.fit.r2 = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace

SweepResult sweep_dimension(const ExperimentConfig& cfg) {
  if (cfg.d_sweep.empty()) throw ConfigError("sweep-d needs d_sweep");
  if (!cfg.epsilon) throw ConfigError("sweep-d needs eps");
  std::vector<TEpsEntry> entries;
  for (int d : cfg.d_sweep) {
    const Problem p = build_problem(cfg, d);
    TEpsEntry e = search_T_eps(
        [&](std::int64_t T) { return run_ensemble(cfg, p, T, false).mean; }, *cfg.epsilon,
        cfg.T_cap);
    e.key = d;
    entries.push_back(std::move(e));
  }
  return finish_sweep(std::move(entries));
}

SweepResult sweep_precision(const ExperimentConfig& cfg) {
  if (cfg.eps_list.empty()) throw ConfigError("sweep-eps needs eps_list");
  const Problem p = build_problem(cfg);
  std::vector<TEpsEntry> entries;
  for (double eps : cfg.eps_list) {
    ExperimentConfig c = cfg;
    c.epsilon = eps;
    TEpsEntry e = search_T_eps([&](std::int64_t T) { return run_ensemble(c, p, T, false).mean; },
                               eps, cfg.T_cap);
    e.key = eps;
    entries.push_back(std::move(e));
  }
  return finish_sweep(std::move(entries));
}

// ---- suites ------------------------------------------------------------------------

bool is_suite(const std::string& name) {
  return std::find_if(std::begin(kSuites), std::end(kSuites),
                      [&](const char* s) { return name == s; }) != std::end(kSuites);
}

namespace {

void append(std::vector<BoundCheckReport>& into, std::vector<BoundCheckReport> more) {
  for (auto& r : more) into.push_back(std::move(r));
}

std::vector<BoundCheckReport> suite_moments(const RandomStream& s) {
  std::vector<BoundCheckReport> out;
  std::uint64_t k = 0;
  for (int d : {1, 4, 32}) {
    out.push_back(check_sphere_moment(d, Vector::Unit(d, 0), 1'000'000, s.substream(k++)));
    RandomStream ra = s.substream(k++);
    const Vector a = sample_gaussian(ra, d).vector;
    out.push_back(check_sphere_moment(d, a, 1'000'000, s.substream(k++)));
  }
  for (int d : {2, 8, 32}) out.push_back(check_ball_second_moment(d, 1'000'000, s.substream(k++)));
  for (Distribution dist : {Distribution::unit_sphere, Distribution::unit_ball,
                            Distribution::standard_gaussian, Distribution::rademacher})
    out.push_back(check_zero_mean(dist, 4, 1'000'000, s.substream(k++)));
  return out;
}

std::vector<BoundCheckReport> suite_smoothing(const RandomStream& s) {
  std::vector<BoundCheckReport> out;
  std::uint64_t k = 0;
  const int d = 8;
  const Problem norm = make_norm_problem(d);
  const Problem lse = make_logsumexp_problem(d, 0.5);
  const Problem quad = make_quadratic_problem(d, 1.0, 4.0);
  auto tagged = [&](std::vector<BoundCheckReport> rs, const std::string& prefix) {
    for (auto& r : rs) r.name = prefix + "." + r.name;
    append(out, std::move(rs));
  };
  for (double alpha : {0.05, 0.2}) {
    for (const Problem* p : {&norm, &lse, &quad}) {
      const auto probes = box_probes(*p, 20, s.substream(k++));
      std::ostringstream prefix;
      prefix << p->id() << "_a" << alpha;
      tagged(check_smoothing_bounds(SmoothedSurrogate(*p, alpha), probes, s.substream(k++)),
             prefix.str());
    }
  }
  for (const Problem* p : {&norm, &lse, &quad}) {
    const auto xs = box_probes(*p, 100, s.substream(k++));
    const auto ys = box_probes(*p, 100, s.substream(k++));
    std::vector<std::pair<Vector, Vector>> pairs;
    for (std::size_t i = 0; i < xs.size(); ++i) pairs.emplace_back(xs[i], ys[i]);
    tagged(check_inherited_properties(SmoothedSurrogate(*p, 0.1), pairs, s.substream(k++), 20'000),
           p->id());
  }
  return out;
}

RunRecord trajectory_run(const Problem& p, Setting setting, const ScheduleRequest& req,
                         std::uint64_t seed, Schedule& schedule) {
  schedule = make_schedule(setting, p, req);
  RunOptions opts;
  opts.keep_trajectory = true;
  return is_stochastic(setting) ? run_stochastic(p, schedule, seed, opts)
                                : run_deterministic(p, schedule, seed, opts);
}

std::vector<BoundCheckReport> suite_variance(const RandomStream& s, std::uint64_t seed) {
  std::vector<BoundCheckReport> out;
  Schedule sch;
  {
    const Problem p = make_logsumexp_problem(4, 0.5);
    const RunRecord run = trajectory_run(p, Setting::det_smooth_cvx, {.T = 200}, seed, sch);
    out.push_back(check_variance_smooth(p, run, sch.alpha, sch.eta, s.substream(0)));
  }
  {
    const Problem p = make_norm_problem(8);
    const RunRecord run = trajectory_run(p, Setting::det_nonsmooth_cvx, {.T = 200}, seed, sch);
    std::vector<Vector> probes(run.trajectory.begin(), run.trajectory.end());
    const C0Estimate c0 = estimate_c0(p, sch.alpha, 20'000, s.substream(1), probes);
    out.push_back(check_variance_nonsmooth(p, run, sch.alpha, sch.eta, c0.c0_hat, s.substream(2)));
  }
  {
    const Problem p = add_value_noise(make_norm_problem(8), 0.5);
    const double alpha = 0.2, eta = alpha / (3 * 8 * 1.0);
    ScheduleRequest req{.T = 200, .eta_override = eta, .alpha_override = alpha};
    const RunRecord run = trajectory_run(p, Setting::sto_nonsmooth_cvx, req, seed, sch);
    std::vector<Vector> probes(run.trajectory.begin(), run.trajectory.end());
    const C0Estimate c0 = estimate_c0(p, alpha, 20'000, s.substream(3), probes);
    VarianceCheckOptions o;
    o.noisy = true;
    out.push_back(check_variance_nonsmooth(p, run, alpha, eta, c0.c0_hat, s.substream(4), o));
  }
  {
    const Problem p = add_value_noise(make_logsumexp_problem(4, 0.5), 0.1);
    const RunRecord run = trajectory_run(p, Setting::sto_smooth_cvx, {.T = 200}, seed, sch);
    VarianceCheckOptions o;
    o.noisy = true;
    out.push_back(check_variance_smooth(p, run, sch.alpha, sch.eta, s.substream(5), o));
  }
  {
    const Problem q = make_quadratic_problem(8, 1.0, 4.0);
    const double alpha = 0.1;
    const Vector x = q.x_init();
    RandomStream r = s.substream(6);
    const double prev = q.value(x + alpha * sample_sphere(r, 8).vector);
    const Vector ref = q.gradient(x);  // grad f_alpha = grad f for quadratics
    out.push_back(check_residual_unbiased(q, x, prev, alpha, ref, 1'000'000, s.substream(7)));
  }
  return out;
}

std::vector<BoundCheckReport> suite_proposition1(const RandomStream& s, std::uint64_t data_seed) {
  const LeastSquares ls = make_least_squares(16, 200, RowMode::rademacher_rows, data_seed);
  return {check_proposition1(ls.data, s)};
}

}  // namespace

std::vector<BoundCheckReport> run_suite(const std::string& suite, const ExperimentConfig& cfg,
                                        std::uint64_t seed) {
  if (!is_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
  const RandomStream s(seed, 0xd1a6);
  std::vector<BoundCheckReport> out;
  const bool all = suite == "all";
  if (all || suite == "moments") append(out, suite_moments(s.substream(1)));
  if (all || suite == "smoothing") append(out, suite_smoothing(s.substream(2)));
  if (all || suite == "variance") append(out, suite_variance(s.substream(3), seed));
  if (all || suite == "proposition1")
    append(out, suite_proposition1(s.substream(4), cfg.params.data_seed));
  if (all) {
    const Problem p = build_problem(cfg);
    auto decl = check_declared_constants(p, 1000, s.substream(5));
    for (auto& r : decl) r.name = cfg.problem + "." + r.name;
    append(out, std::move(decl));
    const double alpha = cfg.alpha.value_or(0.1);
    auto sm = check_smoothing_bounds(SmoothedSurrogate(p, alpha, 100'000, 200'000),
                                     box_probes(p, 10, s.substream(6)), s.substream(7));
    for (auto& r : sm) r.name = cfg.problem + "." + r.name;
    append(out, std::move(sm));
  }
  return out;
}

// ---- commands -----------------------------------------------------------------

int cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
  const Problem p = build_problem(cfg);
  const EnsembleResult ens = run_ensemble(cfg, p);
  const fs::path dir = prepare_dir(cfg);

  ojson agg;
  agg["setting"] = cfg.setting;
  agg["problem"] = cfg.problem;
  agg["estimator"] = cfg.estimator;
  agg["d"] = p.dim();
  agg["T"] = ens.schedule.T;
  agg["eta"] = ens.schedule.eta;
  agg["alpha"] = ens.schedule.alpha;
  agg["averaging"] = std::string(to_string(ens.schedule.averaging));
  agg["metric"] = std::string(to_string(ens.schedule.metric));
  agg["seeds"] = cfg.seeds;
  agg["mean_final_metric"] = num(ens.mean);
  agg["std_final_metric"] = num(ens.std);
  agg["n_diverged"] = ens.n_diverged;
  agg["warnings"] = ens.schedule.warnings;
  agg["runs"] = json::array();
  for (const RunRecord& r : ens.runs) {
    std::ostringstream csv;
    write_csv(csv, r);
    write_file(dir / ("run_" + std::to_string(r.summary.seed) + ".csv"), csv.str());
    write_file(dir / ("run_" + std::to_string(r.summary.seed) + ".json"),
               summary_json(r.summary) + "\n");
    ojson e;
    e["seed"] = r.summary.seed;
    e["final_metric"] = num(r.summary.final_metric);
    e["queries"] = r.summary.queries;
    e["diverged"] = r.summary.diverged;
    e["exited_box"] = r.summary.exited_box;
    agg["runs"].push_back(std::move(e));
  }
  write_file(dir / "summary.json", agg.dump(2) + "\n");
  if (cfg.gnuplot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\nset logscale y\nset xlabel 't'\nset ylabel 'f_gap'\nplot";
    for (std::size_t i = 0; i < ens.runs.size(); ++i)
      gp << (i ? "," : "") << " 'run_" << ens.runs[i].summary.seed
         << ".csv' using 1:3 with lines title 'seed " << ens.runs[i].summary.seed << "'";
    gp << "\n";
    write_file(dir / "plot.gp", gp.str());
  }

  log << cfg.setting << " on " << cfg.problem << " (d = " << p.dim() << "): T = " << ens.schedule.T
      << ", eta = " << ens.schedule.eta << ", alpha = " << ens.schedule.alpha << "\n";
  for (const auto& w : ens.schedule.warnings) log << "warning: " << w << "\n";
  log << to_string(ens.schedule.metric) << " over " << ens.runs.size() << " seeds: mean "
      << ens.mean << ", std " << ens.std;
  if (ens.n_diverged) log << ", " << ens.n_diverged << " diverged";
  log << "\nwrote " << (dir / "summary.json").string() << "\n";
  return 0;
}

namespace {

int write_sweep(const ExperimentConfig& cfg, const SweepResult& r, const char* key,
                std::ostream& log) {
  const fs::path dir = prepare_dir(cfg);
  std::ostringstream csv;
  csv << key << ",T_eps,censored,metric\n" << std::setprecision(17);
  for (const auto& e : r.entries)
    csv << e.key << ',' << e.T_eps << ',' << (e.censored ? 1 : 0) << ',' << e.metric << '\n';
  write_file(dir / "sweep.csv", csv.str());
  ojson j;
  j["sweep"] = key;
  j["setting"] = cfg.setting;
  j["problem"] = cfg.problem;
  j["slope"] = num(r.fit.slope);
  j["r2"] = num(r.fit.r2);
  j["n_fitted"] = r.fit.n;
  j["n_censored"] = r.n_censored;
  write_file(dir / "sweep.json", j.dump(2) + "\n");
  if (cfg.gnuplot) {
    write_file(dir / "sweep.gp", std::string("set datafile separator ','\nset logscale xy\n"
                                             "set xlabel '") +
                                     key + "'\nset ylabel 'T_eps'\nplot 'sweep.csv' every ::1 "
                                           "using 1:2 with linespoints title 'T_eps'\n");
  }
  for (const auto& e : r.entries)
    log << key << " = " << e.key << ": T_eps = " << e.T_eps << (e.censored ? " (censored)" : "")
        << "\n";
  log << "log-log slope " << r.fit.slope << " (R^2 " << r.fit.r2 << ", " << r.fit.n
      << " points)\n";
  return 0;
}

}  // namespace

int cmd_sweep_dimension(const ExperimentConfig& cfg, std::ostream& log) {
  return write_sweep(cfg, sweep_dimension(cfg), "d", log);
}

int cmd_sweep_precision(const ExperimentConfig& cfg, std::ostream& log) {
  return write_sweep(cfg, sweep_precision(cfg), "eps", log);
}

int cmd_diagnose(const ExperimentConfig& cfg, const std::string& suite, std::ostream& log) {
  if (!is_suite(suite)) {
    log << "unknown suite '" << suite << "' (expected moments, smoothing, variance, "
        << "proposition1 or all)\n";
    return 2;
  }
  const std::uint64_t seed = cfg.seeds.empty() ? 1 : cfg.seeds.front();
  const auto reports = run_suite(suite, cfg, seed);
  const fs::path dir = prepare_dir(cfg);
  write_file(dir / ("diagnose_" + suite + ".json"), reports_json(suite, reports) + "\n");
  log << reports_text(reports);
  const bool ok = all_passed(reports);
  log << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? 0 : 1;
}

int cmd_estimate_constants(const ExperimentConfig& cfg, std::ostream& log) {
  const Problem p = build_problem(cfg);
  const double alpha = cfg.alpha.value_or(0.1);
  const std::uint64_t seed = cfg.seeds.empty() ? 1 : cfg.seeds.front();
  const RandomStream s(seed, 0xc0);
  const ProblemConstants& k = p.constants();
  ojson j;
  j["problem"] = cfg.problem;
  j["d"] = p.dim();
  j["alpha"] = alpha;
  if (k.L0) j["L0"] = *k.L0;
  if (k.L) j["L"] = *k.L;
  if (k.mu) j["mu"] = *k.mu;
  if (k.f_star) j["f_star"] = *k.f_star;
  if (k.L0) {
    const C0Estimate c0 = estimate_c0(p, alpha, 200'000, s.substream(0));
    j["c0"] = c0.c0_hat;
    log << "c0 = " << c0.c0_hat << " (alpha " << alpha << ", d " << p.dim() << ")\n";
  }
  if (p.stochastic()) {
    const SigmaEstimate se = estimate_sigma(p, 8, 20'000, s.substream(1));
    j["sigma0_hat"] = se.sigma0_hat;
    if (se.has_gradient_estimate) j["sigma1_hat"] = se.sigma1_hat;
    log << "sigma0_hat = " << se.sigma0_hat;
    if (se.has_gradient_estimate) log << ", sigma1_hat = " << se.sigma1_hat;
    log << "\n";
  }
  const fs::path dir = prepare_dir(cfg);
  write_file(dir / "constants.json", j.dump(2) + "\n");
  log << "wrote " << (dir / "constants.json").string() << "\n";
  return 0;
}

}  // namespace zo
