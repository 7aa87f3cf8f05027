#include <doctest.h>

#include <cmath>

#include "zo/diagnostics.hpp"
#include "zo/errors.hpp"

using namespace zo;

namespace {

RunRecord trajectory(const Problem& p, const Schedule& s, std::uint64_t seed, bool sto = false) {
  RunOptions o;
  o.keep_trajectory = true;
  return sto ? run_stochastic(p, s, seed, o) : run_deterministic(p, s, seed, o);
}

}  // namespace

TEST_CASE("report pass rule: lhs <= rhs + slack, slack capped at a quarter of rhs") {
  BoundCheckReport r = make_report("t", "");
  r.add(1.0, 2.0, 0.0);
  r.add(2.1, 2.0, 0.2);
  r.finalize();
  CHECK(r.passed);
  CHECK(r.worst_ratio == doctest::Approx(1.05));
  r.add(2.5, 2.0, 0.4);
  r.finalize();
  CHECK(!r.passed);
  // Slack larger than 25% of the RHS never rescues an entry.
  BoundCheckReport v = make_report("v", "");
  v.add(1.2, 1.0, 0.3);
  v.finalize();
  CHECK(!v.passed);
  CHECK(!entry_passes(std::nan(""), 1.0, 0.0));
}

TEST_CASE("moment checks pass and are reproducible") {
  const auto a = check_sphere_moment(4, Vector::Ones(4), 200'000, RandomStream(1));
  const auto b = check_sphere_moment(4, Vector::Ones(4), 200'000, RandomStream(1));
  CHECK(a.passed);
  CHECK(a.lhs == b.lhs);
  CHECK(a.seed == b.seed);
  CHECK(check_ball_second_moment(8, 200'000, RandomStream(2)).passed);
  for (Distribution dist : {Distribution::unit_sphere, Distribution::unit_ball,
                            Distribution::standard_gaussian, Distribution::rademacher})
    CHECK(check_zero_mean(dist, 4, 200'000, RandomStream(3)).passed);
}

TEST_CASE("c0 estimates") {
  CHECK(estimate_c0(make_constant_problem(5), 0.1, 10'000, RandomStream(4)).c0_hat == 0.0);
  const Problem norm8 = make_norm_problem(8);
  const double a = estimate_c0(norm8, 0.1, 1'000'000, RandomStream(5)).c0_hat;
  const double b = estimate_c0(norm8, 0.1, 1'000'000, RandomStream(6)).c0_hat;
  MESSAGE("c0_hat(d=8) = " << a << ", " << b);
  CHECK(std::isfinite(a));
  CHECK(a >= 0);
  CHECK(std::abs(a - b) <= 0.1 * std::max(a, b));
  const double c4 = estimate_c0(make_norm_problem(4), 0.1, 200'000, RandomStream(7)).c0_hat;
  const double c32 = estimate_c0(make_norm_problem(32), 0.1, 200'000, RandomStream(8)).c0_hat;
  MESSAGE("c0_hat(d=4) = " << c4 << ", c0_hat(d=32) = " << c32);
  CHECK(std::max(c4, c32) <= 3 * std::min(c4, c32));
}

TEST_CASE("nonsmooth variance check") {
  const Problem c = make_constant_problem(4);
  const Schedule sc = make_schedule(Setting::det_nonsmooth_cvx, c, {.T = 50});
  const auto rc = check_variance_nonsmooth(c, trajectory(c, sc, 1), sc.alpha, sc.eta, 1.0,
                                           RandomStream(9));
  CHECK(rc.passed);
  for (double l : rc.lhs) CHECK(l == 0.0);

  const Problem n = make_norm_problem(8);
  const Schedule sn = make_schedule(Setting::det_nonsmooth_cvx, n, {.T = 200});
  const RunRecord run = trajectory(n, sn, 2);
  const double c0 = estimate_c0(n, sn.alpha, 20'000, RandomStream(10),
                                std::vector<Vector>(run.trajectory.begin(), run.trajectory.end()))
                        .c0_hat;
  VarianceCheckOptions o;
  o.max_iterates = 50;
  const auto rn = check_variance_nonsmooth(n, run, sn.alpha, sn.eta, c0, RandomStream(11), o);
  CHECK(rn.passed);
  CHECK_THROWS_AS(check_variance_nonsmooth(n, run, sn.alpha, 10 * sn.eta, c0, RandomStream(11), o),
                  PreconditionError);
}

TEST_CASE("stochastic nonsmooth variance check is dominated by the noise term") {
  const Problem p = add_value_noise(make_norm_problem(8), 0.5);
  const double alpha = 0.2, eta = alpha / 24;
  const Schedule s = make_schedule(Setting::sto_nonsmooth_cvx, p,
                                   {.T = 100, .eta_override = eta, .alpha_override = alpha});
  const RunRecord run = trajectory(p, s, 3, true);
  const double c0 = 1.6;
  VarianceCheckOptions o;
  o.noisy = true;
  o.max_iterates = 20;
  const auto r = check_variance_nonsmooth(p, run, alpha, eta, c0, RandomStream(12), o);
  CHECK(r.passed);
  const double noise_term = 24.0 * 64 * 0.25 / (alpha * alpha);
  for (double rhs : r.rhs) CHECK(noise_term > 0.5 * rhs);
}

TEST_CASE("smooth variance check") {
  // Quadratic at x_t = x_{t-1} = x*, g_{t-1} = 0: the RHS is the alpha^2 term
  // plus (tiny) ||grad f_alpha(x*)|| terms.
  const int d = 4;
  const Problem q = make_quadratic_problem(d, 1.0, 4.0);
  RunRecord at_star;
  at_star.trajectory = {Vector::Zero(d), Vector::Zero(d)};
  at_star.prev_values = {0.0};
  at_star.est_norm_sq = {0.0};
  const double alpha = 0.1, L = 4.0;
  const double eta = alpha / (4 * d * *q.constants().L0);
  const auto r = check_variance_smooth(q, at_star, alpha, eta, RandomStream(13));
  REQUIRE(r.size() == 1);
  CHECK(r.passed);
  CHECK(r.rhs[0] == doctest::Approx(10.0 * d * d * L * L * alpha * alpha).epsilon(1e-3));
  CHECK(r.lhs[0] <= r.rhs[0]);

  const Problem c = make_constant_problem(3);
  const Schedule sc = make_schedule(Setting::det_smooth_cvx, c, {.T = 30});
  const auto rc = check_variance_smooth(c, trajectory(c, sc, 4), sc.alpha, sc.eta, RandomStream(14));
  for (double l : rc.lhs) CHECK(l == 0.0);

  const Problem lse = make_logsumexp_problem(4, 0.5);
  const Schedule sl = make_schedule(Setting::det_smooth_cvx, lse, {.T = 100});
  VarianceCheckOptions o;
  o.max_iterates = 25;
  CHECK(check_variance_smooth(lse, trajectory(lse, sl, 5), sl.alpha, sl.eta, RandomStream(15), o)
            .passed);
  CHECK_THROWS_AS(check_variance_smooth(lse, trajectory(lse, sl, 5), sl.alpha, 100 * sl.eta,
                                        RandomStream(15), o),
                  PreconditionError);
}

TEST_CASE("residual unbiasedness check") {
  const Problem q = make_quadratic_problem(8, 1.0, 4.0);
  const Vector x = q.x_init();
  const auto r = check_residual_unbiased(q, x, 0.3, 0.1, q.gradient(x), 300'000, RandomStream(16));
  CHECK(r.passed);
  // A wrong reference is caught.
  const auto bad = check_residual_unbiased(q, x, 0.3, 0.1, q.gradient(x) * 1.5, 300'000,
                                           RandomStream(16));
  CHECK(!bad.passed);
}

TEST_CASE("proposition 1 check") {
  const LeastSquares ls = make_least_squares(16, 200, RowMode::rademacher_rows, 17);
  const auto r = check_proposition1(ls.data, RandomStream(18));
  CHECK(r.passed);
  CHECK(r.warnings.empty());
  CHECK(r.size() == 20);

  Proposition1Options only_star;
  only_star.n_x = 1;
  CHECK(check_proposition1(ls.data, RandomStream(19), only_star).passed);

  const LeastSquares one = make_least_squares(1, 1, RowMode::rademacher_rows, 20);
  const auto r1 = check_proposition1(one.data, RandomStream(21));
  CHECK(r1.passed);
  for (double l : r1.lhs) CHECK(l == 0.0);

  const LeastSquares g = make_least_squares(16, 200, RowMode::gaussian_rows, 22);
  CHECK(!check_proposition1(g.data, RandomStream(23)).warnings.empty());
}

TEST_CASE("PL inequality on the quadratic") {
  const Problem q = make_quadratic_problem(5, 1.0, 4.0);
  const auto probes = box_probes(q, 100, RandomStream(24));
  CHECK(check_pl_inequality(q, probes).passed);
  const auto star = check_pl_inequality(q, {Vector::Zero(5)});
  CHECK(star.lhs[0] == 0.0);
  CHECK(star.rhs[0] == 0.0);
  // Equality along the mu eigenvector (first coordinate).
  const auto eig = check_pl_inequality(q, {Vector::Unit(5, 0) * 0.7});
  CHECK(eig.lhs[0] == doctest::Approx(eig.rhs[0]));
  const auto off = check_pl_inequality(q, {Vector::Unit(5, 4) * 0.7});
  CHECK(off.lhs[0] < off.rhs[0]);
}

TEST_CASE("variance comparison table") {
  const auto zero = variance_comparison_table(
      make_constant_problem(4, 0.0), Vector::Ones(4), {0.1, 0.01},
      {EstimatorKind::one_point, EstimatorKind::two_point, EstimatorKind::residual,
       EstimatorKind::spsa1},
      2000, RandomStream(25));
  CHECK(zero.size() == 8);
  for (const auto& r : zero) CHECK(r.second_moment == 0.0);

  const auto one = variance_comparison_table(make_constant_problem(4, 1.0), Vector::Ones(4),
                                             {0.1, 0.05}, {EstimatorKind::one_point}, 2000,
                                             RandomStream(26));
  CHECK(one[1].second_moment / one[0].second_moment == doctest::Approx(4.0));

  // Quadratic at x*, alpha = 0.01, d = 8: residual well below one-point.
  const Problem q = make_quadratic_problem(8, 1.0, 4.0);
  const auto t = variance_comparison_table(q, Vector::Zero(8), {0.01},
                                           {EstimatorKind::one_point, EstimatorKind::residual},
                                           200'000, RandomStream(27));
  MESSAGE("one-point " << t[0].second_moment << ", residual " << t[1].second_moment);
  CHECK(t[1].second_moment <= t[0].second_moment / 10);
}

TEST_CASE("declared constants: corrupting L is detected") {
  const Problem q = make_quadratic_problem(6, 1.0, 4.0);
  ProblemConstants k = q.constants();
  *k.L *= 0.5;
  const auto rs = check_declared_constants(q.with_constants(k), 1000, RandomStream(28));
  CHECK(!all_passed(rs));
}

TEST_CASE("json and text output") {
  const auto r = check_ball_second_moment(3, 10'000, RandomStream(29));
  const std::string js = reports_json("moments", {r});
  for (const char* key : {"\"name\"", "\"pass\"", "\"worst_ratio\"", "\"n\"", "\"seed\""})
    CHECK(js.find(key) != std::string::npos);
  CHECK(reports_text({r}).find("moments.ball_second_moment_d3") != std::string::npos);
}
