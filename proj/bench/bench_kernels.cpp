// Serial reference vs OpenMP path for the Monte Carlo kernels. Prints wall
// times and whether the two results are bit-identical.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "zo/diagnostics.hpp"
#include "zo/parallel.hpp"
#include "zo/problems.hpp"
#include "zo/smoothing.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const zo::Vector& a, const zo::Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

int failures = 0;

template <class R, class Eq>
void bench(const char* name, const std::function<R(zo::Exec)>& kernel, Eq eq) {
  R serial, parallel;
  const double ts = seconds([&] { serial = kernel(zo::Exec::serial); });
  const double tp = seconds([&] { parallel = kernel(zo::Exec::parallel); });
  const bool ok = eq(serial, parallel);
  if (!ok) ++failures;
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
              ok ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  const auto n = static_cast<std::int64_t>(2'000'000 * scale);
  std::printf("threads: %d, draws per kernel: %lld\n", zo::thread_limit(),
              static_cast<long long>(n));
  const zo::RandomStream s(2024, 7);

  const zo::Problem lse = zo::make_logsumexp_problem(64, 0.5);
  const zo::SmoothedSurrogate sm(lse, 0.1);
  const zo::Vector x = lse.x_init();
  auto eq_vec = [](const zo::McVector& a, const zo::McVector& b) {
    return same(a.mean, b.mean) && a.cov_trace == b.cov_trace;
  };
  bench<zo::McVector>("grad_falpha (sphere, d=64)",
                      [&](zo::Exec e) { return zo::eval_grad_falpha_mc(sm, x, s, n, e); }, eq_vec);
  bench<zo::McVector>("grad_falpha (avg, d=64)",
                      [&](zo::Exec e) { return zo::grad_falpha_by_averaging(sm, x, s, n, e); },
                      eq_vec);

  const zo::Problem norm = zo::make_norm_problem(32);
  bench<zo::McValue>(
      "falpha value (norm, d=32)",
      [&](zo::Exec e) { return zo::eval_falpha_mc(zo::SmoothedSurrogate(norm, 0.2), norm.x_init(), s, n, e); },
      [](const zo::McValue& a, const zo::McValue& b) {
        return a.mean == b.mean && a.std_err == b.std_err;
      });
  bench<zo::C0Estimate>(
      "c0 estimate (norm, d=32)",
      [&](zo::Exec e) { return zo::estimate_c0(norm, 0.2, n / 5, s, {}, e); },
      [](const zo::C0Estimate& a, const zo::C0Estimate& b) { return a.c0_hat == b.c0_hat; });
  bench<zo::BoundCheckReport>(
      "sphere moment (d=32)",
      [&](zo::Exec e) { return zo::check_sphere_moment(32, zo::Vector::Ones(32), n, s, e); },
      [](const zo::BoundCheckReport& a, const zo::BoundCheckReport& b) {
        return a.lhs == b.lhs && a.rhs == b.rhs && a.slack == b.slack;
      });
  return failures == 0 ? 0 : 1;
}
