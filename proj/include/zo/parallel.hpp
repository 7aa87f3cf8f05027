#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "zo/random.hpp"

namespace zo {

/// Execution path for Monte Carlo kernels. `serial` is the reference
/// implementation; `parallel` distributes blocks over OpenMP threads.
enum class Exec { serial, parallel };

/// Draws per block. Each block owns `base.substream(block)`, which is what
/// makes the two execution paths produce bit-identical sums.
inline constexpr std::size_t kBlockSize = 4096;

/// Worker thread cap (ZO_THREADS if set, else the OpenMP default).
int thread_limit();
void set_thread_limit(int n);

/// Blocked reduction over `n` Monte Carlo draws.
///
/// `body(stream, acc)` consumes one draw from `stream` and folds it into
/// `acc`. `make()` builds an empty accumulator; `merge(into, from)` combines
/// two. Block partials are always merged in block order.
template <class Acc, class Make, class Body, class Merge>
Acc mc_reduce(std::size_t n, const RandomStream& base, Make make, Body body, Merge merge,
              Exec exec = Exec::parallel) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> partial;
  partial.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) partial.push_back(make());

  auto run_block = [&](std::size_t b) {
    RandomStream s = base.substream(b);
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(n, lo + kBlockSize);
    for (std::size_t i = lo; i < hi; ++i) body(s, partial[b]);
  };

  if (exec == Exec::parallel && blocks > 1) {
    const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_limit())
    for (std::int64_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }

  Acc total = make();
  for (auto& p : partial) merge(total, p);
  return total;
}

/// Runs `job(i)` for i in [0, n) as independent tasks (seed ensembles, sweep
/// cells). Results must be written to per-index slots by the caller.
template <class Job>
void parallel_jobs(std::size_t n, Job job, Exec exec = Exec::parallel) {
  if (exec == Exec::parallel && n > 1) {
    const auto nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_limit())
    for (std::int64_t i = 0; i < nn; ++i) job(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) job(i);
  }
}

}  // namespace zo
