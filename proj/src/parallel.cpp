#include "zo/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zo {
namespace {

int initial_limit() {
  if (const char* env = std::getenv("ZO_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int& limit_slot() {
  static int limit = initial_limit();
  return limit;
}

}  // namespace

int thread_limit() { return limit_slot(); }

void set_thread_limit(int n) { limit_slot() = n > 0 ? n : 1; }

}  // namespace zo
