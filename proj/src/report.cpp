#include "zo/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zo {

bool entry_passes(double lhs, double rhs, double slack) {
  if (!std::isfinite(lhs) || std::isnan(rhs)) return false;
  if (lhs <= rhs) return true;
  if (lhs > rhs + slack) return false;
  return rhs <= 0.0 || slack <= kMaxSlackFraction * rhs;
}

void BoundCheckReport::add(double l, double r, double s) {
  lhs.push_back(l);
  rhs.push_back(r);
  slack.push_back(s);
}

void BoundCheckReport::finalize() {
  passed = true;
  worst_ratio = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    passed = passed && entry_passes(lhs[i], rhs[i], slack[i]);
    double ratio;
    if (rhs[i] > 0) {
      ratio = lhs[i] / rhs[i];
    } else {
      // Zero RHS: report 1 for an entry rescued by its slack.
      if (lhs[i] <= rhs[i]) {
        ratio = 0.0;
      } else {
        ratio = entry_passes(lhs[i], rhs[i], slack[i]) ? 1.0 : std::numeric_limits<double>::infinity();
      }
    }
    worst_ratio = std::max(worst_ratio, ratio);
  }
}

}  // namespace zo
