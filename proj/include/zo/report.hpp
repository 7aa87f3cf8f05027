#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace zo {

/// Outcome of checking an inequality lhs <= rhs at a list of points.
///
/// Monte Carlo entries carry a slack (a multiple of the standard error). The
/// slack may only rescue an entry when it is at most a quarter of a positive
/// RHS; otherwise the entry counts as a failure, so imprecise estimates never
/// produce a pass.
struct BoundCheckReport {
  std::string name;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> slack;
  std::string slack_policy;
  bool passed = true;
  double worst_ratio = 0.0;
  std::int64_t n = 0;  ///< Monte Carlo draws per point (0 for exact checks)
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  void add(double l, double r, double s = 0.0);
  /// Recomputes `passed` and `worst_ratio` from the entries.
  void finalize();
  std::size_t size() const { return lhs.size(); }
};

inline BoundCheckReport make_report(std::string name, std::string slack_policy) {
  BoundCheckReport r;
  r.name = std::move(name);
  r.slack_policy = std::move(slack_policy);
  return r;
}

/// Whether a single entry passes under the slack policy above.
bool entry_passes(double lhs, double rhs, double slack);

/// Maximum slack fraction of a positive RHS that may rescue an entry.
inline constexpr double kMaxSlackFraction = 0.25;

}  // namespace zo
