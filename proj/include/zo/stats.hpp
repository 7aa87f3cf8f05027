#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>

namespace zo {

/// Power-sum accumulator for a scalar sample. Callers shift values (for
/// example by f(x)) before adding when the raw magnitude would swamp the
/// spread.
struct ScalarStats {
  double n = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;

  void add(double y) {
    const double y2 = y * y;
    n += 1;
    s1 += y;
    s2 += y2;
    s3 += y2 * y;
    s4 += y2 * y2;
  }
  void merge(const ScalarStats& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
  }
  double mean() const { return n > 0 ? s1 / n : 0.0; }
  /// Unbiased sample variance.
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (s2 - n * m * m) / (n - 1));
  }
  double std_err() const { return n > 0 ? std::sqrt(variance() / n) : 0.0; }
  /// Plug-in fourth central moment E[(y - E y)^4].
  double central4() const {
    if (n < 1) return 0.0;
    const double m = mean();
    const double e2 = s2 / n, e3 = s3 / n, e4 = s4 / n;
    return std::max(0.0, e4 - 4 * m * e3 + 6 * m * m * e2 - 3 * m * m * m * m);
  }
};

/// Accumulator for vector samples: mean vector, per-coordinate variance and
/// the second moment of the norm.
struct VectorStats {
  double n = 0;
  Eigen::VectorXd sum;
  Eigen::VectorXd sumsq;
  ScalarStats norm_sq;

  explicit VectorStats(Eigen::Index d = 0)
      : sum(Eigen::VectorXd::Zero(d)), sumsq(Eigen::VectorXd::Zero(d)) {}

  void add(const Eigen::VectorXd& v) {
    n += 1;
    sum += v;
    sumsq += v.cwiseAbs2();
    norm_sq.add(v.squaredNorm());
  }
  void merge(const VectorStats& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
    norm_sq.merge(o.norm_sq);
  }
  Eigen::VectorXd mean() const { return n > 0 ? Eigen::VectorXd(sum / n) : sum; }
  Eigen::VectorXd variance() const {
    if (n < 2) return Eigen::VectorXd::Zero(sum.size());
    const Eigen::VectorXd m = mean();
    return ((sumsq - n * m.cwiseAbs2()) / (n - 1)).cwiseMax(0.0);
  }
  /// Per-coordinate standard error of the mean.
  Eigen::VectorXd std_err() const {
    if (n < 1) return Eigen::VectorXd::Zero(sum.size());
    return (variance() / n).cwiseSqrt();
  }
  /// Trace of the sample covariance.
  double cov_trace() const { return variance().sum(); }
};

}  // namespace zo
