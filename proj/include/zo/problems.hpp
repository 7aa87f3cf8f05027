#pragma once

#include <Eigen/Core>
#include <atomic>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "zo/random.hpp"
#include "zo/samplers.hpp"

namespace zo {

/// Regularity classes a problem is certified for.
struct ClassTags {
  bool convex = false;
  bool strongly_convex = false;
  bool lipschitz = false;
  bool smooth = false;
  bool nonconvex = false;
};

/// Known constants of a benchmark objective. Unset entries are unknown; the
/// schedules that need them refuse to run without them.
///
/// L0 (and, for the least-squares instance, the noise levels) are certified
/// only on the experiment box ||x - x_star|| <= box_radius.
struct ProblemConstants {
  std::optional<double> L0;
  std::optional<double> L;
  std::optional<double> mu;
  std::optional<Vector> x_star;
  std::optional<double> f_star;
  std::optional<double> sigma0;
  std::optional<double> sigma1;
  double box_radius = std::numeric_limits<double>::infinity();
};

/// Realisation of the stochastic oracle's randomness: a data index, an
/// additive noise variate, or both.
struct StochasticSample {
  std::size_t index = 0;
  double noise = 0.0;
};

/// Black-box objective with an optional stochastic oracle.
///
/// `gradient` is a diagnostic oracle; the optimizers never call it. Problems
/// are immutable; value/gradient calls are safe from several threads.
class Problem {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using DrawFn = std::function<StochasticSample(RandomStream&)>;
  using SampleValueFn = std::function<double(const Vector&, const StochasticSample&)>;
  using SampleGradientFn = std::function<Vector(const Vector&, const StochasticSample&)>;
  /// Exact f_alpha(x) when the smoothed value has a closed form.
  using SmoothedValueFn = std::function<double(const Vector&, double alpha)>;
  using Counter = std::shared_ptr<std::atomic<long long>>;

  Problem(std::string id, int dim, ValueFn value, GradientFn gradient, ProblemConstants constants,
          ClassTags tags, Vector x_init);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  const ProblemConstants& constants() const { return constants_; }
  const ClassTags& tags() const { return tags_; }
  /// Default starting point x_1.
  const Vector& x_init() const { return x_init_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const { return gradient_(x); }

  bool stochastic() const { return static_cast<bool>(draw_); }
  bool has_sample_gradient() const { return static_cast<bool>(sample_gradient_); }
  StochasticSample draw(RandomStream& stream) const;
  double value(const Vector& x, const StochasticSample& xi) const;
  Vector gradient(const Vector& x, const StochasticSample& xi) const;

  const SmoothedValueFn& exact_smoothed() const { return smoothed_; }

  Problem with_stochastic(DrawFn draw, SampleValueFn value, SampleGradientFn gradient) const;
  Problem with_constants(ProblemConstants constants) const;
  Problem with_tags(ClassTags tags) const;
  Problem with_x_init(Vector x) const;
  Problem with_exact_smoothed(SmoothedValueFn fn) const;
  /// Copy whose value oracles (deterministic and stochastic) increment
  /// `counter` once per call.
  Problem with_query_counter(Counter counter) const;

 private:
  std::string id_;
  int dim_;
  ValueFn value_;
  GradientFn gradient_;
  ProblemConstants constants_;
  ClassTags tags_;
  Vector x_init_;
  DrawFn draw_;
  SampleValueFn sample_value_;
  SampleGradientFn sample_gradient_;
  SmoothedValueFn smoothed_;
  Counter counter_;
};

/// Default experiment-box radius for instances whose constants need one.
inline constexpr double kDefaultBoxRadius = 2.0;

/// f(x) = c.
Problem make_constant_problem(int d, double c = 1.0);

/// f(x) = c^T x + b.
Problem make_affine_problem(const Vector& c, double b = 0.0);

/// f(x) = ||x|| + (mu/2)||x||^2; convex, nonsmooth at 0, L0 = 1 + mu * R.
Problem make_norm_problem(int d, double mu = 0.0, double box_radius = kDefaultBoxRadius);

/// f(x) = x^T D x / 2 with D = diag(linspace(mu, L)); L0 = L * R.
Problem make_quadratic_problem(int d, double mu, double L, double box_radius = kDefaultBoxRadius);
Problem make_quadratic_problem(const Vector& diagonal, double box_radius = kDefaultBoxRadius);

/// f(x) = t log( sum_i (e^{x_i/t} + e^{-x_i/t}) / 2d ); convex, L0 = 1, L = 1/t,
/// minimum 0 at the origin.
Problem make_logsumexp_problem(int d, double temperature);

/// f(x) = sum_i h(x_i - c_i), h(s) = s^2/2 + (1 - cos 2s). Nonconvex with a
/// unique global minimum f = 0 at c; L = 5, L0 = 5R on the box.
Problem make_nonconvex_problem(int d, double box_radius = kDefaultBoxRadius);

enum class RowMode { rademacher_rows, gaussian_rows };

struct LeastSquaresData {
  Eigen::MatrixXd A;  ///< m x d, rows a_i
  Vector b;           ///< b_i ~ N(a_i^T x_true, 1)
  Vector x_true;      ///< generating parameter
  RowMode mode = RowMode::rademacher_rows;
  int m() const { return static_cast<int>(A.rows()); }
  int d() const { return static_cast<int>(A.cols()); }
};

struct LeastSquares {
  Problem problem;
  LeastSquaresData data;
};

/// Random design + responses. The stochastic oracle is f(x, i) = (a_i^T x - b_i)^2
/// with i uniform; f is the average. x_star is the least-squares solution.
LeastSquares make_least_squares(int d, int m, RowMode mode, std::uint64_t seed,
                                double box_radius = 1.0);
/// Problem over existing data (used after redrawing b).
Problem make_least_squares_problem(const LeastSquaresData& data, double box_radius = 1.0);
/// Fresh b_i ~ N(a_i^T x_true, 1).
LeastSquaresData redraw_responses(const LeastSquaresData& data, RandomStream& stream);

/// Adds sigma0 * z (z standard normal) to every stochastic evaluation.
Problem add_value_noise(const Problem& problem, double sigma0);

struct SigmaEstimate {
  double sigma0_hat = 0.0;
  double sigma1_hat = 0.0;
  bool has_gradient_estimate = false;
};

/// Empirical sup over probe points of sqrt(E(f(x,xi) - f(x))^2) and
/// sqrt(E||grad f(x,xi) - grad f(x)||^2). Probes are drawn in the experiment
/// box (or around x_init when no box is declared).
SigmaEstimate estimate_sigma(const Problem& problem, int n_points, int n_draws,
                             RandomStream stream);

/// Parameters for building a problem by string id.
struct ProblemParams {
  int dim = 8;
  std::optional<double> mu;  ///< quadratic default 1, norm default 0
  double L = 4.0;
  double temperature = 0.5;
  int m = 200;
  RowMode rows = RowMode::rademacher_rows;
  std::uint64_t data_seed = 12345;
  std::optional<double> sigma0;
  std::optional<double> box_radius;
};

/// "norm", "quadratic", "logsumexp", "nonconvex", "lsq", "constant".
Problem make_problem(const std::string& id, const ProblemParams& params);

RowMode parse_row_mode(const std::string& s);

}  // namespace zo
