#include "zo/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <utility>

#include "zo/errors.hpp"

namespace zo {
namespace {

void require_dim(int d) {
  if (d < 1) throw DimensionError("problem dimension must be >= 1, got " + std::to_string(d));
}

Vector unit_diagonal_start(int d) { return Vector::Constant(d, 1.0 / std::sqrt(double(d))); }

}  // namespace

Problem::Problem(std::string id, int dim, ValueFn value, GradientFn gradient,
                 ProblemConstants constants, ClassTags tags, Vector x_init)
    : id_(std::move(id)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      constants_(std::move(constants)),
      tags_(tags),
      x_init_(std::move(x_init)) {
  require_dim(dim_);
  if (x_init_.size() != dim_) throw DimensionError("x_init has wrong dimension");
}

double Problem::value(const Vector& x) const {
  if (counter_) counter_->fetch_add(1, std::memory_order_relaxed);
  return value_(x);
}

StochasticSample Problem::draw(RandomStream& stream) const {
  if (!draw_) throw CapabilityError("problem '" + id_ + "' has no stochastic oracle");
  return draw_(stream);
}

double Problem::value(const Vector& x, const StochasticSample& xi) const {
  if (!sample_value_) throw CapabilityError("problem '" + id_ + "' has no stochastic oracle");
  if (counter_) counter_->fetch_add(1, std::memory_order_relaxed);
  return sample_value_(x, xi);
}

Vector Problem::gradient(const Vector& x, const StochasticSample& xi) const {
  if (!sample_gradient_) {
    throw CapabilityError("problem '" + id_ + "' has no per-sample gradient oracle");
  }
  return sample_gradient_(x, xi);
}

Problem Problem::with_stochastic(DrawFn draw, SampleValueFn value, SampleGradientFn gradient) const {
  Problem p = *this;
  p.draw_ = std::move(draw);
  p.sample_value_ = std::move(value);
  p.sample_gradient_ = std::move(gradient);
  return p;
}

Problem Problem::with_constants(ProblemConstants constants) const {
  Problem p = *this;
  p.constants_ = std::move(constants);
  return p;
}

Problem Problem::with_tags(ClassTags tags) const {
  Problem p = *this;
  p.tags_ = tags;
  return p;
}

Problem Problem::with_x_init(Vector x) const {
  if (x.size() != dim_) throw DimensionError("x_init has wrong dimension");
  Problem p = *this;
  p.x_init_ = std::move(x);
  return p;
}

Problem Problem::with_exact_smoothed(SmoothedValueFn fn) const {
  Problem p = *this;
  p.smoothed_ = std::move(fn);
  return p;
}

Problem Problem::with_query_counter(Counter counter) const {
  Problem p = *this;
  p.counter_ = std::move(counter);
  return p;
}

// ---------------------------------------------------------------------------

Problem make_constant_problem(int d, double c) {
  require_dim(d);
  ProblemConstants k;
  // Any nonnegative bound is valid; 1 keeps the step-size formulas finite.
  k.L0 = 1.0;
  k.L = 1.0;
  k.mu = 0.0;
  k.x_star = Vector::Zero(d);
  k.f_star = c;
  ClassTags tags{.convex = true, .lipschitz = true, .smooth = true};
  return Problem(
             "constant", d, [c](const Vector&) { return c; },
             [d](const Vector&) { return Vector(Vector::Zero(d)); }, k, tags, unit_diagonal_start(d))
      .with_exact_smoothed([c](const Vector&, double) { return c; });
}

Problem make_affine_problem(const Vector& c, double b) {
  const int d = static_cast<int>(c.size());
  require_dim(d);
  ProblemConstants k;
  k.L0 = c.norm();
  k.L = 0.0;
  k.mu = 0.0;
  ClassTags tags{.convex = true, .lipschitz = true, .smooth = true};
  auto value = [c, b](const Vector& x) { return c.dot(x) + b; };
  return Problem("affine", d, value, [c](const Vector&) { return c; }, k, tags, Vector::Zero(d))
      .with_exact_smoothed([value](const Vector& x, double) { return value(x); });
}

Problem make_norm_problem(int d, double mu, double box_radius) {
  require_dim(d);
  if (mu < 0) throw ParameterError("mu must be >= 0");
  ProblemConstants k;
  k.L0 = 1.0 + mu * box_radius;
  k.mu = mu;
  k.x_star = Vector::Zero(d);
  k.f_star = 0.0;
  k.box_radius = mu > 0 ? box_radius : std::numeric_limits<double>::infinity();
  ClassTags tags{.convex = true, .strongly_convex = mu > 0, .lipschitz = true};
  auto value = [mu](const Vector& x) { return x.norm() + 0.5 * mu * x.squaredNorm(); };
  auto grad = [mu](const Vector& x) -> Vector {
    const double n = x.norm();
    if (n == 0.0) return Vector::Zero(x.size());
    return x / n + mu * x;
  };
  return Problem("norm", d, value, grad, k, tags, unit_diagonal_start(d));
}

Problem make_quadratic_problem(const Vector& diagonal, double box_radius) {
  const int d = static_cast<int>(diagonal.size());
  require_dim(d);
  if ((diagonal.array() < 0).any()) throw ParameterError("quadratic spectrum must be >= 0");
  const double mu = diagonal.minCoeff();
  const double L = diagonal.maxCoeff();
  ProblemConstants k;
  k.L = L;
  k.mu = mu;
  k.L0 = L * box_radius;
  k.x_star = Vector::Zero(d);
  k.f_star = 0.0;
  k.box_radius = box_radius;
  ClassTags tags{.convex = true, .strongly_convex = mu > 0, .lipschitz = true, .smooth = true};
  auto value = [diagonal](const Vector& x) { return 0.5 * x.dot(diagonal.cwiseProduct(x)); };
  auto grad = [diagonal](const Vector& x) -> Vector { return diagonal.cwiseProduct(x); };
  // E[u u^T] = I/(d+2) for u uniform in the unit ball.
  const double shift_per_alpha2 = diagonal.sum() / (2.0 * (d + 2));
  return Problem("quadratic", d, value, grad, k, tags, unit_diagonal_start(d))
      .with_exact_smoothed([value, shift_per_alpha2](const Vector& x, double alpha) {
        return value(x) + alpha * alpha * shift_per_alpha2;
      });
}

Problem make_quadratic_problem(int d, double mu, double L, double box_radius) {
  require_dim(d);
  if (mu < 0) throw ParameterError("mu must be >= 0");
  if (mu > L) throw ParameterError("quadratic requires mu <= L");
  Vector diag(d);
  if (d == 1) {
    diag[0] = L;
  } else {
    for (int i = 0; i < d; ++i) diag[i] = mu + (L - mu) * i / (d - 1);
  }
  return make_quadratic_problem(diag, box_radius);
}

Problem make_logsumexp_problem(int d, double temperature) {
  require_dim(d);
  if (!(temperature > 0)) throw ParameterError("temperature must be > 0");
  const double t = temperature;
  const double log2d = std::log(2.0 * d);
  auto value = [t, log2d](const Vector& x) {
    const double top = x.cwiseAbs().maxCoeff() / t;
    const double s = ((x.array() / t - top).exp() + (-x.array() / t - top).exp()).sum();
    return t * (top + std::log(s) - log2d);
  };
  auto grad = [t](const Vector& x) -> Vector {
    const double top = x.cwiseAbs().maxCoeff() / t;
    const Eigen::ArrayXd ep = (x.array() / t - top).exp();
    const Eigen::ArrayXd em = (-x.array() / t - top).exp();
    return ((ep - em) / (ep + em).sum()).matrix();
  };
  ProblemConstants k;
  k.L0 = 1.0;
  k.L = 1.0 / t;
  k.mu = 0.0;
  k.x_star = Vector::Zero(d);
  k.f_star = 0.0;
  ClassTags tags{.convex = true, .lipschitz = true, .smooth = true};
  return Problem("logsumexp", d, value, grad, k, tags, unit_diagonal_start(d));
}

Problem make_nonconvex_problem(int d, double box_radius) {
  require_dim(d);
  Vector center(d);
  for (int i = 0; i < d; ++i) center[i] = (i % 2 == 0) ? 0.5 : -0.5;
  auto value = [center](const Vector& x) {
    const Eigen::ArrayXd s = (x - center).array();
    return (0.5 * s.square() + (1.0 - (2.0 * s).cos())).sum();
  };
  auto grad = [center](const Vector& x) -> Vector {
    const Eigen::ArrayXd s = (x - center).array();
    return (s + 2.0 * (2.0 * s).sin()).matrix();
  };
  ProblemConstants k;
  k.L = 5.0;
  // |s + 2 sin 2s| <= 5|s| coordinatewise.
  k.L0 = 5.0 * box_radius;
  k.x_star = center;
  k.f_star = 0.0;
  k.box_radius = box_radius;
  ClassTags tags{.lipschitz = true, .smooth = true, .nonconvex = true};
  return Problem("nonconvex", d, value, grad, k, tags, center + unit_diagonal_start(d));
}

// ---------------------------------------------------------------------------

namespace {

struct LsqMoments {
  double value_var;
  double grad_var;
};

LsqMoments lsq_moments(const LeastSquaresData& data, const Vector& x) {
  const Vector r = data.A * x - data.b;
  const Eigen::ArrayXd fi = r.array().square();
  const double f = fi.mean();
  const double value_var = (fi - f).square().mean();
  const Vector g = 2.0 / data.m() * data.A.transpose() * r;
  double grad_var = 0;
  for (int i = 0; i < data.m(); ++i) {
    grad_var += (2.0 * r[i] * data.A.row(i).transpose() - g).squaredNorm();
  }
  return {value_var, grad_var / data.m()};
}

}  // namespace

Problem make_least_squares_problem(const LeastSquaresData& data, double box_radius) {
  const int d = data.d();
  const int m = data.m();
  require_dim(d);
  if (m < 1) throw DimensionError("least squares needs m >= 1 rows");
  auto A = std::make_shared<const Eigen::MatrixXd>(data.A);
  auto b = std::make_shared<const Vector>(data.b);

  auto value = [A, b](const Vector& x) { return (*A * x - *b).squaredNorm() / A->rows(); };
  auto grad = [A, b](const Vector& x) -> Vector {
    return 2.0 / A->rows() * A->transpose() * (*A * x - *b);
  };

  const Eigen::MatrixXd H = 2.0 / m * data.A.transpose() * data.A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const double L = eig.eigenvalues().maxCoeff();
  const double mu = std::max(0.0, eig.eigenvalues().minCoeff());
  const Vector x_star = data.A.completeOrthogonalDecomposition().solve(data.b);

  ProblemConstants k;
  k.L = L;
  k.mu = mu;
  k.L0 = L * box_radius;
  k.x_star = x_star;
  k.f_star = value(x_star);
  k.box_radius = box_radius;

  // Noise levels certified on a fixed probe set: the centre and the box
  // boundary along every eigenvector of H.
  double s0 = 0, s1 = 0;
  auto probe = [&](const Vector& x) {
    const LsqMoments mm = lsq_moments(data, x);
    s0 = std::max(s0, mm.value_var);
    s1 = std::max(s1, mm.grad_var);
  };
  probe(x_star);
  for (int j = 0; j < d; ++j) {
    const Vector v = eig.eigenvectors().col(j);
    probe(x_star + box_radius * v);
    probe(x_star - box_radius * v);
  }
  k.sigma0 = std::sqrt(s0);
  k.sigma1 = std::sqrt(s1);

  ClassTags tags{.convex = true, .strongly_convex = mu > 0, .lipschitz = true, .smooth = true};
  const Vector x_init = x_star + 0.5 * box_radius * unit_diagonal_start(d);
  Problem p("lsq", d, value, grad, k, tags, x_init);

  auto draw = [m](RandomStream& s) {
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(m) - 1);
    return StochasticSample{pick(s), 0.0};
  };
  auto sample_value = [A, b](const Vector& x, const StochasticSample& xi) {
    const auto i = static_cast<Eigen::Index>(xi.index);
    const double r = A->row(i).dot(x) - (*b)[i];
    return r * r;
  };
  auto sample_grad = [A, b](const Vector& x, const StochasticSample& xi) -> Vector {
    const auto i = static_cast<Eigen::Index>(xi.index);
    const double r = A->row(i).dot(x) - (*b)[i];
    return 2.0 * r * A->row(i).transpose();
  };
  return p.with_stochastic(draw, sample_value, sample_grad);
}

LeastSquaresData redraw_responses(const LeastSquaresData& data, RandomStream& stream) {
  LeastSquaresData out = data;
  std::normal_distribution<double> normal;
  const Vector mean = data.A * data.x_true;
  for (int i = 0; i < data.m(); ++i) out.b[i] = mean[i] + normal(stream);
  return out;
}

LeastSquares make_least_squares(int d, int m, RowMode mode, std::uint64_t seed,
                                double box_radius) {
  require_dim(d);
  if (m < 1) throw DimensionError("least squares needs m >= 1 rows");
  RandomStream design(seed, 0);
  LeastSquaresData data;
  data.mode = mode;
  data.A.resize(m, d);
  for (int i = 0; i < m; ++i) {
    const Vector row = mode == RowMode::rademacher_rows ? sample_rademacher(design, d).vector
                                                        : sample_gaussian(design, d).vector;
    data.A.row(i) = row.transpose();
  }
  data.x_true = sample_gaussian(design, d).vector / std::sqrt(double(d));
  data.b = Vector::Zero(m);
  RandomStream noise(seed, 1);
  data = redraw_responses(data, noise);
  return {make_least_squares_problem(data, box_radius), data};
}

Problem add_value_noise(const Problem& problem, double sigma0) {
  if (sigma0 < 0) throw ParameterError("sigma0 must be >= 0");
  const Problem base = problem;
  auto draw = [base](RandomStream& s) {
    StochasticSample xi = base.stochastic() ? base.draw(s) : StochasticSample{};
    std::normal_distribution<double> normal;
    xi.noise = normal(s);
    return xi;
  };
  auto value = [base, sigma0](const Vector& x, const StochasticSample& xi) {
    const double f = base.stochastic() ? base.value(x, xi) : base.value(x);
    return f + sigma0 * xi.noise;
  };
  Problem::SampleGradientFn grad;
  if (base.has_sample_gradient()) {
    grad = [base](const Vector& x, const StochasticSample& xi) { return base.gradient(x, xi); };
  } else {
    grad = [base](const Vector& x, const StochasticSample&) { return base.gradient(x); };
  }
  ProblemConstants k = base.constants();
  const double s0 = base.stochastic() ? k.sigma0.value_or(0.0) : 0.0;
  k.sigma0 = std::sqrt(s0 * s0 + sigma0 * sigma0);
  if (!base.stochastic()) k.sigma1 = 0.0;
  return base.with_stochastic(draw, value, grad).with_constants(k);
}

SigmaEstimate estimate_sigma(const Problem& problem, int n_points, int n_draws,
                             RandomStream stream) {
  if (!problem.stochastic()) {
    throw CapabilityError("estimate_sigma: problem '" + problem.id() + "' has no stochastic oracle");
  }
  if (n_points < 1 || n_draws < 1) throw ParameterError("estimate_sigma needs n_points, n_draws >= 1");
  const auto& k = problem.constants();
  const int d = problem.dim();
  const bool boxed = k.x_star && std::isfinite(k.box_radius);
  const Vector center = boxed ? *k.x_star : problem.x_init();
  const double radius = boxed ? k.box_radius : 1.0;

  SigmaEstimate out;
  out.has_gradient_estimate = problem.has_sample_gradient();
  RandomStream probe_stream = stream.substream(0);
  for (int p = 0; p < n_points; ++p) {
    const Vector x = p == 0 ? center : Vector(center + radius * sample_ball(probe_stream, d).vector);
    const double f = problem.value(x);
    const Vector g = problem.gradient(x);
    RandomStream draws = stream.substream(static_cast<std::uint64_t>(p) + 1);
    double v0 = 0, v1 = 0;
    for (int i = 0; i < n_draws; ++i) {
      const StochasticSample xi = problem.draw(draws);
      const double e = problem.value(x, xi) - f;
      v0 += e * e;
      if (out.has_gradient_estimate) v1 += (problem.gradient(x, xi) - g).squaredNorm();
    }
    out.sigma0_hat = std::max(out.sigma0_hat, std::sqrt(v0 / n_draws));
    out.sigma1_hat = std::max(out.sigma1_hat, std::sqrt(v1 / n_draws));
  }
  return out;
}

RowMode parse_row_mode(const std::string& s) {
  if (s == "rademacher_rows" || s == "rademacher") return RowMode::rademacher_rows;
  if (s == "gaussian_rows" || s == "gaussian") return RowMode::gaussian_rows;
  throw ConfigError("unknown row mode '" + s + "'");
}

Problem make_problem(const std::string& id, const ProblemParams& p) {
  Problem out = [&]() -> Problem {
    if (id == "norm") {
      return make_norm_problem(p.dim, p.mu.value_or(0.0), p.box_radius.value_or(kDefaultBoxRadius));
    }
    if (id == "quadratic") {
      return make_quadratic_problem(p.dim, p.mu.value_or(1.0), p.L,
                                    p.box_radius.value_or(kDefaultBoxRadius));
    }
    if (id == "logsumexp") return make_logsumexp_problem(p.dim, p.temperature);
    if (id == "nonconvex") {
      return make_nonconvex_problem(p.dim, p.box_radius.value_or(kDefaultBoxRadius));
    }
    if (id == "lsq") {
      return make_least_squares(p.dim, p.m, p.rows, p.data_seed, p.box_radius.value_or(1.0)).problem;
    }
    if (id == "constant") return make_constant_problem(p.dim, 1.0);
    throw ConfigError("unknown problem '" + id + "'");
  }();
  if (p.sigma0) out = add_value_noise(out, *p.sigma0);
  return out;
}

}  // namespace zo
