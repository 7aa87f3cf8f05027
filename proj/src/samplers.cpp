#include "zo/samplers.hpp"

#include <cmath>
#include <random>
#include <string>

#include "zo/errors.hpp"

namespace zo {
namespace {

void require_dim(int d) {
  if (d < 1) throw DimensionError("direction dimension must be >= 1, got " + std::to_string(d));
}

Vector gaussian_vector(RandomStream& stream, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = normal(stream);
  return v;
}

}  // namespace

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::unit_sphere: return "sphere";
    case Distribution::unit_ball: return "ball";
    case Distribution::standard_gaussian: return "gaussian";
    case Distribution::rademacher: return "rademacher";
  }
  return "unknown";
}

DirectionSample sample_sphere(RandomStream& stream, int d) {
  require_dim(d);
  Vector v = gaussian_vector(stream, d);
  double norm = v.norm();
  while (norm == 0.0) {
    v = gaussian_vector(stream, d);
    norm = v.norm();
  }
  return {v / norm, Distribution::unit_sphere};
}

DirectionSample sample_ball(RandomStream& stream, int d) {
  DirectionSample s = sample_sphere(stream, d);
  const double radius = std::pow(stream.uniform(), 1.0 / d);
  s.vector *= radius;
  s.distribution = Distribution::unit_ball;
  return s;
}

DirectionSample sample_gaussian(RandomStream& stream, int d) {
  require_dim(d);
  return {gaussian_vector(stream, d), Distribution::standard_gaussian};
}

DirectionSample sample_rademacher(RandomStream& stream, int d) {
  require_dim(d);
  Vector v(d);
  std::uint64_t bits = 0;
  for (int i = 0; i < d; ++i) {
    if (i % 64 == 0) bits = stream();
    v[i] = (bits >> (i % 64)) & 1U ? 1.0 : -1.0;
  }
  return {v, Distribution::rademacher};
}

DirectionSample sample_direction(Distribution dist, RandomStream& stream, int d) {
  switch (dist) {
    case Distribution::unit_sphere: return sample_sphere(stream, d);
    case Distribution::unit_ball: return sample_ball(stream, d);
    case Distribution::standard_gaussian: return sample_gaussian(stream, d);
    case Distribution::rademacher: return sample_rademacher(stream, d);
  }
  throw ParameterError("unknown distribution");
}

}  // namespace zo
