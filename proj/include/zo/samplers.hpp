#pragma once

#include <Eigen/Core>
#include <string_view>

#include "zo/random.hpp"

namespace zo {

using Vector = Eigen::VectorXd;

enum class Distribution { unit_sphere, unit_ball, standard_gaussian, rademacher };

std::string_view to_string(Distribution d);

struct DirectionSample {
  Vector vector;
  Distribution distribution;
  int dim() const { return static_cast<int>(vector.size()); }
};

/// Uniform on the unit sphere: a normalised Gaussian vector. An exactly-zero
/// Gaussian draw is redrawn.
DirectionSample sample_sphere(RandomStream& stream, int d);

/// Uniform in the closed unit ball: sphere direction times U^(1/d).
DirectionSample sample_ball(RandomStream& stream, int d);

DirectionSample sample_gaussian(RandomStream& stream, int d);

/// i.i.d. +-1 entries.
DirectionSample sample_rademacher(RandomStream& stream, int d);

DirectionSample sample_direction(Distribution dist, RandomStream& stream, int d);

}  // namespace zo
