#pragma once

#include <stdexcept>
#include <string>

namespace zo {

/// Invalid dimension (d = 0) or mismatched vector sizes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Out-of-range scalar parameter (alpha <= 0, mu > L, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Missing problem constant or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation needs an oracle the problem does not provide.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A lemma's step-size precondition is not met by the schedule.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zo
