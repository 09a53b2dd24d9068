#pragma once

#include <stdexcept>

namespace svar {

// Invalid population/design/simulation specs, bad config documents,
// estimator/design mismatches.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files, malformed input rows.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A design that cannot be realized on a population, or an enumeration
// that would exceed its cap.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace svar
