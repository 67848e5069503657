#pragma once

#include <stdexcept>
#include <string>

namespace pdcsim {

// Invalid parameters, malformed specs, files or configs. CLI exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failures of the numerics themselves (non-convergence, degenerate data).
// CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pdcsim
