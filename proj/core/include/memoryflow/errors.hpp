#pragma once

#include <stdexcept>
#include <string>

namespace memoryflow {

// Invalid parameters or malformed input files. The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver or quadrature failed to reach its accuracy contract. Exit code 3.
struct numerics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace memoryflow
