#pragma once

#include <stdexcept>
#include <string>

namespace pedrisk {

// Invalid or malformed input: bad CSV rows, violated preconditions,
// inconsistent shapes. Mapped to exit code 3 by the CLI.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: training divergence, eigensolver breakdown,
// non-finite intermediates. Mapped to exit code 4 by the CLI.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pedrisk
