#pragma once

#include <stdexcept>
#include <string>

namespace lambdaknob {

/// Bad input: malformed config, out-of-range parameter, inconsistent grid.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Well-formed input on which the computation degenerates (non-unique steady
/// state, resonant singular system, unstable transfer function, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lambdaknob
