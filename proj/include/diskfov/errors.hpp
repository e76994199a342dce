#pragma once

#include <stdexcept>
#include <string>

namespace diskfov {

// Bad input: wrong shape, out-of-range parameter, malformed file.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure could not deliver its postcondition
// (non-convergence, nonsimple eigenvalue where one is required, singular data).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace diskfov
