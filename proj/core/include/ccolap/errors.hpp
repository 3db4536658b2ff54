#pragma once

#include <stdexcept>
#include <string>

namespace ccolap {

// Bad caller input: malformed files, out-of-range parameters, size mismatches.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The input was well-formed but numerically unusable (degenerate scales,
// non-finite values, failed factorizations).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccolap
