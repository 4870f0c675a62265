#pragma once

#include <stdexcept>
#include <string>

namespace manoma {

/// Raised when a numeric parameter is outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when matrix/vector shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an antenna position leaves its movable region.
class RegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace manoma
