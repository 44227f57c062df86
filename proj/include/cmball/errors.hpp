#pragma once

#include <stdexcept>
#include <string>

namespace cmball {

/// Malformed input: unreadable files, bad JSON, wrong shapes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input is well formed but mathematically rejected (wrong signature,
/// non-member matrix, division by zero, unsupported discriminant range).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A floating-point decision could not be made safely, e.g. a trace
/// invariant too close to zero to decide the isometry class.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmball
