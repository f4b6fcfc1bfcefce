#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tembp {

/// Rejected input: violated preconditions, malformed files or configs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical stage could not produce a trustworthy result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PNS shift (or a per-knot TEM shift) for which the bandpass kernel has a
/// vanishing denominator.
class DegenerateShift : public NumericalFailure {
 public:
  DegenerateShift(const std::string& what, std::size_t index)
      : NumericalFailure(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Two spike trains are not strictly alternating A, B, A, B, ...
class InterleavingViolation : public InvalidInput {
 public:
  InterleavingViolation(const std::string& what, std::size_t index)
      : InvalidInput(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace tembp
