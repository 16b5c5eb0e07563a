#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace depthlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Configuration or input validation failed; `items()` lists every problem found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

/// Enumeration refused because its cost estimate exceeds the configured ceiling.
class WorkCeilingExceeded : public Error {
 public:
  WorkCeilingExceeded(double estimated_cost, double ceiling);
  double estimated_cost() const { return estimated_cost_; }
  double ceiling() const { return ceiling_; }

 private:
  double estimated_cost_;
  double ceiling_;
};

/// A word has no producing program within the table's bounds.
class ComplexityUnknown : public Error {
 public:
  using Error::Error;
};

/// A depth query had an empty witness set.
class UndefinedDepth : public Error {
 public:
  using Error::Error;
};

/// A point does not carry enough fixed-point bits for the requested iteration.
class PrecisionError : public Error {
 public:
  PrecisionError(std::uint64_t required_bits, std::uint64_t available_bits);
  std::uint64_t required_bits() const { return required_; }

 private:
  std::uint64_t required_;
};

class UnsupportedSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace depthlab
