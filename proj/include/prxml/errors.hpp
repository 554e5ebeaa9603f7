#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "prxml/model.hpp"

namespace prxml {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Byte range plus 1-based line/column of where a parse problem starts.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int col = 1;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& msg, SourceSpan s);
  SourceSpan span;
};

struct ValidationError : Error {
  explicit ValidationError(std::vector<Violation> vs);
  std::vector<Violation> violations;
};

// Operation applied to a document outside the class it supports.
struct UnsupportedClassError : Error {
  using Error::Error;
};

// A stated precondition other than class membership does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

struct InvalidDocumentError : Error {
  explicit InvalidDocumentError(std::vector<Violation> vs);
  std::vector<Violation> violations;
};

struct TooManyConfigurationsError : Error {
  TooManyConfigurationsError(unsigned long long count, unsigned long long cap);
  unsigned long long count;  // saturates at 2^64-1
  unsigned long long cap;
};

struct TooManyMatchesError : Error {
  explicit TooManyMatchesError(unsigned long long cap);
  unsigned long long cap;
};

struct IncompleteConfigurationError : Error {
  using Error::Error;
};

// Outcome list that is not a probability distribution (empty, a probability
// outside (0,1], or a sum other than 1).
struct InvalidDistributionError : Error {
  using Error::Error;
};

}  // namespace prxml
