#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcc {

// Caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed instance data (index out of range, duplicate inside an edge,
// wrong row count). Distinct from a validation failure, which is reported.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A seeded generator could not meet its target within the retry budget.
class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, std::size_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

// An internally checked identity failed (XOR-soundness, shift identity,
// lifted cover predicate). Always a bug, never an input problem.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lcc
