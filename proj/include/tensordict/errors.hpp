#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace tensordict {

// Incompatible extents between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the *values* of an input does not hold
// (non-unit vector, non-orthonormal mixing matrix, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Input is structurally valid but numerically degenerate (zero column,
// zero tensor, rank collapse).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateBlockError : public DegenerateError {
 public:
  DegenerateBlockError(int block, const std::string& what)
      : DegenerateError(what), block_(block) {}
  int block() const { return block_; }

 private:
  int block_;
};

class InsufficientSamplesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics go through a process-wide sink (stderr by default).
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace tensordict
