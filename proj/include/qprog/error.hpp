#ifndef QPROG_ERROR_HPP
#define QPROG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qprog {

/// Raised when a caller violates an operation's precondition (bad field
/// parameters, zero divisor, inadmissible kernel argument, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when two independent evaluation routes disagree or a counted
/// identity fails. Always indicates a bug, never bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qprog

#endif  // QPROG_ERROR_HPP
