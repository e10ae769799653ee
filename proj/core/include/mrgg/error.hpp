#pragma once

#include <stdexcept>

namespace mrgg {

/// Input that violates an operation's contract: malformed files, bad
/// configuration values, out-of-domain arguments. Maps to CLI exit status 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure inside an estimation or statistical pipeline. Maps to CLI exit
/// status 1.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrgg
