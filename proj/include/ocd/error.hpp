#pragma once

#include <stdexcept>
#include <string>

namespace ocd {

/// Failure categories. The CLI maps these onto process exit codes and the
/// C API maps them onto ocd_status values.
enum class Status {
  ok = 0,
  invalid_argument,  // bad parameter to a library call
  config,            // malformed or inconsistent experiment config
  infeasible,        // bound hypotheses violated in strict mode
  io,                // file system failure
  numeric,           // singular/ill-conditioned matrix, non-convergence
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}

  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
  throw Error(status, message);
}

}  // namespace ocd
