#pragma once

#include <stdexcept>
#include <string>

namespace rr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Raised when a backend violates the job protocol (bad manifest, malformed
// or incomplete prediction file).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Raised when a backend process fails: nonzero exit, timeout, launch failure.
class BackendError : public Error {
 public:
  BackendError(std::string what, std::string captured_stderr = {})
      : Error(std::move(what)), stderr_(std::move(captured_stderr)) {}
  const std::string& captured_stderr() const noexcept { return stderr_; }

 private:
  std::string stderr_;
};

}  // namespace rr
