#pragma once

#include <stdexcept>
#include <string>

namespace vrestore {

// Base of every library error. CLI exit codes are derived from the subclass.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidFormat : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  enum class Code { MissingManifest, InconsistentFrames, CorruptFrame, EmptyClip, WriteFailed, NotFound };

  IoError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Data-level failures: malformed ratings, degenerate raters, calibration gaps.
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateRater : public DataError {
 public:
  DegenerateRater(std::string subject, const std::string& what)
      : DataError(what), subject_(std::move(subject)) {}
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

class CalibrationCoverageError : public DataError {
 public:
  using DataError::DataError;
};

// Raised by external adapters on timeout, transport failure or malformed replies.
class ServiceUnavailable : public Error {
 public:
  using Error::Error;
};

class NothingToPlan : public Error {
 public:
  using Error::Error;
};

class RouteExhausted : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vrestore
