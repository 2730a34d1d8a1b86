#pragma once

#include <stdexcept>
#include <string>

namespace zolab {

/// Process exit codes used by the command line front-end. Library errors
/// carry one of these so harnesses can map failures without string matching.
enum class ExitCode : int {
  Ok = 0,
  BadInput = 2,
  CapExceeded = 3,
  Witness = 4,
  Precision = 5,
  KronNotFound = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Element count of an enumeration (or a derived pair count) exceeds the cap.
class WindowTooLarge : public Error {
 public:
  explicit WindowTooLarge(const std::string& what) : Error(ExitCode::CapExceeded, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

class NotIncreasing : public Error {
 public:
  explicit NotIncreasing(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

class DepthTooLarge : public Error {
 public:
  explicit DepthTooLarge(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

class UnsupportedRule : public Error {
 public:
  explicit UnsupportedRule(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

// An exact-only operation was asked of a spec whose elements are rounded.
class InexactSpec : public Error {
 public:
  explicit InexactSpec(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

class InvalidChain : public Error {
 public:
  explicit InvalidChain(const std::string& what) : Error(ExitCode::Witness, what) {}
};

class PrecisionOverflow : public Error {
 public:
  explicit PrecisionOverflow(const std::string& what) : Error(ExitCode::Precision, what) {}
};

class NotFoundWithinBound : public Error {
 public:
  explicit NotFoundWithinBound(const std::string& what) : Error(ExitCode::KronNotFound, what) {}
};

class SpacingError : public Error {
 public:
  explicit SpacingError(const std::string& what) : Error(ExitCode::BadInput, what) {}
};

}  // namespace zolab
