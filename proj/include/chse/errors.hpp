#pragma once

#include <stdexcept>
#include <string>

namespace chse {

// Base of every error the library raises. The category string is stable and
// machine-readable; the CLI maps it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class PolicyMismatch : public Error {
 public:
  explicit PolicyMismatch(const std::string& what) : Error("policy_mismatch", what) {}
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(const std::string& what) : Error("not_hermitian", what) {}
};

// Rotation coding could not decide on which side of an interval endpoint a
// point lies, even after raising precision.
class AmbiguousBoundary : public Error {
 public:
  explicit AmbiguousBoundary(const std::string& what) : Error("ambiguous_boundary", what) {}
};

// Unitarity drift is no longer negligible against the reported trace distance.
class LedgerViolation : public Error {
 public:
  LedgerViolation(const std::string& what, int step)
      : Error("ledger_violation", what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error("resource_limit", what) {}
};

// A mathematical inequality that must hold failed; this is a bug, not physics.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal", what) {}
};

}  // namespace chse
