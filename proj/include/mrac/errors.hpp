#pragma once

#include <stdexcept>
#include <string>

namespace mrac {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed argument: out-of-range cell, empty action set, bad epsilon, ...
class InputError : public Error {
 public:
  using Error::Error;
};

/// Bayesian update hit a zero-probability evidence term under a degenerate prior.
class DegenerateEvidenceError : public Error {
 public:
  using Error::Error;
};

/// A down-date or ledger operation contradicts the recorded history.
class InconsistentLedgerError : public Error {
 public:
  using Error::Error;
};

/// A realization space is too large to enumerate under the configured cap.
class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

/// A communication payload does not match the receiver's slot bookkeeping.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked outside its documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Run configuration is invalid (unknown key, bad value, missing file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrac
