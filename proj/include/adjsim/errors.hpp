#pragma once

#include <stdexcept>
#include <string>

namespace adjsim {

// Base for every error raised by the library. The CLI maps the subclasses
// onto exit codes: input-type errors exit 2, resource/capability errors exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent caller input (length mismatch, bad CSV, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Table shape does not fit the index or model (e.g. p on a non-square table).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Quantity undefined on the given input (e.g. pair counts with N < 2).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied function broke its contract (e.g. beta evaluating to 0).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The requested method is not available for this combination.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace adjsim
