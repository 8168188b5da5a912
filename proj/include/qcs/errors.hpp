#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

/// Base class for all analyzer errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input document (bad JSON, missing required fields).
class SyntaxError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid system spec (shape mismatch, non-finite entry, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel could not certify its result (solver stalled,
/// eigensolve did not converge).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Enumeration exceeded its configured point/product budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Operation refuses dimensions beyond its hard cap instead of approximating.
class DimensionCap : public Error {
 public:
  using Error::Error;
};

/// Requested norm is outside the operation's contract.
class NormUnsupported : public Error {
 public:
  using Error::Error;
};

/// Precondition not met: the requested certificate cannot be asserted.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Certified quasi-controllability lower bound is zero; the reciprocal
/// bound would be vacuous.
class DegenerateMeasure : public Error {
 public:
  using Error::Error;
};

}  // namespace qcs
