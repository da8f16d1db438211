#pragma once

#include <stdexcept>
#include <string>

namespace oalab {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible matrix dimensions.
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A matrix violates the Hermiticity required of an observable.
class NotHermitian : public Error {
  public:
    using Error::Error;
};

/// A matrix violates the idempotency / 0-1 spectrum required of a projector.
class NotAProjector : public Error {
  public:
    using Error::Error;
};

/// An eigenvalue or singular-value iteration did not converge.
class EigenFailure : public Error {
  public:
    using Error::Error;
};

/// A family handed to a joint-diagonalization routine has a non-commuting pair.
class NotCommuting : public Error {
  public:
    using Error::Error;
};

/// An observable does not lie in the commutative subalgebra it was evaluated on.
class NotInSubalgebra : public Error {
  public:
    using Error::Error;
};

/// A device-type id is not present in the registry.
class UnknownDeviceType : public Error {
  public:
    using Error::Error;
};

/// A density matrix violates positivity, Hermiticity, or unit trace.
class NotAState : public Error {
  public:
    using Error::Error;
};

/// An observable required to have spectrum {-1, +1} does not.
class NotDichotomic : public Error {
  public:
    using Error::Error;
};

/// Conditioning on an event of probability zero; the conditional state is undefined.
class ZeroProbability : public Error {
  public:
    using Error::Error;
};

/// Scenario or registry input could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Scenario or registry input parsed but failed semantic validation.
class ValidationError : public Error {
  public:
    using Error::Error;
};

}  // namespace oalab
