#ifndef GRAVICAV_ERRORS_HPP
#define GRAVICAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gravicav {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fock-space truncation dimension below 2, or otherwise unusable.
struct InvalidDimension : Error {
    using Error::Error;
};

/// Operands live on incompatible spaces.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Requested state or operator places more probability mass above the
/// truncation guard than the tail tolerance allows.
struct TailOverflow : Error {
    using Error::Error;
};

/// Matrix exponential could not be evaluated to tolerance.
struct ExpmFailure : Error {
    using Error::Error;
};

/// Joint Hilbert-space dimension exceeds the configured budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

/// Argument outside the stated domain of an operation.
struct InvalidParameter : Error {
    using Error::Error;
};

/// Scan found no local minimum on the requested interval.
struct NoMinimumFound : Error {
    using Error::Error;
};

/// Configuration document is not syntactically valid.
struct ParseError : Error {
    using Error::Error;
};

/// Configuration document is well-formed but violates a precondition.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace gravicav

#endif
