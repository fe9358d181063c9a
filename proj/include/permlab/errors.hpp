#pragma once

#include <stdexcept>
#include <string>

namespace permlab {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotABijection : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct EmptyIndexSet : Error {
    using Error::Error;
};
struct OrderMismatch : Error {
    using Error::Error;
};
struct OrderTooSmall : Error {
    using Error::Error;
};
struct SubsetTooLarge : Error {
    using Error::Error;
};
struct EmptyPropertyAtOrder : Error {
    using Error::Error;
};
struct OrderTooLargeForBruteForce : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};

/// A search ran out of its node budget.  Distinct from "no result exists":
/// callers must treat this as "unknown", never as a negative answer.
struct BudgetExhausted : Error {
    using Error::Error;
};
struct NodeCapExceeded : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct NoDenseCell : Error {
    using Error::Error;
};
struct PreconditionViolated : Error {
    using Error::Error;
};

/// An internal consistency check failed; indicates a caller precondition or
/// verdict-budget failure upstream, never ignored.
struct InternalContradiction : Error {
    using Error::Error;
};
struct TreeMismatch : Error {
    using Error::Error;
};
struct SampleTooLarge : Error {
    using Error::Error;
};
struct EmptyWitnessCell : Error {
    using Error::Error;
};
struct NonMonotoneZ : Error {
    using Error::Error;
};
struct AttemptCapExceeded : Error {
    using Error::Error;
};

}  // namespace permlab
