#pragma once

#include <stdexcept>
#include <string>

namespace mbrep {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid inputs: bad base systems, bad digit sets, malformed configs,
// out-of-contract arguments.  Maps to CLI exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Resource caps: enumeration caps, memory caps, combinatorial-explosion
// guards, search node caps.  Maps to CLI exit code 3.
struct BudgetError : Error {
    using Error::Error;
};

// Greedy accumulated a multiplicity that is not a digit.
struct DigitOverflowError : Error {
    using Error::Error;
};

// Table splice produced a combined digit outside D.
struct CollisionError : Error {
    using Error::Error;
};

// Table lookup for a remainder the table does not cover.
struct MissingTableEntryError : Error {
    using Error::Error;
};

// commsim: bit stream does not parse back to a representation.
struct MalformedStreamError : Error {
    using Error::Error;
};

// diophantine: a result could not be certified at the requested precision.
struct PrecisionError : Error {
    using Error::Error;
};

}  // namespace mbrep
