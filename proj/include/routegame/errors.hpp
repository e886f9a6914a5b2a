#pragma once

#include <stdexcept>
#include <string>

namespace routegame {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, wrong field types).
struct ParseError : Error {
    using Error::Error;
};

// Structurally well-formed input that violates a model invariant
// (self-loop, unknown node, unreachable O/D pair, bad parameter range).
struct ValidationError : Error {
    using Error::Error;
};

// An argument outside the domain of an operation (negative flow,
// autonomy share outside [0,1]).
struct DomainError : Error {
    using Error::Error;
};

// Capacity asymmetry differs across links where a common value is required.
struct HeterogeneityError : Error {
    using Error::Error;
};

// Simple-path enumeration exceeded the configured per-O/D limit.
struct PathLimitError : Error {
    using Error::Error;
};

// A solver could not produce an answer (unsupported exponent for the
// LP formulation, support enumeration limit, LP failure).
struct SolverError : Error {
    using Error::Error;
};

} // namespace routegame
