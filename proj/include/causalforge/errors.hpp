#pragma once

#include <stdexcept>
#include <string>

namespace causalforge {

// Error taxonomy used across the library. The CLI maps these onto exit
// codes: config errors -> 2, analysis errors -> 3, budget -> 4.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments: unknown vertex/event ids, empty samples, malformed input.
struct InputError : Error {
    using Error::Error;
};

// A match or order refers to state that no longer exists.
struct ConflictError : Error {
    using Error::Error;
};

// Operation undefined for the given configuration (p == q, v >= 1, ...).
struct DomainError : Error {
    using Error::Error;
};

// No transport plan exists (disconnected supports).
struct InfeasibleError : Error {
    using Error::Error;
};

// Input data fails a structural invariant (corrupt trace, cyclic "DAG").
struct ValidationError : Error {
    using Error::Error;
};

// Explicit resource cap hit; results would be silently partial otherwise.
struct BudgetError : Error {
    using Error::Error;
};

} // namespace causalforge
