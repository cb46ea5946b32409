#pragma once

#include <stdexcept>
#include <string>

namespace xorgames {

// Error taxonomy mirrored by the CLI exit codes:
//   SchemaError -> 2, ContractError / SolverError -> 3, CapacityError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input files.
struct SchemaError : Error {
    using Error::Error;
};

// A numeric precondition or invariant was violated.
struct ContractError : Error {
    using Error::Error;
};

// Requested dimensions exceed the configured dense-matrix cap.
struct CapacityError : Error {
    using Error::Error;
};

// An iterative routine failed to converge.
struct SolverError : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractError(what);
}

inline void require_capacity(bool cond, const std::string& what) {
    if (!cond) throw CapacityError(what);
}

}  // namespace xorgames
