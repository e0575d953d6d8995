#pragma once

#include <stdexcept>
#include <string>

namespace banditlb {

// Invalid parameter values (out-of-range alpha, bad spec fields, ...).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inconsistent shapes: trajectory/loss-matrix length mismatch, incomplete
// target families, mismatched vector lengths.
struct StructuralError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Resource ceilings: plans above the configured round budget, enumeration
// sizes the exact oracle cannot handle.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace banditlb
