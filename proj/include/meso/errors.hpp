#pragma once

#include <stdexcept>
#include <string>

namespace meso {

// Base for everything thrown by this library. Each subclass carries a
// category prefix in what() so CLI/log output stays greppable.
class Error : public std::runtime_error {
public:
    Error(const std::string& category, const std::string& msg)
        : std::runtime_error(category + ": " + msg) {}
};

#define MESO_DEFINE_ERROR(NAME)                                   \
    class NAME : public Error {                                   \
    public:                                                       \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {} \
    };

MESO_DEFINE_ERROR(ParseError)        // malformed text input (CSV cell, config, MPS)
MESO_DEFINE_ERROR(DomainError)       // value outside its physical/spec domain
MESO_DEFINE_ERROR(InputLengthError)  // series length does not match the time grid
MESO_DEFINE_ERROR(ConfigError)       // structurally invalid configuration
MESO_DEFINE_ERROR(StateError)        // inconsistent initial unit state
MESO_DEFINE_ERROR(SpecError)         // inconsistent equipment specification
MESO_DEFINE_ERROR(FleetError)        // pump fleet cannot satisfy its duty
MESO_DEFINE_ERROR(BigMError)         // unbounded variable where a finite big-M is required
MESO_DEFINE_ERROR(AssemblyError)     // malformed model assembly request
MESO_DEFINE_ERROR(InfeasiblePointError) // simulation point violates the model inequalities
MESO_DEFINE_ERROR(NonconvexError)    // curve not convex where convexity is required
MESO_DEFINE_ERROR(NumericsError)     // factorization/pivot breakdown in the solver
MESO_DEFINE_ERROR(ExportError)       // cannot serialize model/solution
MESO_DEFINE_ERROR(ValidationError)   // schedule failed independent validation
MESO_DEFINE_ERROR(UsageError)        // bad CLI invocation

#undef MESO_DEFINE_ERROR

} // namespace meso
