#pragma once

#include <stdexcept>
#include <string>

namespace isolab {

// Base class for every error thrown by this library.  Catching
// isolab::Error at a CLI or binding boundary is always sufficient.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ISOLAB_DEFINE_ERROR(Name)                                    \
    struct Name : Error {                                            \
        explicit Name(const std::string& what) : Error(what) {}      \
    }

// graph construction
ISOLAB_DEFINE_ERROR(DisconnectedGraph);
ISOLAB_DEFINE_ERROR(NegativeWeight);
ISOLAB_DEFINE_ERROR(AsymmetricInput);

// walk engine
ISOLAB_DEFINE_ERROR(InvalidState);
ISOLAB_DEFINE_ERROR(NonTerminating);
ISOLAB_DEFINE_ERROR(DivergentFunctional);
ISOLAB_DEFINE_ERROR(NonMonotoneV);

// spin and superspin models
ISOLAB_DEFINE_ERROR(DomainViolation);
ISOLAB_DEFINE_ERROR(CostGateExceeded);
ISOLAB_DEFINE_ERROR(NonNormalizable);
ISOLAB_DEFINE_ERROR(SingularMatrix);
ISOLAB_DEFINE_ERROR(GeometryUnsupported);

// Grassmann kernel
ISOLAB_DEFINE_ERROR(DimensionMismatch);
ISOLAB_DEFINE_ERROR(OddInput);
ISOLAB_DEFINE_ERROR(DerivativeUnavailable);
ISOLAB_DEFINE_ERROR(SingularDBlock);

// configuration / CLI
ISOLAB_DEFINE_ERROR(ConfigError);

#undef ISOLAB_DEFINE_ERROR

}  // namespace isolab
