// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace breuil {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag, the what() string carries the human diagnostic.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define BREUIL_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}     \
    }

BREUIL_DEFINE_ERROR(InvalidParams);
BREUIL_DEFINE_ERROR(NotInSubfield);
BREUIL_DEFINE_ERROR(AmbientTooSmall);
BREUIL_DEFINE_ERROR(NotInFil);
BREUIL_DEFINE_ERROR(InvalidFil);
BREUIL_DEFINE_ERROR(WeightOutOfRange);
BREUIL_DEFINE_ERROR(SingularG);
BREUIL_DEFINE_ERROR(DimensionMismatch);
BREUIL_DEFINE_ERROR(NotCyclic);
BREUIL_DEFINE_ERROR(NotRootOfUnity);
BREUIL_DEFINE_ERROR(BadSolutionPair);
BREUIL_DEFINE_ERROR(NotAMorphism);
BREUIL_DEFINE_ERROR(LiftInconsistent);
BREUIL_DEFINE_ERROR(InvalidObject);
BREUIL_DEFINE_ERROR(NoConsistentSigns);

#undef BREUIL_DEFINE_ERROR

} // namespace breuil
