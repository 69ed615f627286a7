#pragma once

#include <string>

#include "photon/errors.hpp"

namespace photon {

enum class UnitSystem { natural, si };

/// Physical constants used by field synthesis. Natural units (all one) are
/// the default; SI values are only needed when reading or writing SI data.
struct UnitsConfig {
    UnitSystem mode = UnitSystem::natural;
    double c = 1.0;
    double hbar = 1.0;
    double eps0 = 1.0;

    static UnitsConfig natural() { return {}; }
    static UnitsConfig si() { return {UnitSystem::si, 299792458.0, 1.054571817e-34, 8.8541878128e-12}; }

    void validate() const {
        if (!(c > 0.0) || !(hbar > 0.0) || !(eps0 > 0.0))
            throw DomainError("physical constants must be strictly positive");
    }

    std::string name() const { return mode == UnitSystem::natural ? "natural" : "si"; }
};

}  // namespace photon
