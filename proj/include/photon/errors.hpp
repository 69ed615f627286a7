#pragma once

#include <stdexcept>
#include <string>

namespace photon {

/// Base for every error raised by the library. Contract violations map to
/// one of the subclasses below so callers can branch on the kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidModeError : public Error { public: using Error::Error; };
class TruncationError : public Error { public: using Error::Error; };
class NormalizationError : public Error { public: using Error::Error; };
class DimensionError : public Error { public: using Error::Error; };
class UnitarityError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class GridCoverageError : public Error { public: using Error::Error; };
class StepSizeError : public Error { public: using Error::Error; };
class PassivityError : public Error { public: using Error::Error; };
class PortError : public Error { public: using Error::Error; };

}  // namespace photon
