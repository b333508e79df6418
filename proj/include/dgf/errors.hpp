#ifndef DGF_ERRORS_HPP
#define DGF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input arrays do not match the expected grid size.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numeric argument is outside its admissible range (t < 0, eps <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: unknown catalog name, spin mismatch,
/// non-closing geodesic request, malformed run config.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A structural invariant was violated: point off the manifold,
/// spinor not tangent, mismatched bases.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Closest-point projection was requested inside its singular set.
class ProjectionSingularityError : public Error {
public:
    using Error::Error;
};

/// A chart-based oracle was evaluated outside the chart sub-domain.
class ChartDomainError : public Error {
public:
    using Error::Error;
};

/// Requested dense problem exceeds the supported size.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Explicit integrator asked to run outside its stability region.
class StepSizeError : public Error {
public:
    using Error::Error;
};

/// sigma_2 admits no nonzero harmonic spinor.
class NoHarmonicSpinorError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace dgf

#endif
