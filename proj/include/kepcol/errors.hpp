#pragma once

#include <stdexcept>
#include <string>

namespace kepcol {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// orbit does not exist: 1 + 2*E*L^2 < 0 beyond tolerance
struct AdmissibilityError : Error { using Error::Error; };
// zero angular momentum, radial orbit has no anomaly parametrization
struct DegenerateOrbitError : Error { using Error::Error; };
// 1 + e*cos(theta) <= 0, point at infinite radius
struct RadiusDivergesError : Error { using Error::Error; };
// state at the attracting center
struct OriginError : Error { using Error::Error; };
// relative velocity not incoming, w.n >= 0
struct NotIncomingError : Error { using Error::Error; };
// gap function needs a bounded inner orbit
struct ApoapsisUndefinedError : Error { using Error::Error; };
// derivative formula singular at circular orbits
struct CircularSingularityError : Error { using Error::Error; };
// identical orbits, every anomaly is an intersection
struct DegenerateCoincidentError : Error { using Error::Error; };
// boundary discriminant negative, no boundary points at this dL
struct NoBoundaryError : Error { using Error::Error; };
// |L1| == |L2|, boundary expression degenerates
struct DegenerateError : Error { using Error::Error; };
// 1 + 2*E*L^2 < 0, intersection region is void
struct VoidRegionError : Error { using Error::Error; };
// mass fractions must satisfy mu1 <= mu2
struct MassOrderError : Error { using Error::Error; };
// equal-mass closed form needs gamma > 1
struct GammaRangeError : Error { using Error::Error; };
// no valid collision configuration: absorbing state of the event map
struct NoCollisionPossibleError : Error { using Error::Error; };
// 3D reduction requires |x ^ v| > 0
struct DegenerateAngularMomentumError : Error { using Error::Error; };
// file I/O failure, message carries the path
struct IoError : Error { using Error::Error; };

}  // namespace kepcol
