#pragma once

#include "kepcol/errors.hpp"
#include "kepcol/vec.hpp"

namespace kepcol {

// default tolerance for conic classification and degeneracy tests
inline constexpr double kTolClass = 1e-12;

/// Mass fractions (mu1, mu2) of the two bodies, mu1 + mu2 = 1, 0 < mu1 <= mu2.
struct MassSplit {
    double mu1;
    double mu2;

    MassSplit(double m1, double m2);
    static MassSplit from_mu1(double m1) { return MassSplit(m1, 1.0 - m1); }
};

enum class ConicClass { Elliptic, Parabolic, Hyperbolic, Degenerate };

const char* to_string(ConicClass c);

/// One planar orbit around the fixed center, gravitational parameter k = 1.
/// energy: specific energy E = v^2/2 - 1/r
/// ang_mom: signed specific angular momentum L = x ^ v (positive = counterclockwise)
/// periapsis_angle: angle omega of the periapsis from the x axis
struct OrbitElements {
    double energy = 0.0;
    double ang_mom = 0.0;
    double periapsis_angle = 0.0;

    OrbitElements() = default;
    OrbitElements(double E, double L, double omega, double tol = kTolClass);

    double eccentricity(double tol = kTolClass) const;
};

struct PlanarState {
    Vec2 position;
    Vec2 velocity;
};

namespace kepler {

/// e = sqrt(1 + 2*E*L^2), clamped at 0; throws AdmissibilityError
/// if 1 + 2*E*L^2 < -tol.
double eccentricity(double energy, double ang_mom, double tol = kTolClass);

/// The dimensionless invariant E*L^2/k^2 of an orbit specified with an
/// arbitrary gravitational parameter k. Everything else in this library
/// works in k = 1 units.
double scaled_el2(double energy, double ang_mom, double grav_param);

/// Position and velocity at true anomaly theta:
///   |x| = L^2 / (1 + e*cos(theta)), polar angle theta + omega,
///   radial speed e*sin(theta)/L, transverse speed L/|x|.
PlanarState state_at_anomaly(const OrbitElements& orbit, double theta,
                             double tol = kTolClass);

/// Elements from a state: E = |v|^2/2 - 1/|x|, L = x ^ v, omega from the
/// eccentricity vector (set to 0 for near-circular orbits, e < tol).
OrbitElements elements_from_state(const PlanarState& s, double tol = kTolClass);

/// True anomaly of a state on the given orbit (polar angle minus omega).
double true_anomaly_of(const PlanarState& s, const OrbitElements& orbit);

ConicClass classify(const OrbitElements& orbit, double tol = kTolClass);

}  // namespace kepler
}  // namespace kepcol
