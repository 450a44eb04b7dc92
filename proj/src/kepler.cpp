#include "kepcol/kepler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kepcol {

MassSplit::MassSplit(double m1, double m2) : mu1(m1), mu2(m2) {
    if (!(mu1 > 0.0) || !(mu2 > 0.0))
        throw std::invalid_argument("mass fractions must be positive");
    if (std::abs(mu1 + mu2 - 1.0) > 1e-15)
        throw std::invalid_argument("mass fractions must sum to 1");
    if (mu1 > mu2)
        throw MassOrderError("mass fractions must satisfy mu1 <= mu2");
}

const char* to_string(ConicClass c) {
    switch (c) {
        case ConicClass::Elliptic: return "elliptic";
        case ConicClass::Parabolic: return "parabolic";
        case ConicClass::Hyperbolic: return "hyperbolic";
        case ConicClass::Degenerate: return "degenerate";
    }
    return "unknown";
}

OrbitElements::OrbitElements(double E, double L, double omega, double tol)
    : energy(E), ang_mom(L), periapsis_angle(omega) {
    if (1.0 + 2.0 * E * L * L < -tol)
        throw AdmissibilityError("no orbit with 1 + 2*E*L^2 = " +
                                 std::to_string(1.0 + 2.0 * E * L * L));
}

double OrbitElements::eccentricity(double tol) const {
    return kepler::eccentricity(energy, ang_mom, tol);
}

namespace kepler {

double eccentricity(double energy, double ang_mom, double tol) {
    const double h = 1.0 + 2.0 * energy * ang_mom * ang_mom;
    if (h < -tol)
        throw AdmissibilityError("eccentricity undefined, 1 + 2*E*L^2 = " +
                                 std::to_string(h));
    return std::sqrt(std::max(0.0, h));
}

double scaled_el2(double energy, double ang_mom, double grav_param) {
    return energy * ang_mom * ang_mom / (grav_param * grav_param);
}

PlanarState state_at_anomaly(const OrbitElements& orbit, double theta, double tol) {
    const double L = orbit.ang_mom;
    if (std::abs(L) <= tol)
        throw DegenerateOrbitError("state_at_anomaly requires L != 0");
    const double e = orbit.eccentricity(tol);
    const double den = 1.0 + e * std::cos(theta);
    if (den <= tol)
        throw RadiusDivergesError("1 + e*cos(theta) = " + std::to_string(den));
    const double r = L * L / den;
    const double phi = theta + orbit.periapsis_angle;
    const Vec2 u_r{std::cos(phi), std::sin(phi)};
    const Vec2 u_t{-std::sin(phi), std::cos(phi)};
    const double v_rad = e * std::sin(theta) / L;
    const double v_tan = L / r;
    return {u_r * r, u_r * v_rad + u_t * v_tan};
}

OrbitElements elements_from_state(const PlanarState& s, double tol) {
    const double r = s.position.norm();
    if (r <= 0.0)
        throw OriginError("state at the attracting center");
    const double E = 0.5 * s.velocity.norm2() - 1.0 / r;
    const double L = s.position.cross(s.velocity);
    // eccentricity vector (v ^ L) - x/|x| with k = 1
    const Vec2 e_vec{L * s.velocity.y - s.position.x / r,
                     -L * s.velocity.x - s.position.y / r};
    const double e = e_vec.norm();
    const double omega = (e < tol) ? 0.0 : std::atan2(e_vec.y, e_vec.x);
    OrbitElements out;
    out.energy = E;
    out.ang_mom = L;
    out.periapsis_angle = omega;
    return out;
}

double true_anomaly_of(const PlanarState& s, const OrbitElements& orbit) {
    const double phi = std::atan2(s.position.y, s.position.x);
    return wrap_2pi(phi - orbit.periapsis_angle);
}

ConicClass classify(const OrbitElements& orbit, double tol) {
    if (std::abs(orbit.ang_mom) <= tol) return ConicClass::Degenerate;
    if (orbit.energy < -tol) return ConicClass::Elliptic;
    if (orbit.energy > tol) return ConicClass::Hyperbolic;
    return ConicClass::Parabolic;
}

}  // namespace kepler
}  // namespace kepcol
