#include "kepcol/spatial3d.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace kepcol::spatial {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

struct Osculating {
    double energy;
    Vec3 ang_mom;
};

Osculating osculating(const SpatialState& s) {
    const double r = s.position.norm();
    if (r <= 0.0) throw OriginError("state at the attracting center");
    return {0.5 * s.velocity.norm2() - 1.0 / r, s.position.cross(s.velocity)};
}
}  // namespace

ReducedPair reduce_to_planar(const SpatialState& s1, const SpatialState& s2,
                             const MassSplit& masses) {
    const Osculating a = osculating(s1);
    const Osculating b = osculating(s2);
    const double l1 = a.ang_mom.norm();
    const double l2 = b.ang_mom.norm();
    if (l1 <= 0.0 || l2 <= 0.0)
        throw DegenerateAngularMomentumError("3D reduction requires |x ^ v| > 0");

    ReducedPair out;
    out.orbit1 = OrbitElements(a.energy, l1, kPi);
    out.orbit2 = OrbitElements(b.energy, l2, 0.0);
    out.tilde_L = masses.mu1 * l1 + masses.mu2 * l2;
    out.tilde_E = masses.mu1 * a.energy + masses.mu2 * b.energy;
    out.vec_L_norm = (a.ang_mom * masses.mu1 + b.ang_mom * masses.mu2).norm();
    return out;
}

bool invariant_check_3d(const SpatialState& s1, const SpatialState& s2,
                        const MassSplit& masses, double U, double total_mass,
                        double D) {
    if (U < 0.0) throw std::invalid_argument("potential depth U must be >= 0");
    if (!(total_mass > 0.0)) throw std::invalid_argument("total mass must be > 0");
    const ReducedPair rp = reduce_to_planar(s1, s2, masses);
    const double E = rp.tilde_E;
    if (!(E < 0.0)) return false;
    // |vec L| <= Ltilde, so with E < 0 the modulus mix only tightens
    assert(E * rp.tilde_L * rp.tilde_L <= E * rp.vec_L_norm * rp.vec_L_norm + 1e-12);
    const double E_shift = E + U / total_mass;
    if (!(E_shift < 0.0)) return false;
    const double el2 = E_shift * rp.tilde_L * rp.tilde_L;
    if (!(el2 < regions::sigma(masses).sigma)) return false;
    if (D <= 0.0) return true;
    const double d_crit =
        regions::critical_D_numeric(masses, el2) * rp.tilde_L * rp.tilde_L;
    return D <= d_crit;
}

}  // namespace kepcol::spatial
