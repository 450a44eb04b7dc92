#pragma once

#include "kepcol/kepler.hpp"
#include "kepcol/regions.hpp"

namespace kepcol {

struct SpatialState {
    Vec3 position;
    Vec3 velocity;
};

/// Coplanar pair obtained by rigidly rotating the two osculating orbits
/// into a common plane with the periapsides in opposition
/// (omega1 - omega2 = pi). Energies, eccentricities and |L_i| are
/// preserved; the planar angular momenta are the positive moduli.
struct ReducedPair {
    OrbitElements orbit1;
    OrbitElements orbit2;
    double tilde_L = 0.0;    // mu1*|L1| + mu2*|L2|
    double tilde_E = 0.0;    // mu1*E1 + mu2*E2
    double vec_L_norm = 0.0; // |mu1*L1 + mu2*L2| <= tilde_L
};

namespace spatial {

ReducedPair reduce_to_planar(const SpatialState& s1, const SpatialState& s2,
                             const MassSplit& masses);

/// 3D bounded-orbit check: with Etilde = E + U/M and Ltilde the modulus
/// mix, true iff Etilde*Ltilde^2 < sigma(masses) and D fits under the
/// critical size at that value.
bool invariant_check_3d(const SpatialState& s1, const SpatialState& s2,
                        const MassSplit& masses, double U, double total_mass,
                        double D);

}  // namespace spatial
}  // namespace kepcol
