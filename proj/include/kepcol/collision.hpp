#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kepcol/errors.hpp"
#include "kepcol/kepler.hpp"

namespace kepcol::collision {

/// Impact direction n = (x1 - x2)/|x1 - x2| and inelasticity parameter
/// epsilon in [0, 0.5]; the restitution coefficient is 1 - 2*epsilon.
template <class Vec>
struct ImpactConfig {
    Vec normal;
    double epsilon = 0.0;
};

template <class Vec>
struct CollisionOutcome {
    Vec v1_out;
    Vec v2_out;
    // specific kinetic energy lost, per unit total mass (>= 0)
    double energy_loss = 0.0;
};

template <class Vec>
void validate(const ImpactConfig<Vec>& cfg) {
    if (std::abs(cfg.normal.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("impact normal must be a unit vector");
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 0.5))
        throw std::invalid_argument("epsilon must be in [0, 0.5]");
}

/// Relative velocity after the collision: the tangential part is unchanged,
/// the normal part is reflected and scaled, w'.n = -(1 - 2*eps) * (w.n).
/// Requires an incoming configuration, w.n < 0.
template <class Vec>
Vec post_collision_relative_velocity(const Vec& w, const ImpactConfig<Vec>& cfg) {
    validate(cfg);
    const double wn = w.dot(cfg.normal);
    if (wn >= 0.0)
        throw NotIncomingError("collision requires w.n < 0");
    return w - cfg.normal * (2.0 * (1.0 - cfg.epsilon) * wn);
}

/// Full collision on the two velocities. Conserves mu1*v1 + mu2*v2 exactly
/// as computed; energy_loss = 2*mu1*mu2*eps*(1-eps)*(w.n)^2 per unit total
/// mass (multiply by M for the kinetic energy difference T - T').
template <class Vec>
CollisionOutcome<Vec> collide(const Vec& v1, const Vec& v2, const MassSplit& masses,
                              const ImpactConfig<Vec>& cfg) {
    const Vec w = v1 - v2;
    const Vec w_out = post_collision_relative_velocity(w, cfg);
    const Vec v_com = v1 * masses.mu1 + v2 * masses.mu2;
    const double wn = w.dot(cfg.normal);
    CollisionOutcome<Vec> out;
    out.v1_out = v_com + w_out * masses.mu2;
    out.v2_out = v_com - w_out * masses.mu1;
    out.energy_loss =
        2.0 * masses.mu1 * masses.mu2 * cfg.epsilon * (1.0 - cfg.epsilon) * wn * wn;
    return out;
}

/// Relative-speed bound below which a single collision at (x1, x2) with
/// center-of-mass velocity v leaves both orbits elliptic, clamped at 0.
/// Ellipticity of body i means |v_i| < sqrt(2/|x_i|), the escape speed.
template <class Vec>
double single_collision_safe_bound(const Vec& x1, const Vec& x2, const Vec& v_com,
                                   const MassSplit& masses) {
    const double s = v_com.norm();
    const double b1 = (std::sqrt(2.0 / x1.norm()) - s) / masses.mu2;
    const double b2 = (std::sqrt(2.0 / x2.norm()) - s) / masses.mu1;
    return std::max(0.0, std::min(b1, b2));
}

}  // namespace kepcol::collision
