#pragma once

#include <optional>
#include <vector>

#include "kepcol/kepler.hpp"

namespace kepcol {

/// Reduced coordinates of an orbit pair: the differences
///   dL = L1 - L2, dE = E1 - E2, dOmega = omega1 - omega2
/// together with the conserved pair E = mu1*E1 + mu2*E2 and
/// L = mu1*L1 + mu2*L2 (L >= 0).
struct PairState {
    double dL = 0.0;
    double dE = 0.0;
    double dOmega = 0.0;
    double inv_E = 0.0;
    double inv_L = 0.0;
    MassSplit masses;

    PairState(double dl, double de, double domega, double E, double L, MassSplit m);
    static PairState from_elements(const OrbitElements& o1, const OrbitElements& o2,
                                   const MassSplit& m);

    double L1() const { return inv_L + masses.mu2 * dL; }
    double L2() const { return inv_L - masses.mu1 * dL; }
    double E1() const { return inv_E + masses.mu2 * dE; }
    double E2() const { return inv_E - masses.mu1 * dE; }
    double e1(double tol = kTolClass) const;
    double e2(double tol = kTolClass) const;

    // concrete orbits in the frame with omega2 = 0, omega1 = dOmega
    OrbitElements orbit1(double tol = kTolClass) const;
    OrbitElements orbit2(double tol = kTolClass) const;
};

/// One common point of the two orbits: true anomalies with
/// theta2 - theta1 = dOmega (mod 2*pi). `tangent` marks a double root.
struct IntersectionSolution {
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool tangent = false;
};

namespace geometry {

/// Roots of a*cos(t) + b*sin(t) = c in [0, 2*pi), ascending. Used by the
/// intersection solver and exposed for tests. `degenerate_all` is set when
/// a, b, c all vanish against `scale` and every t solves the equation.
struct TrigRoots {
    double roots[2] = {0.0, 0.0};
    int count = 0;
    bool tangent = false;
    bool degenerate_all = false;
};
TrigRoots solve_cos_sin(double a, double b, double c, double scale);

/// Intersection predicate, evaluated directly from the elements:
///   e1*e2*cos(dOmega) <= 1 + L2^2*E1 + L1^2*E2.
bool intersects(const PairState& p);

/// Closed-form intersection anomalies (0, 1 tangent, or 2 solutions).
/// Throws DegenerateCoincidentError for coincident orbits.
std::vector<IntersectionSolution> intersection_anomalies(const PairState& p);

/// Signed gap at opposition between the outer orbit's periapsis and the
/// inner orbit's apoapsis. `inner_orbit` reports which index was treated
/// as inner (its apoapsis is the subtrahend); the assignment is the one
/// that makes the gap largest, which is the nested one when the orbits
/// do not overlap radially.
struct DbarResult {
    double value = 0.0;
    int inner_orbit = 2;
};
DbarResult dbar(const PairState& p);

/// d(dbar)/d(dL) = mu2*L1/e1 - mu1*L2/e2; identical for both index
/// assignments, so no selection is needed. Singular at circular orbits.
double dbar_partial_dL(const PairState& p, double tol = kTolClass);

}  // namespace geometry
}  // namespace kepcol
