#include "kepcol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace kepcol {

PairState::PairState(double dl, double de, double domega, double E, double L,
                     MassSplit m)
    : dL(dl), dE(de), dOmega(domega), inv_E(E), inv_L(L), masses(m) {
    if (inv_L < 0.0)
        throw std::invalid_argument("conserved angular momentum L must be >= 0");
}

PairState PairState::from_elements(const OrbitElements& o1, const OrbitElements& o2,
                                   const MassSplit& m) {
    const double E = m.mu1 * o1.energy + m.mu2 * o2.energy;
    const double L = m.mu1 * o1.ang_mom + m.mu2 * o2.ang_mom;
    return PairState(o1.ang_mom - o2.ang_mom, o1.energy - o2.energy,
                     wrap_pi(o1.periapsis_angle - o2.periapsis_angle), E, L, m);
}

double PairState::e1(double tol) const { return kepler::eccentricity(E1(), L1(), tol); }
double PairState::e2(double tol) const { return kepler::eccentricity(E2(), L2(), tol); }

OrbitElements PairState::orbit1(double tol) const {
    return OrbitElements(E1(), L1(), dOmega, tol);
}
OrbitElements PairState::orbit2(double tol) const {
    return OrbitElements(E2(), L2(), 0.0, tol);
}

namespace geometry {
namespace {

// admissibility with the classification slack used by every predicate here
bool admissible_slack(const PairState& p, double tol = kTolClass) {
    const double h1 = 1.0 + 2.0 * p.E1() * p.L1() * p.L1();
    const double h2 = 1.0 + 2.0 * p.E2() * p.L2() * p.L2();
    return h1 >= -tol && h2 >= -tol;
}

void require_admissible(const PairState& p) {
    if (!admissible_slack(p))
        throw AdmissibilityError("pair state outside the admissible region A");
}

}  // namespace

TrigRoots solve_cos_sin(double a, double b, double c, double scale) {
    TrigRoots out;
    const double r2 = a * a + b * b;
    const double eps = 1e-12 * scale;
    if (r2 <= eps * eps) {
        if (std::abs(c) <= eps) {
            out.degenerate_all = true;
            return out;
        }
        return out;  // no solution
    }
    const double disc = r2 - c * c;
    const double tol_tangent = 1e-9 * r2;
    if (disc < -tol_tangent) return out;
    const double psi = std::atan2(b, a);
    if (disc <= tol_tangent) {
        out.count = 1;
        out.tangent = true;
        out.roots[0] = wrap_2pi(c >= 0.0 ? psi : psi + 3.1415926535897932384626433832795);
        return out;
    }
    const double delta = std::acos(std::clamp(c / std::sqrt(r2), -1.0, 1.0));
    double t0 = wrap_2pi(psi - delta);
    double t1 = wrap_2pi(psi + delta);
    if (t1 < t0) std::swap(t0, t1);
    out.count = 2;
    out.roots[0] = t0;
    out.roots[1] = t1;
    return out;
}

bool intersects(const PairState& p) {
    require_admissible(p);
    const double lhs = p.e1() * p.e2() * std::cos(p.dOmega);
    const double rhs =
        1.0 + p.L2() * p.L2() * p.E1() + p.L1() * p.L1() * p.E2();
    return lhs <= rhs;
}

std::vector<IntersectionSolution> intersection_anomalies(const PairState& p) {
    require_admissible(p);
    const double L1s = p.L1() * p.L1();
    const double L2s = p.L2() * p.L2();
    const double e1 = p.e1();
    const double e2 = p.e2();
    // L1^2 (1 + e2 cos(th1 + dOmega)) = L2^2 (1 + e1 cos th1)
    // reduces to a*cos(th1) + b*sin(th1) = c:
    const double a = L1s * e2 * std::cos(p.dOmega) - L2s * e1;
    const double b = -L1s * e2 * std::sin(p.dOmega);
    const double c = L2s - L1s;
    const double scale = L1s * (1.0 + e2) + L2s * (1.0 + e1);

    const TrigRoots roots = solve_cos_sin(a, b, c, scale);
    if (roots.degenerate_all)
        throw DegenerateCoincidentError(
            "coincident orbits: every anomaly is an intersection");
    std::vector<IntersectionSolution> out;
    for (int k = 0; k < roots.count; ++k) {
        IntersectionSolution s;
        s.theta1 = roots.roots[k];
        s.theta2 = wrap_2pi(s.theta1 + p.dOmega);
        s.tangent = roots.tangent;
        out.push_back(s);
    }
    return out;
}

DbarResult dbar(const PairState& p) {
    require_admissible(p);
    const double L1s = p.L1() * p.L1();
    const double L2s = p.L2() * p.L2();
    const double e1 = p.e1();
    const double e2 = p.e2();

    bool have12 = e2 < 1.0;  // orbit 2 inner: needs its apoapsis
    bool have21 = e1 < 1.0;  // orbit 1 inner
    const double d12 = have12 ? L1s / (1.0 + e1) - L2s / (1.0 - e2) : 0.0;
    const double d21 = have21 ? L2s / (1.0 + e2) - L1s / (1.0 - e1) : 0.0;
    if (!have12 && !have21)
        throw ApoapsisUndefinedError("gap undefined: neither orbit is bounded");
    DbarResult out;
    if (!have21 || (have12 && d12 >= d21)) {
        out.value = d12;
        out.inner_orbit = 2;
    } else {
        out.value = d21;
        out.inner_orbit = 1;
    }
    return out;
}

double dbar_partial_dL(const PairState& p, double tol) {
    require_admissible(p);
    const double e1 = p.e1();
    const double e2 = p.e2();
    if (e1 <= tol || e2 <= tol)
        throw CircularSingularityError("dbar derivative singular at e = 0");
    return p.masses.mu2 * p.L1() / e1 - p.masses.mu1 * p.L2() / e2;
}

}  // namespace geometry
}  // namespace kepcol
