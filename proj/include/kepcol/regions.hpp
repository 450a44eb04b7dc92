#pragma once

#include <utility>

#include "kepcol/geometry.hpp"

namespace kepcol {

/// Conserved pair (E < 0, L >= 0) and masses fixing one region picture.
struct RegionParams {
    MassSplit masses;
    double inv_E;
    double inv_L;

    RegionParams(MassSplit m, double E, double L);
    double el2() const { return inv_E * inv_L * inv_L; }
};

/// Critical threshold data for a mass split, in L = 1 units:
/// sigma = critical E*L^2, e_crit = eccentricity of orbit 2 at the
/// tangency, L1_crit/L2_crit = angular momenta of the critical pair.
struct CriticalValues {
    double sigma = 0.0;
    double e_crit = 0.0;
    double L1_crit = 0.0;
    double L2_crit = 0.0;
};

namespace regions {

/// Both orbits exist: 1 + 2*E1*L1^2 >= 0 and 1 + 2*E2*L2^2 >= 0.
bool admissible(const PairState& p);

/// Membership in I_eta: e1*e2*cos(eta) <= 1 + L2^2*E1 + L1^2*E2.
/// eta = pi gives the dynamics-invariant set I_pi.
bool in_I_eta(const PairState& p, double eta);

/// PairState at (dL, dE) under the given region parameters.
PairState pair_at(const RegionParams& rp, double dL, double dE,
                  double dOmega = 3.1415926535897932384626433832795);

/// The two dE roots of the I_pi boundary at fixed dL (quadratic branch).
/// Returned ascending; both have the sign of L1^2 - L2^2.
std::pair<double, double> i_pi_boundary(double dL, const RegionParams& rp);

/// |dL| bound of I_pi: sqrt((1 + 2*E*L^2) / (2*|E|*mu1*mu2)).
double delta_L_bound(const RegionParams& rp);

/// Critical threshold sigma(mu1, mu2) with the critical eccentricity and
/// the critical angular momenta (tangency of I_pi with the line E1 = 0).
CriticalValues sigma(const MassSplit& masses);

/// Equal-mass finite-size threshold: the critical E*L^2 for summed body
/// size D, with gamma = 2*L^2/D > 1.
double critical_EL2_equal_mass(double gamma);

/// Largest D (in units of L^2) such that the invariant set
/// I_pi U {dbar <= D} avoids both critical lines E1 = 0 and E2 = 0,
/// found by minimizing dbar along each line. Returns 0 when the region
/// already touches a line (e.g. E*L^2 >= sigma).
double critical_D_numeric(const MassSplit& masses, double el2);

/// Exact numeric maximum of E1 (resp. E2) over I_pi, by maximizing the
/// boundary dE (resp. minimizing it) over dL. Throws VoidRegionError when
/// I_pi is void.
double max_E1_over_Ipi(const RegionParams& rp);
double max_E2_over_Ipi(const RegionParams& rp);

/// Bounded-orbit check for a short-range interaction of depth U >= 0 and
/// range D: true iff (E + U/M)*L^2 < sigma and D fits under the critical
/// size at the shifted energy.
bool potential_margin(const RegionParams& rp, double U, double total_mass, double D);

}  // namespace regions
}  // namespace kepcol
