#include "kepcol/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace kepcol {

RegionParams::RegionParams(MassSplit m, double E, double L)
    : masses(m), inv_E(E), inv_L(L) {
    if (!(inv_E < 0.0))
        throw std::invalid_argument("region parameters require E < 0");
    if (!(inv_L >= 0.0))
        throw std::invalid_argument("region parameters require L >= 0");
}

namespace regions {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// golden-section minimization of f on [lo, hi]
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double* arg_out, double xtol) {
    const double gr = 0.61803398874989484820458683436564;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (arg_out) *arg_out = xm;
    return std::min(fm, std::min(f1, f2));
}

// grid restart followed by a golden-section refinement around the best cell
double grid_golden_min(const std::function<double(double)>& f, double lo, double hi,
                       int n_grid, double xtol, double* arg_out) {
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < n_grid; ++i) {
        const double x = lo + (hi - lo) * i / (n_grid - 1);
        const double v = f(x);
        if (v < best) { best = v; best_i = i; }
    }
    const double cell = (hi - lo) / (n_grid - 1);
    const double a = std::max(lo, lo + cell * (best_i - 1));
    const double b = std::min(hi, lo + cell * (best_i + 1));
    double arg = 0.0;
    const double refined = golden_min(f, a, b, &arg, xtol);
    if (arg_out) *arg_out = arg;
    return std::min(best, refined);
}

// minimum of dbar along one critical line (E1 = 0 or E2 = 0), in L = 1 units
double min_dbar_on_line(const MassSplit& m, double el2, int which_line, int n_grid) {
    const double E = el2;  // L = 1
    const RegionParams rp(m, E, 1.0);
    // on E1 = 0: dE = -E/mu2, E2 = E/mu2, orbit 2 must exist: |L2| <= s
    // on E2 = 0: dE = +E/mu1, E1 = E/mu1, orbit 1 must exist: |L1| <= s
    const double mu_line = (which_line == 1) ? m.mu2 : m.mu1;
    const double dE = (which_line == 1) ? -E / m.mu2 : E / m.mu1;
    const double s = std::sqrt(mu_line / (2.0 * std::abs(E)));
    // dL range mapping the other orbit's admissible momentum window
    double dl_lo, dl_hi;
    if (which_line == 1) {
        // L2 = L - mu1*dL in [-s, s]
        dl_lo = (1.0 - s) / m.mu1;
        dl_hi = (1.0 + s) / m.mu1;
    } else {
        // L1 = L + mu2*dL in [-s, s]
        dl_lo = (-1.0 - s) / m.mu2;
        dl_hi = (-1.0 + s) / m.mu2;
    }
    // stay a hair inside so eccentricities stay defined under roundoff
    const double inset = 1e-12 * (dl_hi - dl_lo);
    dl_lo += inset;
    dl_hi -= inset;
    auto f = [&](double dl) {
        const PairState p = pair_at(rp, dl, dE);
        return geometry::dbar(p).value;
    };
    return grid_golden_min(f, dl_lo, dl_hi, n_grid, 1e-12 * (dl_hi - dl_lo), nullptr);
}

// topmost (or bottommost) dE of the I_pi slice at fixed dL, by coarse scan
// plus bisection on the membership predicate; returns false if the slice
// misses the column entirely
bool column_extreme_dE(const RegionParams& rp, double dl, bool top, double* out) {
    const MassSplit& m = rp.masses;
    const double L1 = rp.inv_L + m.mu2 * dl;
    const double L2 = rp.inv_L - m.mu1 * dl;
    if (std::abs(L1) < 1e-9 || std::abs(L2) < 1e-9) return false;
    // admissible dE interval from 1 + 2*Ei*Li^2 >= 0
    const double lo = (-rp.inv_E - 0.5 / (L1 * L1)) / m.mu2;
    const double hi = (rp.inv_E + 0.5 / (L2 * L2)) / m.mu1;
    if (lo > hi) return false;
    auto member = [&](double de) {
        const PairState p = pair_at(rp, dl, de);
        const double lhs = -p.e1() * p.e2();  // cos(pi) = -1
        const double rhs = 1.0 + p.L2() * p.L2() * p.E1() + p.L1() * p.L1() * p.E2();
        return lhs <= rhs;
    };
    const int n = 256;
    int found = -1;
    for (int i = 0; i <= n; ++i) {
        const double t = top ? 1.0 - static_cast<double>(i) / n
                             : static_cast<double>(i) / n;
        if (member(lo + (hi - lo) * t)) { found = i; break; }
    }
    if (found < 0) return false;
    double t_in = top ? 1.0 - static_cast<double>(found) / n
                      : static_cast<double>(found) / n;
    double de_in = lo + (hi - lo) * t_in;
    if (found == 0) { *out = de_in; return true; }
    double t_out = top ? 1.0 - static_cast<double>(found - 1) / n
                       : static_cast<double>(found - 1) / n;
    double de_out = lo + (hi - lo) * t_out;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (de_in + de_out);
        if (member(mid)) de_in = mid; else de_out = mid;
    }
    *out = de_in;
    return true;
}

double extreme_E_over_Ipi(const RegionParams& rp, bool maximize_E1) {
    const double bound = delta_L_bound(rp);  // throws VoidRegionError when void
    const double lo = -bound * (1.0 - 1e-12);
    const double hi = bound * (1.0 - 1e-12);
    // maximize E1 <=> maximize dE over I_pi; maximize E2 <=> minimize dE
    auto neg_extreme = [&](double dl) {
        double de = 0.0;
        if (!column_extreme_dE(rp, dl, maximize_E1, &de))
            return std::numeric_limits<double>::infinity();
        return maximize_E1 ? -de : de;
    };
    double arg = 0.0;
    const double v = grid_golden_min(neg_extreme, lo, hi, 513, 1e-10 * bound, &arg);
    if (!std::isfinite(v))
        throw VoidRegionError("I_pi has no members in the dL window");
    const double de_ext = maximize_E1 ? -v : v;
    return maximize_E1 ? rp.inv_E + rp.masses.mu2 * de_ext
                       : rp.inv_E - rp.masses.mu1 * de_ext;
}

}  // namespace

bool admissible(const PairState& p) {
    const double h1 = 1.0 + 2.0 * p.E1() * p.L1() * p.L1();
    const double h2 = 1.0 + 2.0 * p.E2() * p.L2() * p.L2();
    return h1 >= 0.0 && h2 >= 0.0;
}

bool in_I_eta(const PairState& p, double eta) {
    PairState q = p;
    q.dOmega = eta;
    return geometry::intersects(q);
}

PairState pair_at(const RegionParams& rp, double dL, double dE, double dOmega) {
    return PairState(dL, dE, dOmega, rp.inv_E, rp.inv_L, rp.masses);
}

std::pair<double, double> i_pi_boundary(double dL, const RegionParams& rp) {
    const MassSplit& m = rp.masses;
    const double E = rp.inv_E;
    const double L1 = rp.inv_L + m.mu2 * dL;
    const double L2 = rp.inv_L - m.mu1 * dL;
    const double L1s = L1 * L1, L2s = L2 * L2;
    const double diff = L1s - L2s;
    if (std::abs(diff) <= 1e-12 * (L1s + L2s))
        throw DegenerateError("boundary expression degenerate at |L1| = |L2|");
    const double P = m.mu1 * L1s + m.mu2 * L2s;
    double disc = 1.0 + 2.0 * E * P;
    if (disc < -1e-12)
        throw NoBoundaryError("discriminant 1 + 2*E*(mu1*L1^2 + mu2*L2^2) < 0");
    disc = std::max(0.0, disc);
    const double root = std::sqrt(disc);
    const double pref = diff / (P * P);
    const double a = pref * (1.0 + E * P - root);
    const double b = pref * (1.0 + E * P + root);
    return {std::min(a, b), std::max(a, b)};
}

double delta_L_bound(const RegionParams& rp) {
    const double h = 1.0 + 2.0 * rp.inv_E * rp.inv_L * rp.inv_L;
    if (h < 0.0)
        throw VoidRegionError("1 + 2*E*L^2 < 0: intersection region void");
    return std::sqrt(h / (2.0 * std::abs(rp.inv_E) * rp.masses.mu1 * rp.masses.mu2));
}

CriticalValues sigma(const MassSplit& masses) {
    const double q = masses.mu1 / masses.mu2;
    const double q2 = q * q;
    const double e = (std::sqrt(q2 * q2 + 8.0 * q2) - q2) / 4.0;
    const double mu1s = masses.mu1 * masses.mu1;
    const double mu2s = masses.mu2 * masses.mu2;
    CriticalValues out;
    out.e_crit = e;
    out.sigma = -(1.0 - e * e) * (mu1s + mu2s * e) * (mu1s + mu2s * e) /
                (2.0 * masses.mu2 * e * e);
    // tangency configuration (e1 = 1, L = 1)
    const double denom = mu1s + mu2s * e;
    out.L1_crit = masses.mu1 / denom;
    out.L2_crit = masses.mu2 * e / denom;
    return out;
}

double critical_EL2_equal_mass(double gamma) {
    if (!(gamma > 1.0))
        throw GammaRangeError("gamma = 2*L^2/D must exceed 1");
    // e = gamma - sqrt(gamma^2 - gamma + 1), rationalized for large gamma
    const double e =
        (gamma - 1.0) / (gamma + std::sqrt(gamma * gamma - gamma + 1.0));
    return -(1.0 - e * e) * (1.0 + e) * (1.0 + e) / (16.0 * e * e);
}

double critical_D_numeric(const MassSplit& masses, double el2) {
    if (!(el2 < 0.0))
        throw std::invalid_argument("critical_D_numeric requires E*L^2 < 0");
    const int n_grid = 64;
    const double d1 = min_dbar_on_line(masses, el2, 1, n_grid);
    const double d2 = min_dbar_on_line(masses, el2, 2, n_grid);
    return std::max(0.0, std::min(d1, d2));
}

double max_E1_over_Ipi(const RegionParams& rp) { return extreme_E_over_Ipi(rp, true); }
double max_E2_over_Ipi(const RegionParams& rp) { return extreme_E_over_Ipi(rp, false); }

bool potential_margin(const RegionParams& rp, double U, double total_mass, double D) {
    if (U < 0.0) throw std::invalid_argument("potential depth U must be >= 0");
    if (D < 0.0) throw std::invalid_argument("interaction range D must be >= 0");
    if (!(total_mass > 0.0)) throw std::invalid_argument("total mass must be > 0");
    const double E_shift = rp.inv_E + U / total_mass;
    if (!(E_shift < 0.0)) return false;
    const double el2 = E_shift * rp.inv_L * rp.inv_L;
    if (!(el2 < sigma(rp.masses).sigma)) return false;
    const double d_crit = critical_D_numeric(rp.masses, el2) * rp.inv_L * rp.inv_L;
    return D <= d_crit;
}

}  // namespace regions
}  // namespace kepcol
