#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "kepcol/orbit_dynamics.hpp"
#include "kepcol/regions.hpp"
#include "kepcol/scan_io.hpp"

namespace kepcol::testutil {

constexpr double kPi = 3.1415926535897932384626433832795;

inline double uniform(std::mt19937_64& g, double a, double b) {
    return a + (b - a) * dynamics::uniform01(g);
}

/// Independent intersection oracle: the two orbits share a point iff the
/// radial difference along a common ray changes sign or dips below the
/// distance threshold somewhere on a uniform anomaly grid.
inline bool grid_intersects(const PairState& p, int n = 10000,
                            double* min_gap_out = nullptr) {
    const double e1 = p.e1(), e2 = p.e2();
    const double L1s = p.L1() * p.L1(), L2s = p.L2() * p.L2();
    auto gap = [&](double th1) {
        return L1s / (1.0 + e1 * std::cos(th1)) -
               L2s / (1.0 + e2 * std::cos(th1 + p.dOmega));
    };
    const double thresh = 1e-6 * p.inv_L * p.inv_L;
    bool crossed = false;
    double prev = gap(0.0);
    double min_abs = std::abs(prev);
    for (int k = 1; k <= n; ++k) {
        const double cur = gap(2.0 * kPi * k / n);
        if ((prev < 0.0) != (cur < 0.0)) crossed = true;
        min_abs = std::min(min_abs, std::abs(cur));
        prev = cur;
    }
    if (min_gap_out) *min_gap_out = min_abs;
    return crossed || min_abs < thresh;
}

/// Distance between the trig-reduction discriminant and the tangency, used
/// to skip pairs inside the ambiguous boundary band.
inline double tangency_margin(const PairState& p) {
    const double L1s = p.L1() * p.L1(), L2s = p.L2() * p.L2();
    const double a = L1s * p.e2() * std::cos(p.dOmega) - L2s * p.e1();
    const double b = -L1s * p.e2() * std::sin(p.dOmega);
    const double c = L2s - L1s;
    const double scale = L1s + L2s;
    return std::abs(a * a + b * b - c * c) / (scale * scale);
}

/// Random admissible pair with moderate eccentricities and momenta, the
/// sampling domain used by the property tests.
inline std::optional<PairState> sample_pair(std::mt19937_64& g,
                                            double e_cap = 0.95) {
    const MassSplit m = MassSplit::from_mu1(uniform(g, 0.05, 0.5));
    const double E = uniform(g, -0.7, -0.2);
    const RegionParams rp(m, E, 1.0);
    const GridWindow w = scan::default_window(rp);
    const PairState p =
        regions::pair_at(rp, uniform(g, w.dl_min, w.dl_max),
                         uniform(g, w.de_min, w.de_max), uniform(g, 0.0, 2.0 * kPi));
    if (!regions::admissible(p)) return std::nullopt;
    if (std::abs(p.L1()) < 0.2 || std::abs(p.L2()) < 0.2) return std::nullopt;
    if (p.e1() > e_cap || p.e2() > e_cap) return std::nullopt;
    if (p.e1() < 1e-3 || p.e2() < 1e-3) return std::nullopt;
    return p;
}

/// Central-difference step for the gap derivative: the third derivative
/// grows like e^-5 near circular orbits, so the step shrinks with e to
/// keep truncation and roundoff both far below 1e-6 relative.
inline double dbar_fd_step(const PairState& p) {
    const double e = std::min(p.e1(), p.e2());
    return 1e-5 * std::pow(e, 5.0 / 3.0) * std::max(p.inv_L, 1e-6);
}

/// Random elliptic elements with e in [0, e_max].
inline OrbitElements sample_elliptic(std::mt19937_64& g, double e_max = 0.95) {
    const double L = uniform(g, 0.3, 2.0);
    const double e = uniform(g, 0.0, e_max);
    const double E = (e * e - 1.0) / (2.0 * L * L);
    return OrbitElements(E, uniform(g, 0.0, 1.0) < 0.15 ? -L : L,
                         uniform(g, 0.0, 2.0 * kPi));
}

}  // namespace kepcol::testutil
