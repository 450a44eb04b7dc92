#include <cmath>
#include <random>

#include "doctest.h"
#include "kepcol/regions.hpp"
#include "test_util.hpp"

using namespace kepcol;
using testutil::kPi;

TEST_SUITE("regions") {

TEST_CASE("admissibility") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    CHECK(regions::admissible(PairState(0, 0, kPi, -0.4, 1.0, m)));
    CHECK_FALSE(regions::admissible(PairState(0, 0, kPi, -0.6, 1.0, m)));

    // boundary point with e1 = 0: equality in the first condition
    const double L1 = 1.1, L2 = 0.9;
    const OrbitElements o1(-0.5 / (L1 * L1), L1, 0.0);
    const OrbitElements o2(-0.3, L2, 0.0);
    const PairState p = PairState::from_elements(o1, o2, m);
    CHECK(1.0 + 2.0 * p.E1() * p.L1() * p.L1() == doctest::Approx(0.0));
    CHECK(regions::admissible(p));
}

TEST_CASE("I_eta membership") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    const RegionParams rp(m, -0.445, 1.0);
    std::mt19937_64 g(17);

    SUBCASE("I_{pi/2} is inside I_pi, nesting in eta") {
        int checked = 0;
        while (checked < 500) {
            const auto p = testutil::sample_pair(g);
            if (!p) continue;
            ++checked;
            if (regions::in_I_eta(*p, kPi / 2)) CHECK(regions::in_I_eta(*p, kPi));
            const double eta1 = testutil::uniform(g, 0.0, kPi);
            const double eta2 = testutil::uniform(g, eta1, kPi);
            if (regions::in_I_eta(*p, eta1)) REQUIRE(regions::in_I_eta(*p, eta2));
        }
    }
    SUBCASE("agrees with the geometry predicate") {
        int checked = 0;
        while (checked < 500) {
            const auto p = testutil::sample_pair(g);
            if (!p) continue;
            ++checked;
            const double eta = testutil::uniform(g, 0.0, kPi);
            PairState q = *p;
            q.dOmega = eta;
            REQUIRE(regions::in_I_eta(*p, eta) == geometry::intersects(q));
        }
    }
    SUBCASE("admissibility required") {
        const PairState bad(0, 0, kPi, -0.6, 1.0, m);
        CHECK_THROWS_AS(regions::in_I_eta(bad, kPi), AdmissibilityError);
    }
}

TEST_CASE("I_pi boundary roots") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    const RegionParams rp(m, -0.445, 1.0);
    const double bound = regions::delta_L_bound(rp);

    SUBCASE("degenerate at equal momenta") {
        CHECK_THROWS_AS(regions::i_pi_boundary(0.0, rp), DegenerateError);
    }
    SUBCASE("double root at the dL bound") {
        const auto r = regions::i_pi_boundary(bound, rp);
        CHECK(r.first == doctest::Approx(r.second).epsilon(1e-6));
    }
    SUBCASE("no boundary beyond the bound") {
        CHECK_THROWS_AS(regions::i_pi_boundary(1.2 * bound, rp), NoBoundaryError);
    }
    SUBCASE("roots carry the sign of L1^2 - L2^2 and satisfy the squared condition") {
        for (double frac : {-0.9, -0.5, 0.5, 0.9}) {
            const double dl = frac * bound;
            const auto r = regions::i_pi_boundary(dl, rp);
            const double l1 = rp.inv_L + m.mu2 * dl;
            const double l2 = rp.inv_L - m.mu1 * dl;
            const double sign = (l1 * l1 - l2 * l2) > 0 ? 1.0 : -1.0;
            CHECK(r.first * sign >= 0.0);
            CHECK(r.second * sign >= 0.0);
            for (double de : {r.first, r.second}) {
                const PairState p = regions::pair_at(rp, dl, de);
                const double X = 1.0 + p.L2() * p.L2() * p.E1() +
                                 p.L1() * p.L1() * p.E2();
                const double lhs = p.e1() * p.e1() * p.e2() * p.e2();
                REQUIRE(std::abs(lhs - X * X) < 1e-10);
            }
        }
    }
    SUBCASE("membership flips across roots lying outside I_{pi/2}") {
        for (double frac : {-0.9, -0.6, 0.6, 0.9}) {
            const double dl = frac * bound;
            const auto r = regions::i_pi_boundary(dl, rp);
            const double h = 1e-7;
            for (double de : {r.first, r.second}) {
                const PairState p = regions::pair_at(rp, dl, de);
                const double X = 1.0 + p.L2() * p.L2() * p.E1() +
                                 p.L1() * p.L1() * p.E2();
                if (X > -1e-6) continue;  // root interior to I_{pi/2}
                const bool below = regions::in_I_eta(regions::pair_at(rp, dl, de - h), kPi);
                const bool above = regions::in_I_eta(regions::pair_at(rp, dl, de + h), kPi);
                REQUIRE(below != above);
            }
        }
    }
}

TEST_CASE("dL bound") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    SUBCASE("vanishes at the voidness boundary") {
        CHECK(regions::delta_L_bound(RegionParams(m, -0.5, 1.0)) ==
              doctest::Approx(0.0));
    }
    SUBCASE("void region throws") {
        CHECK_THROWS_AS(regions::delta_L_bound(RegionParams(m, -0.52, 1.0)),
                        VoidRegionError);
    }
    SUBCASE("formula value and sampling cross-check") {
        const RegionParams rp(m, -0.445, 1.0);
        const double bound = regions::delta_L_bound(rp);
        CHECK(bound ==
              doctest::Approx(std::sqrt((1.0 - 0.89) / (2.0 * 0.445 * 0.45 * 0.55))));
        std::mt19937_64 g(5150);
        double max_abs_dl = 0.0;
        const GridWindow w = scan::default_window(rp);
        for (int i = 0; i < 100000; ++i) {
            const double dl = testutil::uniform(g, -1.1 * bound, 1.1 * bound);
            const double de = testutil::uniform(g, w.de_min, w.de_max);
            const PairState p = regions::pair_at(rp, dl, de);
            if (!regions::admissible(p)) continue;
            if (regions::in_I_eta(p, kPi)) max_abs_dl = std::max(max_abs_dl, std::abs(dl));
        }
        CHECK(max_abs_dl <= bound * (1.0 + 1e-12));
        CHECK(max_abs_dl >= 0.95 * bound);
    }
}

TEST_CASE("sigma threshold") {
    SUBCASE("equal masses, exact values") {
        const CriticalValues cv = regions::sigma(MassSplit::from_mu1(0.5));
        CHECK(cv.sigma == -27.0 / 64.0);
        CHECK(cv.e_crit == 0.5);
    }
    SUBCASE("mass order enforced at construction") {
        CHECK_THROWS_AS(MassSplit(0.7, 0.3), MassOrderError);
    }
    SUBCASE("proof quadratic holds for random splits") {
        std::mt19937_64 g(321);
        for (int i = 0; i < 100; ++i) {
            const MassSplit m = MassSplit::from_mu1(testutil::uniform(g, 0.01, 0.5));
            const CriticalValues cv = regions::sigma(m);
            const double res = 2.0 * m.mu2 * m.mu2 * cv.e_crit * cv.e_crit -
                               m.mu1 * m.mu1 * (1.0 - cv.e_crit);
            REQUIRE(std::abs(res) < 1e-12);
            REQUIRE(cv.sigma < 0.0);
            REQUIRE(cv.e_crit > 0.0);
            REQUIRE(cv.e_crit < 1.0);
        }
    }
    SUBCASE("figure bracketing and light-mass limit") {
        const double s45 = regions::sigma(MassSplit::from_mu1(0.45)).sigma;
        CHECK(s45 > -0.445);
        CHECK(s45 < -0.41);
        CHECK(s45 == doctest::Approx(-0.4349180768280742).epsilon(1e-12));
        const double s0 = regions::sigma(MassSplit::from_mu1(1e-4)).sigma;
        CHECK(std::abs(s0 + 0.5) < 1e-3);
    }
    SUBCASE("tangency residuals at the critical values") {
        std::mt19937_64 g(888);
        for (int i = 0; i < 40; ++i) {
            const MassSplit m = MassSplit::from_mu1(testutil::uniform(g, 0.05, 0.5));
            const CriticalValues cv = regions::sigma(m);
            // assemble the critical pair at E*L^2 = sigma, L = 1
            const double E = cv.sigma;
            const double E2 = E / m.mu2;  // E1 = 0
            const double dE = 0.0 - E2;
            const double dL = cv.L1_crit - cv.L2_crit;
            const PairState p(dL, dE, kPi, E, 1.0, m);
            REQUIRE(std::abs(p.E1()) < 1e-10);
            REQUIRE(std::abs(p.e1() - 1.0) < 1e-10);
            REQUIRE(std::abs(p.e2() - cv.e_crit) < 1e-10);
            REQUIRE(std::abs(geometry::dbar(p).value) < 1e-10);
            REQUIRE(std::abs(geometry::dbar_partial_dL(p)) < 1e-10);
        }
    }
}

TEST_CASE("region sandwich at the threshold") {
    for (double mu1 : {0.5, 0.45, 0.3}) {
        const MassSplit m = MassSplit::from_mu1(mu1);
        const double s = regions::sigma(m).sigma;
        const double below = regions::max_E1_over_Ipi(RegionParams(m, s * (1 + 1e-6), 1.0));
        const double above = regions::max_E1_over_Ipi(RegionParams(m, s * (1 - 1e-6), 1.0));
        CHECK(below < 0.0);
        CHECK(above > 0.0);
        // the E2 = 0 tangency binds strictly later for mu1 < mu2 and
        // simultaneously for equal masses (the picture is symmetric)
        const double e2_side = regions::max_E2_over_Ipi(RegionParams(m, s * (1 - 1e-6), 1.0));
        if (mu1 < 0.5)
            CHECK(e2_side < 0.0);
        else
            CHECK(e2_side == doctest::Approx(above).epsilon(1e-3));
    }
}

TEST_CASE("I_pi inside the elliptic strip below threshold") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    const double s = regions::sigma(m).sigma;
    const RegionParams rp(m, 1.02 * s, 1.0);
    const double bound = regions::delta_L_bound(rp);
    const GridWindow w = scan::default_window(rp);
    std::mt19937_64 g(2718);
    long members = 0;
    for (long i = 0; i < 100000; ++i) {
        const PairState p =
            regions::pair_at(rp, testutil::uniform(g, -bound, bound),
                             testutil::uniform(g, w.de_min, w.de_max));
        if (!regions::admissible(p) || !regions::in_I_eta(p, kPi)) continue;
        ++members;
        REQUIRE(p.E1() < 0.0);
        REQUIRE(p.E2() < 0.0);
    }
    CHECK(members > 1000);
}

TEST_CASE("equal-mass closed form") {
    SUBCASE("limit and sample values") {
        CHECK_THROWS_AS(regions::critical_EL2_equal_mass(1.0), GammaRangeError);
        CHECK(regions::critical_EL2_equal_mass(10.0) ==
              doctest::Approx(-0.49513384705895896).epsilon(1e-12));
        // gamma -> infinity approaches the point-particle threshold
        CHECK(std::abs(regions::critical_EL2_equal_mass(1e6) + 27.0 / 64.0) < 1e-5);
        CHECK(std::abs(regions::critical_EL2_equal_mass(1e12) + 27.0 / 64.0) < 1e-11);
    }
    SUBCASE("monotone decreasing in D/L^2") {
        double prev = -27.0 / 64.0;
        for (double gamma : {1000.0, 100.0, 10.0, 5.0, 2.0, 1.5}) {
            const double v = regions::critical_EL2_equal_mass(gamma);
            CHECK(v < prev);  // larger D (smaller gamma) -> lower threshold
            prev = v;
        }
    }
}

TEST_CASE("numeric critical size") {
    const MassSplit m45 = MassSplit::from_mu1(0.45);
    SUBCASE("reproduces the reference sizes") {
        CHECK(regions::critical_D_numeric(m45, -0.445) ==
              doctest::Approx(0.034).epsilon(0.10));
        CHECK(regions::critical_D_numeric(m45, -0.52) ==
              doctest::Approx(0.25).epsilon(0.10));
    }
    SUBCASE("zero when the region touches a critical line") {
        const double s = regions::sigma(m45).sigma;
        CHECK(regions::critical_D_numeric(m45, s * 0.99) == 0.0);
    }
    SUBCASE("equal-mass closed-form inverse") {
        const MassSplit m = MassSplit::from_mu1(0.5);
        for (double gamma : {2.0, 10.0}) {
            const double el2 = regions::critical_EL2_equal_mass(gamma);
            const double d = regions::critical_D_numeric(m, el2);
            REQUIRE(d == doctest::Approx(2.0 / gamma).epsilon(1e-5));
        }
    }
}

TEST_CASE("potential margin") {
    const MassSplit m = MassSplit::from_mu1(0.45);
    SUBCASE("U = D = 0 reduces to the threshold test") {
        CHECK(regions::potential_margin(RegionParams(m, -0.445, 1.0), 0.0, 2.0, 0.0));
        CHECK_FALSE(regions::potential_margin(RegionParams(m, -0.41, 1.0), 0.0, 2.0, 0.0));
    }
    SUBCASE("U = 0, D > 0 reduces to the finite-size test") {
        CHECK(regions::potential_margin(RegionParams(m, -0.445, 1.0), 0.0, 2.0, 0.03));
        CHECK_FALSE(
            regions::potential_margin(RegionParams(m, -0.445, 1.0), 0.0, 2.0, 0.04));
    }
    SUBCASE("potential depth shifts the effective energy") {
        // (E + U/M) L^2 = -0.43 > sigma(0.45): the margin is lost
        const RegionParams rp(m, -0.445, 1.0);
        const double U = (-0.43 - rp.inv_E) * 2.0;
        REQUIRE(U > 0.0);
        CHECK_FALSE(regions::potential_margin(rp, U, 2.0, 0.0));
    }
}

}  // TEST_SUITE
