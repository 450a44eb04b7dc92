#include <cmath>
#include <random>

#include "doctest.h"
#include "kepcol/kepler.hpp"
#include "test_util.hpp"

using namespace kepcol;
using testutil::kPi;

TEST_SUITE("kepler") {

TEST_CASE("eccentricity basics") {
    CHECK(kepler::eccentricity(-0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kepler::eccentricity(0.0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
    // E*L^2 = -27/64: the equal-mass threshold's mean orbit
    const double e = kepler::eccentricity(-27.0 / 64.0, 1.0);
    CHECK(std::abs(e - std::sqrt(5.0 / 32.0)) < 1e-15);
    CHECK_THROWS_AS(kepler::eccentricity(-1.0, 1.0), AdmissibilityError);
}

TEST_CASE("scaled invariant") {
    CHECK(kepler::scaled_el2(-0.5, 1.0, 1.0) == -0.5);
    // rescaling k leaves E*L^2/k^2 the canonical knob
    CHECK(kepler::scaled_el2(-2.0, 4.0, 8.0) == doctest::Approx(-0.5));
}

TEST_CASE("state at anomaly, circular orbit") {
    const OrbitElements circ(-0.5, 1.0, 0.0);
    const PlanarState s = kepler::state_at_anomaly(circ, 0.0);
    CHECK(s.position.x == doctest::Approx(1.0));
    CHECK(s.position.y == doctest::Approx(0.0));
    CHECK(s.velocity.norm() == doctest::Approx(1.0));
    CHECK(std::abs(s.velocity.dot(s.position)) < 1e-14);  // transverse
}

TEST_CASE("periapsis distance at theta = 0") {
    const OrbitElements o(-0.3, 1.1, 0.4);
    const PlanarState s = kepler::state_at_anomaly(o, 0.0);
    const double e = o.eccentricity();
    CHECK(s.position.norm() == doctest::Approx(1.1 * 1.1 / (1.0 + e)).epsilon(1e-14));
}

TEST_CASE("round trip through elements_from_state") {
    const OrbitElements o(-0.3, 1.1, 0.4);
    const PlanarState s = kepler::state_at_anomaly(o, 1.0);
    const OrbitElements back = kepler::elements_from_state(s);
    CHECK(back.energy == doctest::Approx(o.energy).epsilon(1e-10));
    CHECK(back.ang_mom == doctest::Approx(o.ang_mom).epsilon(1e-10));
    CHECK(wrap_2pi(back.periapsis_angle) ==
          doctest::Approx(wrap_2pi(o.periapsis_angle)).epsilon(1e-10));
}

TEST_CASE("state errors") {
    CHECK_THROWS_AS(kepler::state_at_anomaly(OrbitElements(-0.5, 0.0, 0.0), 1.0),
                    DegenerateOrbitError);
    // hyperbola beyond the asymptote
    const OrbitElements hyp(0.5, 1.0, 0.0);
    CHECK_THROWS_AS(kepler::state_at_anomaly(hyp, kPi), RadiusDivergesError);
    CHECK_THROWS_AS(kepler::elements_from_state({{0.0, 0.0}, {1.0, 0.0}}), OriginError);
}

TEST_CASE("elements from simple states") {
    const OrbitElements circ = kepler::elements_from_state({{1, 0}, {0, 1}});
    CHECK(circ.energy == doctest::Approx(-0.5));
    CHECK(circ.ang_mom == doctest::Approx(1.0));
    CHECK(circ.eccentricity() < 1e-12);
    CHECK(circ.periapsis_angle == 0.0);  // circular convention

    const OrbitElements par = kepler::elements_from_state({{1, 0}, {0, std::sqrt(2.0)}});
    CHECK(std::abs(par.energy) < 1e-15);
    CHECK(par.eccentricity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification") {
    CHECK(kepler::classify(OrbitElements(-0.2, 0.9, 0.0)) == ConicClass::Elliptic);
    CHECK(kepler::classify(OrbitElements(0.1, 0.9, 0.0)) == ConicClass::Hyperbolic);
    CHECK(kepler::classify(OrbitElements(-0.2, 0.0, 0.0)) == ConicClass::Degenerate);
    CHECK(kepler::classify(OrbitElements(0.0, 0.9, 0.0)) == ConicClass::Parabolic);
    CHECK(kepler::classify(OrbitElements(1e-13, 0.9, 0.0)) == ConicClass::Parabolic);
}

TEST_CASE("property: round trip, vis-viva and angular momentum") {
    std::mt19937_64 g(12345);
    for (int i = 0; i < 10000; ++i) {
        const OrbitElements o = testutil::sample_elliptic(g);
        const double theta = testutil::uniform(g, 0.0, 2.0 * kPi);
        const PlanarState s = kepler::state_at_anomaly(o, theta);

        const double E_check = 0.5 * s.velocity.norm2() - 1.0 / s.position.norm();
        REQUIRE(E_check == doctest::Approx(o.energy).epsilon(1e-12));
        REQUIRE(s.position.cross(s.velocity) ==
                doctest::Approx(o.ang_mom).epsilon(1e-12));

        const OrbitElements back = kepler::elements_from_state(s);
        REQUIRE(back.energy == doctest::Approx(o.energy).epsilon(1e-10));
        REQUIRE(back.ang_mom == doctest::Approx(o.ang_mom).epsilon(1e-10));
        if (o.eccentricity() > 1e-6) {
            const double dw = wrap_pi(back.periapsis_angle - o.periapsis_angle);
            REQUIRE(std::abs(dw) < 1e-10);
        }
        // the state sits at the sampled anomaly
        const double th_back = kepler::true_anomaly_of(s, back);
        REQUIRE(std::abs(wrap_pi(th_back - theta)) < 1e-8);
    }
}

TEST_CASE("retrograde orbits round trip") {
    const OrbitElements o(-0.3, -1.1, 0.7);
    const PlanarState s = kepler::state_at_anomaly(o, 2.0);
    CHECK(s.position.cross(s.velocity) == doctest::Approx(-1.1).epsilon(1e-13));
    const OrbitElements back = kepler::elements_from_state(s);
    CHECK(back.ang_mom == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK(back.energy == doctest::Approx(-0.3).epsilon(1e-12));
}

}  // TEST_SUITE
