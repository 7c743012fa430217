#include <doctest.h>

#include "units.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace vsel;

TEST_SUITE_BEGIN("units");

TEST_CASE("gradient conversion anchors") {
    CHECK(gradient_to_internal(0.0) == 0.0);
    // muB/kB = 0.6717 K/T from the constant table; 0.5 G/cm -> ~3.36 nK/um
    CHECK(gradient_to_internal(0.5) == doctest::Approx(3.3586).epsilon(1e-3));
    CHECK(gradient_to_internal(100.0) == doctest::Approx(671.71).epsilon(1e-3));
    CHECK_THROWS_AS(gradient_to_internal(-1.0), std::domain_error);
}

TEST_CASE("gradient conversion is linear") {
    const double g1 = gradient_to_internal(1.0);
    for (double b : {0.01, 0.37, 2.0, 55.0, 400.0})
        CHECK(gradient_to_internal(b) == doctest::Approx(b * g1).epsilon(1e-14));
}

TEST_CASE("packet width to temperature") {
    // published anchor: x0 = 0.07 um corresponds to T0 = 292 nK for 85Rb
    CHECK(temperature_from_packet_width(0.07) == doctest::Approx(292.0).epsilon(0.005));
    // T0 ~ 1/x0^2
    CHECK(temperature_from_packet_width(0.14) ==
          doctest::Approx(temperature_from_packet_width(0.07) / 4.0).epsilon(1e-12));
    CHECK(temperature_from_packet_width(1e6) < 1e-9);
    CHECK_THROWS_AS(temperature_from_packet_width(0.0), std::domain_error);
    CHECK_THROWS_AS(temperature_from_packet_width(-0.1), std::domain_error);
}

TEST_CASE("velocity/temperature roundtrip") {
    CHECK(velocity_from_temperature(0.0) == 0.0);
    CHECK(velocity_from_temperature(292.0) == doctest::Approx(5.35).epsilon(1e-2));
    for (double t0 : {1.0, 292.0, 5e4, 1e6}) {
        const double v = velocity_from_temperature(t0);
        CHECK(temperature_from_velocity(v) == doctest::Approx(t0).epsilon(1e-12));
    }
    for (double x0 : {0.05, 0.07, 0.3, 2.0}) {
        const double t = temperature_from_packet_width(x0);
        CHECK(packet_width_from_temperature(t) == doctest::Approx(x0).epsilon(1e-12));
    }
}

TEST_CASE("conversions are monotone") {
    double prev = -1.0;
    for (double b = 0.0; b < 10.0; b += 0.37) {
        const double g = gradient_to_internal(b);
        CHECK(g > prev);
        prev = g;
    }
    prev = 1e30;
    for (double x0 = 0.01; x0 < 1.0; x0 *= 1.7) {
        const double t = temperature_from_packet_width(x0);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("mass override scales kinetic quantities") {
    PhysicalConstants heavy;
    heavy.mass_amu = 2.0 * PhysicalConstants::rb85_amu;
    CHECK(heavy.mass() == doctest::Approx(2.0 * PhysicalConstants{}.mass()).epsilon(1e-14));
    CHECK(velocity_from_temperature(100.0, heavy) ==
          doctest::Approx(velocity_from_temperature(100.0) / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_SUITE_END();
