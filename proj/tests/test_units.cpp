#include "spinrad/units.hpp"

#include <doctest.h>

using namespace spinrad;

TEST_CASE("unit system round trips") {
    const auto us = UnitSystem::with_characteristic_frequency(3.7e13);
    CHECK(us.frequency_out(us.frequency_in(1.2e14)) == doctest::Approx(1.2e14).epsilon(1e-15));
    CHECK(us.length_out(us.length_in(5e-8)) == doctest::Approx(5e-8).epsilon(1e-15));
    CHECK(us.temperature_out(us.temperature_in(300.0)) == doctest::Approx(300.0).epsilon(1e-15));
}

TEST_CASE("characteristic frequency maps to unity") {
    const auto us = UnitSystem::with_characteristic_frequency(1e12);
    CHECK(us.frequency_in(1e12) == 1.0);
    CHECK(us.hbar == 1.0);
    CHECK(us.c == 1.0);
    CHECK(us.eps0 == 1.0);
    CHECK(us.kB == 1.0);
}

TEST_CASE("length scale is c over omega_c") {
    const auto us = UnitSystem::with_characteristic_frequency(1e12);
    // one internal length unit is c/omega_c meters
    CHECK(us.length_out(1.0) == doctest::Approx(2.99792458e-4).epsilon(1e-15));
    CHECK(us.length_in(2.99792458e-4) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("temperature conversion uses kB over hbar omega_c") {
    const auto us = UnitSystem::with_characteristic_frequency(1e12);
    // kB * 1K / (hbar * 1e12 rad/s)
    const double expect = 1.380649e-23 / (1.054571817e-34 * 1e12);
    CHECK(us.temperature_in(1.0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("conductivity conversion normalizes by eps0 omega_c") {
    const auto us = UnitSystem::with_characteristic_frequency(1e12);
    // sigma = eps0 * omega_c in SI is exactly 1 internally
    CHECK(us.conductivity_in(8.8541878128e-12 * 1e12) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("output scales carry hbar") {
    const auto us = UnitSystem::with_characteristic_frequency(1e12);
    CHECK(us.power_out(1.0) == doctest::Approx(1.054571817e-10).epsilon(1e-15));
    CHECK(us.torque_out(1.0) == doctest::Approx(1.054571817e-22).epsilon(1e-15));
    CHECK(us.power_density_out(1.0) == doctest::Approx(1.054571817e-22).epsilon(1e-15));
    CHECK(us.torque_density_out(1.0) == doctest::Approx(1.054571817e-34).epsilon(1e-15));
}
