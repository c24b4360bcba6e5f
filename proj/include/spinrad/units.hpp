#pragma once

namespace spinrad {

/// CODATA 2018 SI constants used at the program boundaries.
namespace si {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 2.99792458e8;            // m / s
inline constexpr double eps0 = 8.8541878128e-12;     // F / m
inline constexpr double kB = 1.380649e-23;           // J / K
}

/// Internal unit system: hbar = c = eps0 = kB = 1, frequencies measured in a
/// user-chosen characteristic frequency omega_c, lengths in c/omega_c.
/// All library computations run in these units; SI appears only in the
/// conversion helpers below.
struct UnitSystem {
    double omega_c;   // characteristic frequency, rad/s (SI)

    // values of the four constants inside the scaled system
    double hbar = 1.0;
    double c = 1.0;
    double eps0 = 1.0;
    double kB = 1.0;

    static UnitSystem with_characteristic_frequency(double omega_c_rad_s);

    // SI -> internal
    double frequency_in(double omega_rad_s) const { return omega_rad_s / omega_c; }
    double length_in(double meters) const { return meters * omega_c / si::c; }
    double temperature_in(double kelvin) const { return si::kB * kelvin / (si::hbar * omega_c); }
    double conductivity_in(double siemens_per_m) const { return siemens_per_m / (si::eps0 * omega_c); }

    // internal -> SI
    double frequency_out(double w) const { return w * omega_c; }
    double length_out(double l) const { return l * si::c / omega_c; }
    double temperature_out(double t) const { return t * si::hbar * omega_c / si::kB; }
    double power_out(double p) const { return p * si::hbar * omega_c * omega_c; }
    double torque_out(double m) const { return m * si::hbar * omega_c; }
    // spectral densities are per unit (internal) frequency
    double power_density_out(double dp) const { return dp * si::hbar * omega_c; }
    double torque_density_out(double dm) const { return dm * si::hbar; }
};

} // namespace spinrad
