#pragma once

#include <string>
#include <vector>

#include "spinrad/greens.hpp"
#include "spinrad/response.hpp"

namespace spinrad {

/// Rotating particle: point-dipole polarizability, internal temperature T,
/// rotation frequency omega0 (signed, internal units).
struct SpinningBody {
    Polarizability pol;
    double T = 0.0;
    double omega0 = 0.0;
};

/// Surroundings: planar geometry plus the environment temperature T0.
struct Environment {
    PlanarGeometry geometry;
    double T0 = 0.0;
};

/// Non-fatal validity note: the point-dipole reduction assumes |omega0| a / c
/// small. Returns an explanatory string when violated, empty otherwise.
std::string point_dipole_warning(const SpinningBody& body);

/// One-sided spectral density of the radiated power at omega > 0, split by
/// channel: zz (unshifted) and the two circular xx channels at omega -+ omega0.
/// All entries carry the (omega^3 / 2 pi) prefactor and Green weights, so
/// total() integrates directly to the power.
struct PowerDensity {
    double zz = 0.0, xx_minus = 0.0, xx_plus = 0.0;
    double total() const { return zz + (xx_minus + xx_plus); }
};

/// One-sided spectral density of the frictional torque at omega > 0.
/// plus/minus are the omega + omega0 and omega - omega0 channels of the net
/// density; p_part/e_part regroup the same four thermal terms into the
/// radiation-reaction (a_T-weighted) and field-fluctuation (a_T0-weighted)
/// contributions, so plus + minus == p_part + e_part.
struct TorqueDensity {
    double plus = 0.0, minus = 0.0;
    double p_part = 0.0, e_part = 0.0;
    double total() const { return plus + minus; }
};

PowerDensity power_spectral_density(const SpinningBody& body, const Environment& env,
                                    double omega, const QuadratureConfig& cfg);
TorqueDensity torque_spectral_density(const SpinningBody& body, const Environment& env,
                                      double omega, const QuadratureConfig& cfg);

/// Same densities with a precomputed Im G (used by grid sweeps to share the
/// Green evaluation between power and torque).
PowerDensity power_spectral_density(const SpinningBody& body, double T0, const ImGreenDiag& g,
                                    double omega);
TorqueDensity torque_spectral_density(const SpinningBody& body, double T0, const ImGreenDiag& g,
                                      double omega);

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

struct TorqueResult {
    double value = 0.0;
    double error = 0.0;
    // Dipole-fluctuation / field-fluctuation regrouping of the same integrand.
    // Finite when T = T0 = 0 (hard emission window) or omega0 = 0 (both vanish
    // identically); at finite temperature with rotation the pieces grow a
    // 1/omega tail that only cancels in the sum, so they are NaN there.
    double p_part = 0.0;
    double e_part = 0.0;
    long evaluations = 0;
};

/// Net radiated power, adaptive over omega in (0, omega_max) with omega_max =
/// |omega0| + 40 max(T, T0) doubled until the tail is negligible; exact support
/// (0, |omega0|) at T = T0 = 0.
IntegralResult radiated_power(const SpinningBody& body, const Environment& env,
                              const QuadratureConfig& cfg);

/// Net frictional torque about the rotation axis, same domain handling.
TorqueResult friction_torque(const SpinningBody& body, const Environment& env,
                             const QuadratureConfig& cfg);

/// Densities tabulated on a caller-supplied grid plus the adaptive totals.
struct SpectralResult {
    std::vector<double> omega;
    std::vector<PowerDensity> dP_domega;
    std::vector<TorqueDensity> dM_domega;
    IntegralResult total_power;
    TorqueResult total_torque;
};
SpectralResult spectrum(const SpinningBody& body, const Environment& env,
                        const std::vector<double>& omega_grid, const QuadratureConfig& cfg);

} // namespace spinrad
