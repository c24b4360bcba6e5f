#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spinrad/response.hpp"

namespace spinrad {

/// Log-spaced grid of n points covering [nu_min, nu_max] inclusive.
std::vector<double> log_grid(double nu_min, double nu_max, std::size_t n);

/// Trapezoid weights for an arbitrary increasing grid.
std::vector<double> trapezoid_weights(const std::vector<double>& grid);

/// Brute-force cross-check backend. The dissipative continuum behind a body
/// susceptibility is replaced by a finite set of damped harmonic modes; the
/// response and the thermal noise kernels are then rebuilt from plain sums
/// over the modes and compared against the closed-form path.
///
/// The i0+ prescription of the continuum is replaced by a damping term
/// -i (eta nu_i) s in each mode denominator, so eta is the fractional
/// linewidth of a mode. Each mode stands for the continuum patch between the
/// midpoints to its neighbours, and its resonance denominator is averaged over
/// that patch in closed form; the sums therefore stay well behaved even when
/// the grid spacing exceeds the linewidth. Discretization error falls off
/// first order in 1/N down to a floor set by eta, so comparisons are only
/// meaningful at frequencies where the target susceptibility varies slowly on
/// the scale eta*nu.
struct DiscreteBath {
    std::vector<double> nu_grid;  ///< mode frequencies, increasing, > 0
    std::vector<double> weights;  ///< quadrature weights, > 0
    std::vector<double> f_xx;     ///< coupling amplitudes per mode, >= 0 when valid
    std::vector<double> f_zz;
    int m = 0;                    ///< azimuthal index used by response_from_modes
    double omega0 = 0.0;          ///< rotation frequency
    double eta = 1e-3;            ///< fractional mode linewidth
    BodySusceptibility source;    ///< the channel functions the couplings came from

    std::size_t size() const { return nu_grid.size(); }
};

/// Inverts Im chi0 into mode couplings, f_kk(nu) = sqrt((2 nu / pi) Im chi0_kk(nu))
/// (internal units, eps0 = 1). The mode sums use f*|f| rather than f^2 so a
/// deliberately negated amplitude stays observable downstream.
/// Throws std::invalid_argument for a malformed grid and std::domain_error when
/// Im chi0 < 0 at a grid point (passivity).
DiscreteBath couplings_from_chi(const BodySusceptibility& chi0, std::vector<double> nu_grid,
                                std::vector<double> weights, int m = 0, double omega0 = 0.0,
                                double eta = 1e-3);

enum class BathChannel { xx, zz };

/// Body-frame susceptibility rebuilt from the mode sum,
/// sum_i w_i f_i |f_i| / (nu_i^2 - s^2 - i eta nu_i s), at signed frequency s.
cdouble reconstruct_chi0(const DiscreteBath& bath, BathChannel channel, double s);

/// Thermally weighted mode spectrum
///   E(x) = sum_i w_i f_i |f_i| K_i(x) coth(nu_i / 2T),
///   K_i(x) = eta nu_i |x| / ((nu_i^2 - x^2)^2 + (eta nu_i |x|)^2),
/// which tends to Im chi0(x) a_T(x) in the dense-mode limit. Each mode enters
/// only through its thermal second moment.
double thermal_mode_spectrum(const DiscreteBath& bath, BathChannel channel, double x, double T);

using Tensor3c = std::array<std::array<cdouble, 3>, 3>;

/// Lab-frame susceptibility tensor at the bath's azimuthal index, evaluated
/// from the mode sums at the rotation-shifted frequencies.
Tensor3c response_from_modes(const DiscreteBath& bath, double omega);

struct GammaComparison {
    std::string component;
    cdouble analytic;  ///< closed-form kernel
    cdouble oracle;    ///< mode-sum kernel
    double rel;        ///< |analytic - oracle| / max(|analytic|, |oracle|), 0 when both vanish
};

struct GammaReport {
    std::vector<GammaComparison> rows;
    double max_rel() const;
    /// Plain text, one row per component: name, analytic, oracle, relative error.
    std::string text() const;
};

/// Two-path comparison of the noise-polarization kernels at (omega, m): the
/// closed-form fluctuation-dissipation expression against the thermal mode sums.
GammaReport verify_gamma(const DiscreteBath& bath, double T, double omega, int m);

} // namespace spinrad
