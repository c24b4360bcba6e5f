#pragma once

#include <array>
#include <optional>

#include "spinrad/dielectric.hpp"
#include "spinrad/quadrature.hpp"

namespace spinrad {

/// Imaginary part of the scattering-corrected dyadic Green function, diagonal
/// in-plane-averaged components at coincident points a height z above the
/// surface. Normalized so the free-space value is w/(6 pi c) per component.
struct ImGreenDiag {
    double xx, yy, zz;
    double err_xx, err_yy, err_zz;
};

/// Planar environment below the body: vacuum everywhere, a material half-space
/// at distance z, or an ideal conductor at distance z.
struct PlanarGeometry {
    enum class Kind { Vacuum, HalfSpace, Conductor };
    Kind kind = Kind::Vacuum;
    std::optional<DielectricModel> material;  // HalfSpace only
    double z = 0.0;                           // > 0 for HalfSpace / Conductor

    static PlanarGeometry vacuum();
    static PlanarGeometry half_space(DielectricModel material, double z);
    static PlanarGeometry conductor(double z);
};

/// Free space: Im G = w/(6 pi) on each diagonal, error 0.
ImGreenDiag im_green_vacuum(double omega);

/// Lossy half-space: propagating sector integrated in the variable t = k_z
/// (half-period panels of the cos(2 t z) oscillation), evanescent sector in
/// u = kappa with adaptive domain doubling. Throws on passivity violations
/// (|r| > 1 + 1e-9 in the propagating sector, Im eps < 0).
ImGreenDiag im_green_half_space(double omega, double z, const DielectricModel& material,
                                const QuadratureConfig& cfg);

/// Ideal conductor: closed-form reflection kernels, propagating sector only.
ImGreenDiag im_green_conductor(double omega, double z, const QuadratureConfig& cfg);

/// Dispatch on geometry kind.
ImGreenDiag im_green(const PlanarGeometry& geom, double omega, const QuadratureConfig& cfg);

namespace detail {
/// Raw k-parallel-space integrands (per unit dk_par, components xx, yy, zz) of
/// the half-space Im G, exposed for the branch-continuity tests.
std::array<double, 3> half_space_integrand_propagating(double omega, double z, cdouble eps,
                                                       double kpar);
std::array<double, 3> half_space_integrand_evanescent(double omega, double z, cdouble eps,
                                                      double kpar);
} // namespace detail

} // namespace spinrad
