#pragma once

#include <array>
#include <functional>

#include "spinrad/dielectric.hpp"

namespace spinrad {

using Vec3c = std::array<cdouble, 3>;

/// coth with a small-argument series so that Im chi(x) * coth(x/2T) products
/// stay accurate down to |x| -> 0. Every thermal weight in the library goes
/// through this one function; equal arguments therefore cancel exactly.
double coth(double u);

/// a_T(omega) = coth(hbar omega / 2 kB T); sign(omega) at T = 0.
/// Throws std::domain_error for omega == 0 with T > 0 (the factor is singular there).
double thermal_factor(double omega, double T);

/// Combined product Im chi(x) * a_T(x), finite for all x including the x -> 0
/// limit 2 T * d(Im chi)/dx. `im` must be an odd function with im(0) == 0.
double thermal_weighted_im(const std::function<double(double)>& im, double x, double T,
                           double scale_hint = 1.0);

/// Body-frame (corotating) electric susceptibility of the particle: the xx = yy
/// and zz components as functions of signed frequency with chi(-w) = conj(chi(w)).
class BodySusceptibility {
public:
    /// Sum of Lorentz oscillators, chi = sum S w0^2 / (w0^2 - w^2 - i g w).
    static BodySusceptibility lorentz(std::vector<LorentzTerm> terms);
    /// Same oscillators in xx and zz but independently settable.
    static BodySusceptibility lorentz_anisotropic(std::vector<LorentzTerm> xx,
                                                  std::vector<LorentzTerm> zz);
    /// Small dielectric sphere: chi = (3/4pi)(eps-1)/(eps+2), so that
    /// alpha = V chi with V = (4pi/3) a^3.
    static BodySusceptibility sphere(const DielectricModel& material);
    static BodySusceptibility sphere_anisotropic(const DielectricModel& xx,
                                                 const DielectricModel& zz);
    static BodySusceptibility zero();

    cdouble chi_xx(double w) const { return xx_(w); }
    cdouble chi_zz(double w) const { return zz_(w); }
    /// Odd imaginary parts; exactly 0 at w == 0.
    double im_chi_xx(double w) const { return w == 0.0 ? 0.0 : xx_(w).imag(); }
    double im_chi_zz(double w) const { return w == 0.0 ? 0.0 : zz_(w).imag(); }

private:
    BodySusceptibility(std::function<cdouble(double)> xx, std::function<cdouble(double)> zz)
        : xx_(std::move(xx)), zz_(std::move(zz)) {}
    std::function<cdouble(double)> xx_, zz_;
};

/// a^3 (eps - 1)/(eps + 2); throws std::domain_error at the eps = -2 pole.
cdouble mie_polarizability(double radius, cdouble eps);

/// Point-dipole polarizability of a small rotating sphere, alpha = V chi0.
class Polarizability {
public:
    static Polarizability sphere(double radius, const DielectricModel& material);
    static Polarizability sphere_anisotropic(double radius, const DielectricModel& xx,
                                             const DielectricModel& zz);

    double radius() const { return radius_; }
    double volume() const;
    const BodySusceptibility& susceptibility() const { return chi_; }

    cdouble alpha_xx(double w) const { return volume() * chi_.chi_xx(w); }
    cdouble alpha_zz(double w) const { return volume() * chi_.chi_zz(w); }
    double im_alpha_xx(double w) const { return volume() * chi_.im_chi_xx(w); }
    double im_alpha_zz(double w) const { return volume() * chi_.im_chi_zz(w); }

private:
    Polarizability(double radius, BodySusceptibility chi)
        : radius_(radius), chi_(std::move(chi)) {}
    double radius_;
    BodySusceptibility chi_;
};

/// Lab-frame susceptibility components at azimuthal index m for rotation
/// frequency omega0 (yy = xx, yx = -xy).
struct LabChi {
    cdouble xx, zz, xy;
};
LabChi lab_frame_chi(const BodySusceptibility& chi0, double omega, int m, double omega0);

/// Fluctuation-dissipation kernels of the corotating noise polarization.
/// zz and xx are real and nonnegative-definite combinations; xy is purely imaginary.
struct GammaKernels {
    double zz, xx;
    cdouble xy;
};
GammaKernels gamma_kernels(const BodySusceptibility& chi0, double omega, int m, double T,
                           double omega0);

/// Lab-frame dipole spectrum from the corotating components evaluated at
/// omega +- omega0 (P'(w+), P'(w-)) plus the unshifted z component.
Vec3c dipole_lab_from_body(const Vec3c& body_at_plus, const Vec3c& body_at_minus);

/// Inverse of dipole_lab_from_body in the circular basis: returns
/// {P'_x + i P'_y at w+, P'_x - i P'_y at w-, P_z}. The cartesian components at
/// the two shifted frequencies are not individually recoverable, only these
/// two circular combinations.
Vec3c dipole_body_circular_from_lab(const Vec3c& lab);

} // namespace spinrad
