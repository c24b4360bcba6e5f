#include "spinrad/response.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrad {

namespace {
constexpr double kPi = 3.14159265358979323846;

cdouble lorentz_chi(const std::vector<LorentzTerm>& terms, double w) {
    cdouble chi = 0.0;
    for (const auto& t : terms) {
        const double w0sq = t.omega0 * t.omega0;
        chi += t.strength * w0sq / cdouble(w0sq - w * w, -t.gamma * w);
    }
    return chi;
}

// (eps-1)/(eps+2) evaluated as 1 - 3/(eps+2): stable for |eps| large.
cdouble clausius_mossotti(cdouble eps) {
    const cdouble d = eps + 2.0;
    if (d == 0.0)
        throw std::domain_error("clausius_mossotti: eps = -2 pole");
    return 1.0 - 3.0 / d;
}

// Signed-frequency Clausius-Mossotti factor of a material model. The w == 0
// value is the static limit; for Drude that limit is the conductor value 1.
cdouble cm_signed(const DielectricModel& m, double w) {
    if (w == 0.0) {
        if (m.is_drude()) return 1.0;
        if (const auto* l = std::get_if<DielectricModel::Lorentz>(&m.raw()))
            return clausius_mossotti(1.0 + lorentz_chi(l->terms, 0.0));
        // tabulated data carries no static limit
        return clausius_mossotti(m.epsilon_signed(0.0));  // throws range/domain error
    }
    return clausius_mossotti(m.epsilon_signed(w));
}
} // namespace

double coth(double u) {
    if (u == 0.0)
        throw std::domain_error("coth: argument must be nonzero");
    if (std::abs(u) < 1e-4) return 1.0 / u + u / 3.0;  // next term u^3/45: ~1e-18 relative
    return 1.0 / std::tanh(u);
}

double thermal_factor(double omega, double T) {
    if (T < 0.0)
        throw std::invalid_argument("thermal_factor: T must be >= 0");
    if (T == 0.0) return omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
    if (omega == 0.0)
        throw std::domain_error("thermal_factor: singular at omega = 0 for T > 0");
    return coth(omega / (2.0 * T));
}

double thermal_weighted_im(const std::function<double(double)>& im, double x, double T,
                           double scale_hint) {
    if (T < 0.0)
        throw std::invalid_argument("thermal_weighted_im: T must be >= 0");
    if (T == 0.0) return x >= 0.0 ? im(x) : -im(x);
    if (x == 0.0) {
        // limit 2 T * (d Im/dx)(0) via the odd symmetry of im
        const double h = 1e-7 * std::max(std::abs(scale_hint), 2.0 * T);
        return 2.0 * T * im(h) / h;
    }
    return im(x) * coth(x / (2.0 * T));
}

BodySusceptibility BodySusceptibility::lorentz(std::vector<LorentzTerm> terms) {
    return lorentz_anisotropic(terms, terms);
}

BodySusceptibility BodySusceptibility::lorentz_anisotropic(std::vector<LorentzTerm> xx,
                                                           std::vector<LorentzTerm> zz) {
    // negative strength (gain) is allowed here so that passivity guards
    // downstream stay exercisable; the dielectric factories reject it
    for (const auto* v : {&xx, &zz})
        for (const auto& t : *v)
            if (!(t.omega0 > 0.0) || !(t.gamma > 0.0))
                throw std::invalid_argument(
                    "BodySusceptibility::lorentz: need omega0 > 0, gamma > 0");
    auto fx = [xx = std::move(xx)](double w) { return lorentz_chi(xx, w); };
    auto fz = [zz = std::move(zz)](double w) { return lorentz_chi(zz, w); };
    return BodySusceptibility(std::move(fx), std::move(fz));
}

BodySusceptibility BodySusceptibility::sphere(const DielectricModel& material) {
    return sphere_anisotropic(material, material);
}

BodySusceptibility BodySusceptibility::sphere_anisotropic(const DielectricModel& xx,
                                                          const DielectricModel& zz) {
    const double s = 3.0 / (4.0 * kPi);
    auto fx = [xx, s](double w) { return s * cm_signed(xx, w); };
    auto fz = [zz, s](double w) { return s * cm_signed(zz, w); };
    return BodySusceptibility(std::move(fx), std::move(fz));
}

BodySusceptibility BodySusceptibility::zero() {
    auto f = [](double) { return cdouble(0.0); };
    return BodySusceptibility(f, f);
}

cdouble mie_polarizability(double radius, cdouble eps) {
    if (!(radius > 0.0))
        throw std::invalid_argument("mie_polarizability: radius must be > 0");
    const double a3 = radius * radius * radius;
    return a3 * clausius_mossotti(eps);
}

Polarizability Polarizability::sphere(double radius, const DielectricModel& material) {
    return sphere_anisotropic(radius, material, material);
}

Polarizability Polarizability::sphere_anisotropic(double radius, const DielectricModel& xx,
                                                  const DielectricModel& zz) {
    if (!(radius > 0.0))
        throw std::invalid_argument("Polarizability: radius must be > 0");
    return Polarizability(radius, BodySusceptibility::sphere_anisotropic(xx, zz));
}

double Polarizability::volume() const {
    return 4.0 * kPi / 3.0 * radius_ * radius_ * radius_;
}

LabChi lab_frame_chi(const BodySusceptibility& chi0, double omega, int m, double omega0) {
    const double wp = omega + omega0 - m * omega0;
    const double wm = omega - omega0 - m * omega0;
    const cdouble cp = chi0.chi_xx(wp);
    const cdouble cm = chi0.chi_xx(wm);
    LabChi out;
    out.xx = 0.5 * (cp + cm);
    out.xy = (cp - cm) / cdouble(0.0, 2.0);
    out.zz = chi0.chi_zz(omega - m * omega0);
    return out;
}

GammaKernels gamma_kernels(const BodySusceptibility& chi0, double omega, int m, double T,
                           double omega0) {
    auto im_xx = [&chi0](double x) { return chi0.im_chi_xx(x); };
    auto im_zz = [&chi0](double x) { return chi0.im_chi_zz(x); };
    const double scale = std::max({std::abs(omega), std::abs(omega0), 1.0});
    const double xp = m * omega0 - (omega + omega0);
    const double xm = m * omega0 - (omega - omega0);
    const double tp = thermal_weighted_im(im_xx, xp, T, scale);
    const double tm = thermal_weighted_im(im_xx, xm, T, scale);
    GammaKernels g;
    g.zz = 2.0 * thermal_weighted_im(im_zz, m * omega0 - omega, T, scale);
    g.xx = tp + tm;
    g.xy = cdouble(0.0, tm - tp);
    return g;
}

Vec3c dipole_lab_from_body(const Vec3c& body_at_plus, const Vec3c& body_at_minus) {
    const cdouble i(0.0, 1.0);
    const auto& A = body_at_plus;
    const auto& B = body_at_minus;
    Vec3c lab;
    lab[0] = 0.5 * (A[0] + i * A[1] + B[0] - i * B[1]);
    lab[1] = 0.5 * (-i * A[0] + A[1] + i * B[0] + B[1]);
    lab[2] = A[2];  // z is unshifted; callers pass P'_z(omega) in both triples
    return lab;
}

Vec3c dipole_body_circular_from_lab(const Vec3c& lab) {
    const cdouble i(0.0, 1.0);
    return {lab[0] + i * lab[1], lab[0] - i * lab[1], lab[2]};
}

} // namespace spinrad
