#include "spinrad/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinrad {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kReflTolSq = 1.0 + 2.1e-9;  // |r|^2 bound for |r| <= 1 + 1e-9
constexpr int kMaxHalfPeriodPanels = 8192;

void check_passive(cdouble eps, double omega) {
    if (eps.imag() < -1e-12) {
        std::ostringstream msg;
        msg << "im_green_half_space: Im eps = " << eps.imag() << " < 0 at omega = " << omega
            << "; material must be passive";
        throw std::invalid_argument(msg.str());
    }
}

void check_reflection(cdouble r, const char* name, double omega, double kpar) {
    if (std::norm(r) > kReflTolSq) {
        std::ostringstream msg;
        msg << "im_green_half_space: |" << name << "| = " << std::abs(r) << " > 1 at omega = "
            << omega << ", kpar = " << kpar << "; branch-cut inconsistency for passive material";
        throw std::runtime_error(msg.str());
    }
}

// k_z in the medium with Im k1 >= 0. The +0.0 turns a negative-zero imaginary
// part (lossless eps) into +0.0 so the principal sqrt lands on the decaying branch.
cdouble medium_kz(double re, double im) { return std::sqrt(cdouble(re, im + 0.0)); }

// Half-period panels of cos(2 t z) on [0, tmax], plus adaptive refinement later.
std::vector<double> oscillation_breaks(double tmax, double z) {
    std::vector<double> breaks{0.0};
    const double h = kPi / (2.0 * z);
    if (h < tmax) {
        const double n_needed = tmax / h;
        if (n_needed <= double(kMaxHalfPeriodPanels)) {
            for (double t = h; t < tmax * (1.0 - 1e-12); t += h) breaks.push_back(t);
        } else {
            const double hh = tmax / double(kMaxHalfPeriodPanels);
            for (int j = 1; j < kMaxHalfPeriodPanels; ++j) breaks.push_back(hh * j);
        }
    } else {
        breaks.push_back(0.5 * tmax);
    }
    breaks.push_back(tmax);
    return breaks;
}
} // namespace

PlanarGeometry PlanarGeometry::vacuum() { return PlanarGeometry{}; }

PlanarGeometry PlanarGeometry::half_space(DielectricModel material, double z) {
    if (!(z > 0.0))
        throw std::invalid_argument("PlanarGeometry::half_space: z must be > 0");
    PlanarGeometry g;
    g.kind = Kind::HalfSpace;
    g.material = std::move(material);
    g.z = z;
    return g;
}

PlanarGeometry PlanarGeometry::conductor(double z) {
    if (!(z > 0.0))
        throw std::invalid_argument("PlanarGeometry::conductor: z must be > 0");
    PlanarGeometry g;
    g.kind = Kind::Conductor;
    g.z = z;
    return g;
}

ImGreenDiag im_green_vacuum(double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("im_green_vacuum: omega must be > 0");
    const double v = omega / (6.0 * kPi);
    return {v, v, v, 0.0, 0.0, 0.0};
}

ImGreenDiag im_green_half_space(double omega, double z, const DielectricModel& material,
                                const QuadratureConfig& cfg) {
    if (!(omega > 0.0))
        throw std::domain_error("im_green_half_space: omega must be > 0");
    if (!(z > 0.0))
        throw std::invalid_argument("im_green_half_space: z must be > 0");
    const cdouble eps = material.epsilon(omega);
    check_passive(eps, omega);
    const double w2 = omega * omega;

    // Propagating sector in t = k_z: the t-substitution removes the 1/k and the
    // sqrt edge of the k_par measure, leaving a smooth oscillatory integrand.
    // 1 -+ Re(r e^{2itz}) is evaluated through the complements 1 -+ r (closed
    // forms without subtraction) and 1 - e^{2itz} = 2 sin(tz) (sin(tz) - i cos(tz));
    // the naive form loses all relative accuracy when r -> +-1 and tz -> 0
    // (near-conductor image cancellation), and the adaptive loop then chases
    // roundoff noise forever.
    std::function<std::array<double, 2>(double)> prop = [&](double t) {
        const double kpar2 = w2 - t * t;
        const cdouble k1 = medium_kz(eps.real() * w2 - kpar2, eps.imag() * w2);
        const cdouble dp = eps * t + k1, ds = t + k1;
        const cdouble rp = (eps * t - k1) / dp;
        const cdouble rs = (t - k1) / ds;
        const double kpar = std::sqrt(std::max(kpar2, 0.0));
        check_reflection(rp, "r_p", omega, kpar);
        check_reflection(rs, "r_s", omega, kpar);
        const double sz = std::sin(t * z), cz = std::cos(t * z);
        const cdouble one_m_E(2.0 * sz * sz, -2.0 * sz * cz);
        const double one_m_rpE = (2.0 * k1 / dp + rp * one_m_E).real();
        const double one_p_rsE = (2.0 * t / ds - rs * one_m_E).real();
        const double one_p_rpE = (2.0 * eps * t / dp - rp * one_m_E).real();
        const double xx = ((t * t / w2) * one_m_rpE + one_p_rsE) / (8.0 * kPi);
        const double zz = ((w2 - t * t) / w2) * one_p_rpE / (4.0 * kPi);
        return std::array<double, 2>{xx, zz};
    };
    const auto prop_res = quad::integrate<2>(prop, oscillation_breaks(omega, z), cfg);

    // Evanescent sector in u = kappa: exp(-2 u z) decay, r evaluated at k = i u.
    std::function<std::array<double, 2>(double)> evan = [&](double u) {
        const cdouble k1 = medium_kz((eps.real() - 1.0) * w2 - u * u, eps.imag() * w2);
        const cdouble ieu(-eps.imag() * u, eps.real() * u);  // i eps u
        const cdouble rp = (ieu - k1) / (ieu + k1);
        const cdouble rs = (cdouble(0.0, u) - k1) / (cdouble(0.0, u) + k1);
        const double wgt = std::exp(-2.0 * u * z);
        const double xx = wgt * ((u * u / w2) * rp.imag() + rs.imag()) / (8.0 * kPi);
        const double zz = wgt * ((w2 + u * u) / w2) * rp.imag() / (4.0 * kPi);
        return std::array<double, 2>{xx, zz};
    };
    const double cut = std::max(20.0 / z, 10.0 * omega);
    std::vector<double> seeds{0.0};
    for (double s : {0.5 / z, 2.0 / z, 8.0 / z})
        if (s > seeds.back() && s < cut) seeds.push_back(s);
    seeds.push_back(cut);
    const auto evan_res = quad::integrate_to_infinity<2>(evan, seeds, cfg);

    ImGreenDiag g;
    g.xx = g.yy = prop_res.value[0] + evan_res.value[0];
    g.zz = prop_res.value[1] + evan_res.value[1];
    g.err_xx = g.err_yy = prop_res.error[0] + evan_res.error[0];
    g.err_zz = prop_res.error[1] + evan_res.error[1];
    return g;
}

ImGreenDiag im_green_conductor(double omega, double z, const QuadratureConfig& cfg) {
    if (!(omega > 0.0))
        throw std::domain_error("im_green_conductor: omega must be > 0");
    if (!(z > 0.0))
        throw std::invalid_argument("im_green_conductor: z must be > 0");
    const double w2 = omega * omega;
    // 1 -+ cos(2tz) as 2 sin^2 / 2 cos^2: xx is O((omega z)^2) near the surface
    // and the difference form has no relative accuracy there
    std::function<std::array<double, 2>(double)> f = [&](double t) {
        const double sz = std::sin(t * z), cz = std::cos(t * z);
        const double xx = (1.0 + t * t / w2) * (2.0 * sz * sz) / (8.0 * kPi);
        const double zz = ((w2 - t * t) / w2) * (2.0 * cz * cz) / (4.0 * kPi);
        return std::array<double, 2>{xx, zz};
    };
    const auto res = quad::integrate<2>(f, oscillation_breaks(omega, z), cfg);
    ImGreenDiag g;
    g.xx = g.yy = res.value[0];
    g.zz = res.value[1];
    g.err_xx = g.err_yy = res.error[0];
    g.err_zz = res.error[1];
    return g;
}

ImGreenDiag im_green(const PlanarGeometry& geom, double omega, const QuadratureConfig& cfg) {
    switch (geom.kind) {
        case PlanarGeometry::Kind::Vacuum:
            return im_green_vacuum(omega);
        case PlanarGeometry::Kind::HalfSpace:
            return im_green_half_space(omega, geom.z, *geom.material, cfg);
        case PlanarGeometry::Kind::Conductor:
            return im_green_conductor(omega, geom.z, cfg);
    }
    throw std::logic_error("im_green: unknown geometry kind");
}

namespace detail {

std::array<double, 3> half_space_integrand_propagating(double omega, double z, cdouble eps,
                                                       double kpar) {
    const double w2 = omega * omega;
    const double k = std::sqrt(std::max(w2 - kpar * kpar, 0.0));
    const cdouble k1 = medium_kz(eps.real() * w2 - kpar * kpar, eps.imag() * w2);
    const cdouble dp = eps * k + k1, ds = k + k1;
    const cdouble rp = (eps * k - k1) / dp;
    const cdouble rs = (k - k1) / ds;
    const double sz = std::sin(k * z), cz = std::cos(k * z);
    const cdouble one_m_E(2.0 * sz * sz, -2.0 * sz * cz);
    const double one_m_rpE = (2.0 * k1 / dp + rp * one_m_E).real();
    const double one_p_rsE = (2.0 * k / ds - rs * one_m_E).real();
    const double one_p_rpE = (2.0 * eps * k / dp - rp * one_m_E).real();
    const double xx =
        kpar * ((k / w2) * one_m_rpE + (1.0 / k) * one_p_rsE) / (8.0 * kPi);
    const double zz = kpar * (kpar * kpar / (k * w2)) * one_p_rpE / (4.0 * kPi);
    return {xx, xx, zz};
}

std::array<double, 3> half_space_integrand_evanescent(double omega, double z, cdouble eps,
                                                      double kpar) {
    const double w2 = omega * omega;
    const double u = std::sqrt(std::max(kpar * kpar - w2, 0.0));
    const cdouble k1 = medium_kz((eps.real() - 1.0) * w2 - u * u, eps.imag() * w2);
    const cdouble ieu(-eps.imag() * u, eps.real() * u);
    const cdouble rp = (ieu - k1) / (ieu + k1);
    const cdouble rs = (cdouble(0.0, u) - k1) / (cdouble(0.0, u) + k1);
    const double wgt = std::exp(-2.0 * u * z);
    const double xx = kpar * wgt * ((u / w2) * rp.imag() + (1.0 / u) * rs.imag()) / (8.0 * kPi);
    const double zz = kpar * (kpar * kpar / (u * w2)) * wgt * rp.imag() / (4.0 * kPi);
    return {xx, xx, zz};
}

} // namespace detail
} // namespace spinrad
