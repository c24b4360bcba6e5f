#include "spinrad/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinrad {

namespace {
constexpr double kPi = 3.14159265358979323846;

QuadratureConfig inner_green_config(const QuadratureConfig& cfg) {
    QuadratureConfig in = cfg;
    in.rel_tol = std::max(0.1 * cfg.rel_tol, 1e-11);
    in.abs_tol = 0.0;
    return in;
}

// The four thermally weighted channel terms shared by the power and torque
// densities. Each is Im alpha_xx(w -+ w0) * [a_T(w -+ w0) or a_T0(w)]; using the
// single coth implementation everywhere makes the equilibrium difference
// cancel exactly, not just to rounding.
struct XxTerms {
    double s_minus, s_plus;  // a_T-weighted at the shifted argument
    double d_minus, d_plus;  // a_T0(omega)-weighted
};

XxTerms xx_terms(const SpinningBody& body, double T0, double omega) {
    auto im_xx = [&](double x) { return body.pol.im_alpha_xx(x); };
    const double wm = omega - body.omega0;
    const double wp = omega + body.omega0;
    const double scale = std::max({std::abs(omega), std::abs(body.omega0), 1.0});
    const double a_T0 = T0 == 0.0 ? 1.0 : coth(omega / (2.0 * T0));
    XxTerms t;
    t.s_minus = thermal_weighted_im(im_xx, wm, body.T, scale);
    t.s_plus = thermal_weighted_im(im_xx, wp, body.T, scale);
    t.d_minus = im_xx(wm) * a_T0;
    t.d_plus = im_xx(wp) * a_T0;
    return t;
}

void require_positive_omega(double omega, const char* who) {
    if (!(omega > 0.0)) throw std::domain_error(std::string(who) + ": omega must be > 0");
}
} // namespace

std::string point_dipole_warning(const SpinningBody& body) {
    const double v = std::abs(body.omega0) * body.pol.radius();  // c = 1
    if (v > 0.01) {
        return "surface speed |omega0| a / c = " + std::to_string(v) +
               " exceeds 0.01; the point-dipole reduction is marginal";
    }
    return {};
}

PowerDensity power_spectral_density(const SpinningBody& body, double T0, const ImGreenDiag& g,
                                    double omega) {
    require_positive_omega(omega, "power_spectral_density");
    auto im_zz = [&](double x) { return body.pol.im_alpha_zz(x); };
    const double scale = std::max({std::abs(omega), std::abs(body.omega0), 1.0});
    const double a_T0 = T0 == 0.0 ? 1.0 : coth(omega / (2.0 * T0));
    const double pref = omega * omega * omega / (2.0 * kPi);
    const auto t = xx_terms(body, T0, omega);
    const double g_tan = g.xx + g.yy;
    PowerDensity d;
    d.zz = pref * 2.0 * g.zz *
           (thermal_weighted_im(im_zz, omega, body.T, scale) - im_zz(omega) * a_T0);
    d.xx_minus = pref * g_tan * (t.s_minus - t.d_minus);
    d.xx_plus = pref * g_tan * (t.s_plus - t.d_plus);
    return d;
}

TorqueDensity torque_spectral_density(const SpinningBody& body, double T0, const ImGreenDiag& g,
                                      double omega) {
    require_positive_omega(omega, "torque_spectral_density");
    const double pref = omega * omega / (2.0 * kPi) * (g.xx + g.yy);
    const auto t = xx_terms(body, T0, omega);
    TorqueDensity d;
    d.plus = pref * (t.s_plus - t.d_plus);
    d.minus = -pref * (t.s_minus - t.d_minus);
    d.p_part = pref * (t.s_plus - t.s_minus);
    d.e_part = pref * (t.d_minus - t.d_plus);
    return d;
}

PowerDensity power_spectral_density(const SpinningBody& body, const Environment& env,
                                    double omega, const QuadratureConfig& cfg) {
    const auto g = im_green(env.geometry, omega, inner_green_config(cfg));
    return power_spectral_density(body, env.T0, g, omega);
}

TorqueDensity torque_spectral_density(const SpinningBody& body, const Environment& env,
                                      double omega, const QuadratureConfig& cfg) {
    const auto g = im_green(env.geometry, omega, inner_green_config(cfg));
    return torque_spectral_density(body, env.T0, g, omega);
}

namespace {

// Integration domain for the omega integrals. At T = T0 = 0 the densities have
// hard support (0, |omega0|); otherwise seed panels cover the rotation window
// plus thermal octaves up to |omega0| + 40 max(T, T0), with tail doubling.
struct Domain {
    std::vector<double> breaks;
    bool finite_support;
};

Domain omega_domain(const SpinningBody& body, double T0) {
    const double w0 = std::abs(body.omega0);
    const double theta = std::max(body.T, T0);
    Domain d;
    if (theta == 0.0) {
        d.finite_support = true;
        if (w0 > 0.0) d.breaks = {0.0, 0.5 * w0, w0};
        return d;
    }
    // panels: the rotation window, then thermal octaves w0 + theta * 2^j
    d.finite_support = false;
    const double wmax = w0 + 40.0 * theta;
    d.breaks.push_back(0.0);
    if (w0 > 0.0) d.breaks.push_back(w0);
    for (double step = theta; w0 + step < wmax * (1.0 - 1e-12); step *= 2.0)
        d.breaks.push_back(w0 + step);
    d.breaks.push_back(wmax);
    return d;
}

template <typename DensityFn>
QuadResult<1> integrate_density(const Domain& dom, DensityFn&& density,
                                const QuadratureConfig& cfg) {
    std::function<std::array<double, 1>(double)> f = [&](double w) {
        return std::array<double, 1>{density(w)};
    };
    if (dom.finite_support) {
        if (dom.breaks.empty()) return {};
        return quad::integrate<1>(f, dom.breaks, cfg);
    }
    return quad::integrate_to_infinity<1>(f, dom.breaks, cfg);
}
} // namespace

IntegralResult radiated_power(const SpinningBody& body, const Environment& env,
                              const QuadratureConfig& cfg) {
    const auto green_cfg = inner_green_config(cfg);
    const auto dom = omega_domain(body, env.T0);
    auto density = [&](double w) {
        const auto g = im_green(env.geometry, w, green_cfg);
        return power_spectral_density(body, env.T0, g, w).total();
    };
    const auto r = integrate_density(dom, density, cfg);
    return {r.value[0], r.error[0], r.evaluations};
}

TorqueResult friction_torque(const SpinningBody& body, const Environment& env,
                             const QuadratureConfig& cfg) {
    const auto green_cfg = inner_green_config(cfg);
    const auto dom = omega_domain(body, env.T0);
    TorqueResult out;
    if (dom.finite_support) {
        if (dom.breaks.empty()) return out;
        // hard emission window: the dipole/field regrouping is finite too, so
        // integrate all four in one pass sharing the Green evaluations
        std::function<std::array<double, 4>(double)> f = [&](double w) {
            const auto g = im_green(env.geometry, w, green_cfg);
            const auto d = torque_spectral_density(body, env.T0, g, w);
            return std::array<double, 4>{d.plus, d.minus, d.p_part, d.e_part};
        };
        const auto r = quad::integrate<4>(f, dom.breaks, cfg);
        out.value = r.value[0] + r.value[1];
        out.error = r.error[0] + r.error[1];
        out.p_part = r.value[2];
        out.e_part = r.value[3];
        out.evaluations = r.evaluations;
        return out;
    }
    // Finite temperature: only the per-channel groupings decay (thermal factor
    // differences cut them off exponentially). The dipole/field regrouping has
    // a 1/omega tail channel by channel, so its pieces carry no finite value
    // over the full domain and are reported as NaN.
    std::function<std::array<double, 2>(double)> f = [&](double w) {
        const auto g = im_green(env.geometry, w, green_cfg);
        const auto d = torque_spectral_density(body, env.T0, g, w);
        return std::array<double, 2>{d.plus, d.minus};
    };
    const auto r = quad::integrate_to_infinity<2>(f, dom.breaks, cfg);
    out.value = r.value[0] + r.value[1];
    out.error = r.error[0] + r.error[1];
    if (body.omega0 == 0.0) {
        // shifted arguments coincide, both groupings vanish identically
        out.p_part = 0.0;
        out.e_part = 0.0;
    } else {
        out.p_part = std::numeric_limits<double>::quiet_NaN();
        out.e_part = std::numeric_limits<double>::quiet_NaN();
    }
    out.evaluations = r.evaluations;
    return out;
}

SpectralResult spectrum(const SpinningBody& body, const Environment& env,
                        const std::vector<double>& omega_grid, const QuadratureConfig& cfg) {
    SpectralResult res;
    res.omega = omega_grid;
    res.dP_domega.reserve(omega_grid.size());
    res.dM_domega.reserve(omega_grid.size());
    const auto green_cfg = inner_green_config(cfg);
    for (double w : omega_grid) {
        const auto g = im_green(env.geometry, w, green_cfg);
        res.dP_domega.push_back(power_spectral_density(body, env.T0, g, w));
        res.dM_domega.push_back(torque_spectral_density(body, env.T0, g, w));
    }
    res.total_power = radiated_power(body, env, cfg);
    res.total_torque = friction_torque(body, env, cfg);
    return res;
}

} // namespace spinrad
