#include "spinrad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace spinrad {

namespace {

// keeps the amplitude sign observable; equals f^2 for a valid bath
double signed_sq(double f) { return f * std::abs(f); }

const std::vector<double>& channel_f(const DiscreteBath& bath, BathChannel ch) {
    return ch == BathChannel::xx ? bath.f_xx : bath.f_zz;
}

double relative_gap(cdouble a, cdouble b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    if (denom == 0.0) return 0.0;
    return std::abs(a - b) / denom;
}

// Mode i represents the continuum patch between the midpoints to its
// neighbours; the patch widths reproduce the trapezoid weights exactly.
struct Cell {
    double lo, hi;
};

Cell cell_of(const DiscreteBath& bath, std::size_t i) {
    const auto& nu = bath.nu_grid;
    const double lo = i == 0 ? nu.front() : 0.5 * (nu[i - 1] + nu[i]);
    const double hi = i + 1 == nu.size() ? nu.back() : 0.5 * (nu[i] + nu[i + 1]);
    return {lo, hi};
}

// integral of 1/(nu^2 - c) over [a, b] for complex c off the positive real
// axis; (1/2r) log((nu-r)/(nu+r)) with r the principal root stays on one
// branch because Im((nu-r)/(nu+r)) keeps the sign of -Im r for nu > 0
cdouble inverse_quadratic_integral(double a, double b, cdouble c) {
    if (c == 0.0) return {1.0 / a - 1.0 / b, 0.0};
    const cdouble r = std::sqrt(c);
    const cdouble half_inv_r = 0.5 / r;
    return half_inv_r * (std::log((b - r) / (b + r)) - std::log((a - r) / (a + r)));
}

// cell mean of 1/(nu^2 - s^2 - i eta nu s) with the damping frozen at the node
cdouble cell_mean_response(const Cell& cell, double nu_node, double eta, double s) {
    const cdouble c(s * s, eta * nu_node * s);
    return inverse_quadratic_integral(cell.lo, cell.hi, c) / (cell.hi - cell.lo);
}

// cell mean of the mode spectral kernel g/((nu^2-x^2)^2 + g^2), g = eta nu |x|;
// the partial fractions of the quartic are conjugates, leaving one Im
double cell_mean_kernel(const Cell& cell, double nu_node, double eta, double x) {
    const double g = eta * nu_node * std::abs(x);
    if (g == 0.0) return 0.0;
    const cdouble c(x * x, g);
    return std::imag(inverse_quadratic_integral(cell.lo, cell.hi, c)) / (cell.hi - cell.lo);
}

} // namespace

std::vector<double> log_grid(double nu_min, double nu_max, std::size_t n) {
    if (!(nu_min > 0.0) || !(nu_max > nu_min))
        throw std::invalid_argument("log_grid: need 0 < nu_min < nu_max");
    if (n < 2) throw std::invalid_argument("log_grid: need at least 2 points");
    std::vector<double> g(n);
    const double la = std::log(nu_min);
    const double lb = std::log(nu_max);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = nu_min;
    g.back() = nu_max;
    return g;
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    if (n < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 points");
    std::vector<double> w(n);
    w.front() = 0.5 * (grid[1] - grid[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (grid[i + 1] - grid[i - 1]);
    w.back() = 0.5 * (grid[n - 1] - grid[n - 2]);
    return w;
}

DiscreteBath couplings_from_chi(const BodySusceptibility& chi0, std::vector<double> nu_grid,
                                std::vector<double> weights, int m, double omega0, double eta) {
    const std::size_t n = nu_grid.size();
    if (n < 2) throw std::invalid_argument("couplings_from_chi: need at least 2 modes");
    if (weights.size() != n)
        throw std::invalid_argument("couplings_from_chi: grid/weight size mismatch");
    if (!(eta > 0.0)) throw std::invalid_argument("couplings_from_chi: eta must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(nu_grid[i] > 0.0))
            throw std::invalid_argument("couplings_from_chi: mode frequencies must be positive");
        if (i > 0 && !(nu_grid[i] > nu_grid[i - 1]))
            throw std::invalid_argument("couplings_from_chi: mode frequencies must increase");
        if (!(weights[i] > 0.0))
            throw std::invalid_argument("couplings_from_chi: weights must be positive");
    }
    std::vector<double> fxx(n), fzz(n);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i) {
        const double ixx = chi0.im_chi_xx(nu_grid[i]);
        const double izz = chi0.im_chi_zz(nu_grid[i]);
        if (ixx < 0.0 || izz < 0.0)
            throw std::domain_error("couplings_from_chi: Im chi0 < 0 at nu = " +
                                    std::to_string(nu_grid[i]) + " (passivity)");
        fxx[i] = std::sqrt(2.0 * nu_grid[i] / pi * ixx);
        fzz[i] = std::sqrt(2.0 * nu_grid[i] / pi * izz);
    }
    return DiscreteBath{std::move(nu_grid), std::move(weights), std::move(fxx),
                        std::move(fzz),     m,                  omega0,
                        eta,                chi0};
}

cdouble reconstruct_chi0(const DiscreteBath& bath, BathChannel channel, double s) {
    const auto& f = channel_f(bath, channel);
    cdouble sum = 0.0;
    for (std::size_t i = 0; i < bath.size(); ++i) {
        const auto cell = cell_of(bath, i);
        sum += bath.weights[i] * signed_sq(f[i]) *
               cell_mean_response(cell, bath.nu_grid[i], bath.eta, s);
    }
    return sum;
}

double thermal_mode_spectrum(const DiscreteBath& bath, BathChannel channel, double x, double T) {
    const auto& f = channel_f(bath, channel);
    double sum = 0.0;
    for (std::size_t i = 0; i < bath.size(); ++i) {
        const auto cell = cell_of(bath, i);
        const double kernel = cell_mean_kernel(cell, bath.nu_grid[i], bath.eta, x);
        sum += bath.weights[i] * signed_sq(f[i]) * kernel * thermal_factor(bath.nu_grid[i], T);
    }
    return sum;
}

Tensor3c response_from_modes(const DiscreteBath& bath, double omega) {
    const double shift = static_cast<double>(bath.m) * bath.omega0;
    const cdouble cp = reconstruct_chi0(bath, BathChannel::xx, omega + bath.omega0 - shift);
    const cdouble cm = reconstruct_chi0(bath, BathChannel::xx, omega - bath.omega0 - shift);
    const cdouble czz = reconstruct_chi0(bath, BathChannel::zz, omega - shift);
    const cdouble i(0.0, 1.0);
    const cdouble xx = 0.5 * (cp + cm);
    const cdouble xy = (cp - cm) / (2.0 * i);
    return Tensor3c{{{xx, xy, 0.0}, {-xy, xx, 0.0}, {0.0, 0.0, czz}}};
}

double GammaReport::max_rel() const {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.rel);
    return worst;
}

std::string GammaReport::text() const {
    std::string out =
        "component   analytic                       oracle                         rel_error\n";
    char line[192];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-10s  (%.9g, %.9g)  (%.9g, %.9g)  %.3g\n",
                      r.component.c_str(), r.analytic.real(), r.analytic.imag(),
                      r.oracle.real(), r.oracle.imag(), r.rel);
        out += line;
    }
    return out;
}

GammaReport verify_gamma(const DiscreteBath& bath, double T, double omega, int m) {
    const GammaKernels direct = gamma_kernels(bath.source, omega, m, T, bath.omega0);

    const double shift = static_cast<double>(m) * bath.omega0;
    const double xp = shift - (omega + bath.omega0);
    const double xm = shift - (omega - bath.omega0);
    const double xz = shift - omega;
    const double tp = thermal_mode_spectrum(bath, BathChannel::xx, xp, T);
    const double tm = thermal_mode_spectrum(bath, BathChannel::xx, xm, T);
    const double zz = 2.0 * thermal_mode_spectrum(bath, BathChannel::zz, xz, T);
    const cdouble i(0.0, 1.0);
    const cdouble xy = i * (tm - tp);

    GammaReport rep;
    rep.rows.push_back({"Gamma_zz", cdouble(direct.zz), cdouble(zz),
                        relative_gap(cdouble(direct.zz), cdouble(zz))});
    rep.rows.push_back({"Gamma_xx", cdouble(direct.xx), cdouble(tp + tm),
                        relative_gap(cdouble(direct.xx), cdouble(tp + tm))});
    rep.rows.push_back({"Gamma_xy", direct.xy, xy, relative_gap(direct.xy, xy)});
    return rep;
}

} // namespace spinrad
