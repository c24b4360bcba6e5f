#include "spinrad/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinrad {

DielectricModel DielectricModel::drude(double sigma0) {
    if (!(sigma0 > 0.0))
        throw std::invalid_argument("DielectricModel::drude: sigma0 must be > 0");
    return DielectricModel(Drude{sigma0});
}

DielectricModel DielectricModel::lorentz(std::vector<LorentzTerm> terms) {
    for (const auto& t : terms) {
        if (!(t.strength >= 0.0) || !(t.omega0 > 0.0) || !(t.gamma > 0.0))
            throw std::invalid_argument(
                "DielectricModel::lorentz: need strength >= 0, omega0 > 0, gamma > 0");
    }
    return DielectricModel(Lorentz{std::move(terms)});
}

DielectricModel DielectricModel::tabulated(std::vector<TabPoint> points) {
    if (points.size() < 2)
        throw std::invalid_argument("DielectricModel::tabulated: need at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].omega > 0.0))
            throw std::invalid_argument("DielectricModel::tabulated: frequencies must be > 0");
        if (i > 0 && !(points[i].omega > points[i - 1].omega))
            throw std::invalid_argument("DielectricModel::tabulated: frequencies must increase");
        if (points[i].eps.imag() < 0.0)
            throw std::invalid_argument("DielectricModel::tabulated: Im eps < 0 violates passivity");
    }
    return DielectricModel(Tabulated{std::move(points)});
}

cdouble DielectricModel::epsilon(double omega) const {
    if (!(omega > 0.0))
        throw std::domain_error("DielectricModel::epsilon: omega must be > 0");
    if (const auto* d = std::get_if<Drude>(&model_))
        return {1.0, d->sigma0 / omega};
    if (const auto* l = std::get_if<Lorentz>(&model_)) {
        cdouble chi = 0.0;
        for (const auto& t : l->terms) {
            const double w0sq = t.omega0 * t.omega0;
            chi += t.strength * w0sq / cdouble(w0sq - omega * omega, -t.gamma * omega);
        }
        return 1.0 + chi;
    }
    const auto& pts = std::get<Tabulated>(model_).points;
    if (omega < pts.front().omega || omega > pts.back().omega) {
        std::ostringstream msg;
        msg << "DielectricModel::epsilon: omega " << omega << " outside tabulated range ["
            << pts.front().omega << ", " << pts.back().omega << "]";
        throw std::domain_error(msg.str());
    }
    auto hi = std::lower_bound(pts.begin(), pts.end(), omega,
                               [](const TabPoint& p, double w) { return p.omega < w; });
    if (hi == pts.begin()) return hi->eps;
    auto lo = hi - 1;
    const double f = (omega - lo->omega) / (hi->omega - lo->omega);
    return lo->eps + f * (hi->eps - lo->eps);
}

cdouble DielectricModel::epsilon_signed(double omega) const {
    if (omega == 0.0)
        throw std::domain_error("DielectricModel::epsilon_signed: omega must be nonzero");
    return omega > 0.0 ? epsilon(omega) : std::conj(epsilon(-omega));
}

DielectricModel DielectricModel::with_frequency_scale(double s) const {
    if (!(s > 0.0))
        throw std::invalid_argument("DielectricModel::with_frequency_scale: scale must be > 0");
    if (const auto* d = std::get_if<Drude>(&model_))
        return DielectricModel(Drude{d->sigma0 / s});
    if (const auto* l = std::get_if<Lorentz>(&model_)) {
        Lorentz out = *l;
        for (auto& t : out.terms) {
            t.omega0 /= s;
            t.gamma /= s;
        }
        return DielectricModel(std::move(out));
    }
    Tabulated out = std::get<Tabulated>(model_);
    for (auto& p : out.points) p.omega /= s;
    return DielectricModel(std::move(out));
}

DielectricModel load_tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_tabulated: cannot open '" + path + "'");
    std::vector<TabPoint> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double w, re, im;
        if (!(ss >> w >> re >> im)) {
            throw std::runtime_error("load_tabulated: parse error at " + path + ":" +
                                     std::to_string(lineno));
        }
        std::string extra;
        if (ss >> extra)
            throw std::runtime_error("load_tabulated: trailing junk at " + path + ":" +
                                     std::to_string(lineno));
        if (!(w > 0.0))
            throw std::runtime_error("load_tabulated: non-positive frequency at " + path + ":" +
                                     std::to_string(lineno));
        if (!pts.empty() && !(w > pts.back().omega))
            throw std::runtime_error("load_tabulated: frequencies must increase at " + path + ":" +
                                     std::to_string(lineno));
        if (im < 0.0)
            throw std::runtime_error("load_tabulated: Im eps < 0 (passivity) at " + path + ":" +
                                     std::to_string(lineno));
        pts.push_back({w, {re, im}});
    }
    return DielectricModel::tabulated(std::move(pts));
}

std::string kramers_kronig_warning(const DielectricModel& model) {
    const auto* tab = std::get_if<DielectricModel::Tabulated>(&model.raw());
    if (!tab) return {};
    const auto& pts = tab->points;
    if (pts.size() < 8) return {};
    // Truncated-range KK estimate of Re eps - 1 at a low-quartile frequency
    // (mid-table tends to sit on a resonance, where Re crosses zero); the
    // missing tails make this rough, so only flag order-of-magnitude trouble.
    const double w = pts[pts.size() / 4].omega;
    double re_kk = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double nu0 = pts[i].omega, nu1 = pts[i + 1].omega;
        if (nu0 <= w && w <= nu1) continue;  // skip the pole panel
        const double f0 = nu0 * pts[i].eps.imag() / (nu0 * nu0 - w * w);
        const double f1 = nu1 * pts[i + 1].eps.imag() / (nu1 * nu1 - w * w);
        re_kk += 0.5 * (f0 + f1) * (nu1 - nu0);
    }
    re_kk *= 2.0 / 3.14159265358979323846;
    const double re_tab = pts[pts.size() / 4].eps.real() - 1.0;
    const double scale = std::max(std::abs(re_tab), std::abs(re_kk));
    if (scale > 1e-3 && std::abs(re_tab - re_kk) > 0.85 * scale)
        return "tabulated permittivity looks Kramers-Kronig inconsistent near omega = " +
               std::to_string(w);
    return {};
}

} // namespace spinrad
