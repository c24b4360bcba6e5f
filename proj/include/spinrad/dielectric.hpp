#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace spinrad {

using cdouble = std::complex<double>;

/// One Lorentz oscillator: chi contribution S * w0^2 / (w0^2 - w^2 - i g w).
struct LorentzTerm {
    double strength;   // dimensionless S >= 0
    double omega0;     // resonance frequency > 0
    double gamma;      // damping rate > 0
};

struct TabPoint {
    double omega;      // > 0, strictly increasing across the table
    cdouble eps;
};

/// Linear-response permittivity model, evaluated at positive frequency and
/// extended to signed frequency by eps(-w) = conj(eps(w)).
class DielectricModel {
public:
    struct Drude { double sigma0; };                       // eps = 1 + i sigma0/w (eps0 = 1)
    struct Lorentz { std::vector<LorentzTerm> terms; };    // eps = 1 + sum chi_j
    struct Tabulated { std::vector<TabPoint> points; };    // linear interpolation, no extrapolation

    static DielectricModel drude(double sigma0);
    static DielectricModel lorentz(std::vector<LorentzTerm> terms);
    static DielectricModel tabulated(std::vector<TabPoint> points);

    /// eps at omega > 0; throws std::domain_error for omega <= 0 or outside a table's range.
    cdouble epsilon(double omega) const;

    /// Conjugate-symmetric extension to omega != 0.
    cdouble epsilon_signed(double omega) const;

    /// Rescale all internal frequencies by 1/s (model built in SI, used in internal units).
    DielectricModel with_frequency_scale(double s) const;

    bool is_drude() const { return std::holds_alternative<Drude>(model_); }
    const std::variant<Drude, Lorentz, Tabulated>& raw() const { return model_; }

private:
    explicit DielectricModel(std::variant<Drude, Lorentz, Tabulated> m) : model_(std::move(m)) {}
    std::variant<Drude, Lorentz, Tabulated> model_;
};

/// Parse a tabulated-permittivity file: comma-separated "omega_rad_per_s, re_eps, im_eps"
/// rows, '#' comments and blank lines allowed. Throws std::runtime_error with the
/// offending line number on malformed rows, non-monotone frequencies, or Im eps < 0.
DielectricModel load_tabulated(const std::string& path);

/// Crude truncated-range Kramers-Kronig sanity check for user data. Returns a warning
/// message if the table looks badly inconsistent, empty string otherwise. Advisory only.
std::string kramers_kronig_warning(const DielectricModel& model);

} // namespace spinrad
