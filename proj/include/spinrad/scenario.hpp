#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinrad {

/// Configuration problem (parse, type, range, or file error) with the
/// offending field path; what() already includes the path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Permittivity model selection as written in a config file (SI quantities).
struct MaterialSpec {
    enum class Model { Drude, Lorentz, Tabulated };
    struct LorentzTermSI {
        double strength = 1.0;
        double omega0_rad_s = 1e12;
        double gamma_rad_s = 5e10;
    };
    Model model = Model::Drude;
    double sigma0_S_per_m = 1.6e7;      // Drude
    std::vector<LorentzTermSI> terms;   // Lorentz
    std::string table_path;             // Tabulated
};

/// Sweep grid: either an explicit increasing list or a generated range.
struct GridSpec {
    std::vector<double> values;  // explicit grid when non-empty (SI)
    double min = 1e-7;
    double max = 1e-4;
    int points = 16;
    bool log_spacing = true;

    /// The realized SI grid (copies values or generates the range).
    std::vector<double> realize() const;
};

enum class GeometryKind { Vacuum, HalfSpace, Conductor };
enum class SweepKind { Separation, Spectrum, TorqueCurve };

struct ScenarioConfig {
    struct Units {
        double omega_c_rad_s = 1e12;
    } units;

    struct Body {
        double radius_m = 1e-8;
        double T_K = 10.0;
        double omega0_rad_s = 0.0;
        MaterialSpec material;
    } body;

    struct Env {
        GeometryKind geometry = GeometryKind::Conductor;
        std::optional<double> z_m;            // fixed separation; set by the grid for separation sweeps
        double T0_K = 1.0;
        std::optional<MaterialSpec> material; // half-space only
    } environment;

    struct Sweep {
        SweepKind kind = SweepKind::Separation;
        GridSpec grid;
    } sweep;

    struct Quadrature {
        double rel_tol = 1e-6;
        double abs_tol = 0.0;  // internal units
        int max_refinements = 4000;
    } quadrature;

    struct Oracle {
        int modes = 4000;
        double eta = 1e-3;
        std::optional<double> nu_min_rad_s;  // bath span; derived from the material when absent
        std::optional<double> nu_max_rad_s;
        double chi_tol = 0.01;
        double gamma_tol = 0.01;
        std::vector<double> probes_rad_s;    // verification frequencies; auto-chosen when empty
    } oracle;

    struct Output {
        std::string path = "spinrad_out.csv";
        int precision = 9;
    } output;
};

ScenarioConfig default_config();

/// Strict parse: unknown keys, wrong types, and out-of-range values all throw
/// ConfigError with the field path. Missing keys fall back to defaults.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config_file(const std::string& file_path);

/// Full validation (also called by run/verify).
void validate(const ScenarioConfig& cfg);

/// Canonical JSON (sorted keys; optional fields emitted only when set).
/// indent < 0 gives the compact form used for hashing.
std::string serialize_config(const ScenarioConfig& cfg, int indent = 2);

/// FNV-1a 64-bit hash of the compact canonical serialization; stamped into
/// CSV metadata so outputs can be traced to their configs.
std::uint64_t config_hash(const ScenarioConfig& cfg);

/// Worker count for sweeps: SPINRAD_THREADS when set (1..256, else ConfigError),
/// otherwise the hardware count capped at 16.
int thread_count();

struct RunResult {
    std::size_t points = 0;
    std::size_t failed = 0;
    std::string csv_path;
    std::string summary;
    std::vector<std::string> warnings;
};

/// Executes the configured sweep and writes the CSV. Rows are computed in
/// parallel but always emitted in grid order with fixed formatting, so the
/// file is byte-identical for any worker count.
RunResult run_scenario(const ScenarioConfig& cfg);

struct VerifyResult {
    bool pass = false;
    double worst_rel = 0.0;
    std::string worst;   // label of the worst offender
    std::string report;  // plain-text comparison tables
};

/// Discrete-mode closure checks of the body response: susceptibility
/// reconstruction, two-path noise-kernel comparison, and the azimuthal shift
/// identity, against the thresholds in the oracle section.
VerifyResult verify_scenario(const ScenarioConfig& cfg);

} // namespace spinrad
