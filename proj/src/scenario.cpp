#include "spinrad/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "spinrad/observables.hpp"
#include "spinrad/oracle.hpp"
#include "spinrad/units.hpp"

namespace spinrad {

namespace {

using njson = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
}

void expect_object(const njson& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const njson& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(path + "." + it.key(), "unknown key");
    }
}

double get_number(const njson& o, const std::string& path, const char* key, double def) {
    if (!o.contains(key)) return def;
    const auto& v = o.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double require_number(const njson& o, const std::string& path, const char* key) {
    if (!o.contains(key)) fail(path + "." + key, "missing required key");
    return get_number(o, path, key, 0.0);
}

int get_integer(const njson& o, const std::string& path, const char* key, int def) {
    if (!o.contains(key)) return def;
    const auto& v = o.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const njson& o, const std::string& path, const char* key,
                       const char* def) {
    if (!o.contains(key)) {
        if (def) return def;
        fail(path + "." + key, "missing required key");
    }
    const auto& v = o.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const njson& o, const std::string& path, const char* key) {
    const auto& v = o.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

MaterialSpec parse_material(const njson& o, const std::string& path) {
    expect_object(o, path);
    MaterialSpec m;
    const std::string model = get_string(o, path, "model", nullptr);
    if (model == "drude") {
        reject_unknown(o, path, {"model", "sigma0_S_per_m"});
        m.model = MaterialSpec::Model::Drude;
        m.sigma0_S_per_m = get_number(o, path, "sigma0_S_per_m", m.sigma0_S_per_m);
    } else if (model == "lorentz") {
        reject_unknown(o, path, {"model", "terms"});
        m.model = MaterialSpec::Model::Lorentz;
        if (!o.contains("terms")) fail(path + ".terms", "missing required key");
        const auto& terms = o.at("terms");
        if (!terms.is_array() || terms.empty())
            fail(path + ".terms", "expected a non-empty array");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tpath = path + ".terms[" + std::to_string(i) + "]";
            expect_object(terms[i], tpath);
            reject_unknown(terms[i], tpath, {"strength", "omega0_rad_s", "gamma_rad_s"});
            MaterialSpec::LorentzTermSI t;
            t.strength = require_number(terms[i], tpath, "strength");
            t.omega0_rad_s = require_number(terms[i], tpath, "omega0_rad_s");
            t.gamma_rad_s = require_number(terms[i], tpath, "gamma_rad_s");
            m.terms.push_back(t);
        }
    } else if (model == "tabulated") {
        reject_unknown(o, path, {"model", "path"});
        m.model = MaterialSpec::Model::Tabulated;
        m.table_path = get_string(o, path, "path", nullptr);
    } else {
        fail(path + ".model", "expected \"drude\", \"lorentz\" or \"tabulated\"");
    }
    return m;
}

const char* grid_suffix(SweepKind kind) {
    return kind == SweepKind::Separation ? "_m" : "_rad_s";
}

GridSpec parse_grid(const njson& o, const std::string& path, SweepKind kind) {
    expect_object(o, path);
    const std::string suffix = grid_suffix(kind);
    const std::string other = kind == SweepKind::Separation ? "_rad_s" : "_m";
    for (const char* stem : {"values", "min", "max"})
        if (o.contains(stem + other))
            fail(path + "." + stem + other,
                 "wrong unit suffix for this sweep kind (expected " + std::string(stem) + suffix +
                     ")");
    GridSpec g;
    const std::string values_key = "values" + suffix;
    if (o.contains(values_key)) {
        for (const char* k : {"min_m", "max_m", "min_rad_s", "max_rad_s", "points", "spacing"})
            if (o.contains(k))
                fail(path + "." + k, "cannot combine an explicit values grid with range keys");
        reject_unknown(o, path, {"values_m", "values_rad_s"});
        g.values = get_number_array(o, path, values_key.c_str());
        if (g.values.empty()) fail(path + "." + values_key, "expected a non-empty array");
    } else {
        reject_unknown(o, path, {"min_m", "max_m", "min_rad_s", "max_rad_s", "points", "spacing"});
        g.min = require_number(o, path, ("min" + suffix).c_str());
        g.max = require_number(o, path, ("max" + suffix).c_str());
        g.points = get_integer(o, path, "points", g.points);
        const std::string spacing = get_string(o, path, "spacing", "log");
        if (spacing == "log")
            g.log_spacing = true;
        else if (spacing == "linear")
            g.log_spacing = false;
        else
            fail(path + ".spacing", "expected \"log\" or \"linear\"");
    }
    return g;
}

void validate_material(const MaterialSpec& m, const std::string& path) {
    switch (m.model) {
    case MaterialSpec::Model::Drude:
        if (!(m.sigma0_S_per_m > 0.0)) fail(path + ".sigma0_S_per_m", "must be > 0");
        break;
    case MaterialSpec::Model::Lorentz:
        if (m.terms.empty()) fail(path + ".terms", "expected a non-empty array");
        for (std::size_t i = 0; i < m.terms.size(); ++i) {
            const std::string tpath = path + ".terms[" + std::to_string(i) + "]";
            const auto& t = m.terms[i];
            if (!(t.strength >= 0.0) || !std::isfinite(t.strength))
                fail(tpath + ".strength", "must be >= 0");
            if (!(t.omega0_rad_s > 0.0)) fail(tpath + ".omega0_rad_s", "must be > 0");
            if (!(t.gamma_rad_s > 0.0)) fail(tpath + ".gamma_rad_s", "must be > 0");
        }
        break;
    case MaterialSpec::Model::Tabulated:
        if (m.table_path.empty()) fail(path + ".path", "must be a non-empty file path");
        break;
    }
}

njson material_to_json(const MaterialSpec& m) {
    njson o;
    switch (m.model) {
    case MaterialSpec::Model::Drude:
        o["model"] = "drude";
        o["sigma0_S_per_m"] = m.sigma0_S_per_m;
        break;
    case MaterialSpec::Model::Lorentz: {
        o["model"] = "lorentz";
        njson arr = njson::array();
        for (const auto& t : m.terms)
            arr.push_back({{"strength", t.strength},
                           {"omega0_rad_s", t.omega0_rad_s},
                           {"gamma_rad_s", t.gamma_rad_s}});
        o["terms"] = std::move(arr);
        break;
    }
    case MaterialSpec::Model::Tabulated:
        o["model"] = "tabulated";
        o["path"] = m.table_path;
        break;
    }
    return o;
}

const char* geometry_name(GeometryKind g) {
    switch (g) {
    case GeometryKind::Vacuum: return "vacuum";
    case GeometryKind::HalfSpace: return "half_space";
    case GeometryKind::Conductor: return "conductor";
    }
    return "";
}

const char* sweep_name(SweepKind k) {
    switch (k) {
    case SweepKind::Separation: return "separation";
    case SweepKind::Spectrum: return "spectrum";
    case SweepKind::TorqueCurve: return "torque_curve";
    }
    return "";
}

// internal-unit realization of a validated config

DielectricModel material_internal(const MaterialSpec& m, const UnitSystem& us,
                                  const std::string& path) {
    switch (m.model) {
    case MaterialSpec::Model::Drude:
        return DielectricModel::drude(us.conductivity_in(m.sigma0_S_per_m));
    case MaterialSpec::Model::Lorentz: {
        std::vector<LorentzTerm> terms;
        terms.reserve(m.terms.size());
        for (const auto& t : m.terms)
            terms.push_back(
                {t.strength, us.frequency_in(t.omega0_rad_s), us.frequency_in(t.gamma_rad_s)});
        return DielectricModel::lorentz(std::move(terms));
    }
    case MaterialSpec::Model::Tabulated: break;
    }
    try {
        return load_tabulated(m.table_path).with_frequency_scale(us.omega_c);
    } catch (const std::exception& e) {
        fail(path + ".path", e.what());
    }
}

struct Realized {
    UnitSystem us;
    SpinningBody body;
    double T0 = 0.0;
    GeometryKind geom = GeometryKind::Vacuum;
    std::optional<DielectricModel> env_mat;
    std::optional<double> z_int;
    QuadratureConfig quad;
    std::vector<double> grid_si;
};

Realized realize(const ScenarioConfig& c) {
    const auto us = UnitSystem::with_characteristic_frequency(c.units.omega_c_rad_s);
    auto mat = material_internal(c.body.material, us, "body.material");
    SpinningBody body{Polarizability::sphere(us.length_in(c.body.radius_m), mat),
                      us.temperature_in(c.body.T_K), us.frequency_in(c.body.omega0_rad_s)};
    std::optional<DielectricModel> env_mat;
    if (c.environment.material)
        env_mat = material_internal(*c.environment.material, us, "environment.material");
    std::optional<double> z_int;
    if (c.environment.z_m) z_int = us.length_in(*c.environment.z_m);
    QuadratureConfig quad{c.quadrature.rel_tol, c.quadrature.abs_tol,
                          c.quadrature.max_refinements};
    return Realized{us,
                    std::move(body),
                    us.temperature_in(c.environment.T0_K),
                    c.environment.geometry,
                    std::move(env_mat),
                    z_int,
                    quad,
                    c.sweep.grid.realize()};
}

PlanarGeometry make_geometry(GeometryKind kind, const std::optional<DielectricModel>& mat,
                             double z) {
    switch (kind) {
    case GeometryKind::Vacuum: return PlanarGeometry::vacuum();
    case GeometryKind::HalfSpace: return PlanarGeometry::half_space(*mat, z);
    case GeometryKind::Conductor: return PlanarGeometry::conductor(z);
    }
    return PlanarGeometry::vacuum();
}

// CSV assembly

std::string fmt_g(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

struct Row {
    std::vector<double> cols;
    std::string error;  // empty = ok
};

std::string render_csv(const ScenarioConfig& cfg, const std::vector<const char*>& header,
                       const std::vector<Row>& rows) {
    std::string out;
    out += "# spinrad 0.1.0\n";
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    out += std::string("# config_hash = ") + hash + "\n";
    out += std::string("# sweep = ") + sweep_name(cfg.sweep.kind) + "\n";
    out += std::string("# geometry = ") + geometry_name(cfg.environment.geometry) + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += ',';
    }
    out += "error\n";
    for (const auto& r : rows) {
        for (double v : r.cols) {
            out += fmt_g(v, cfg.output.precision);
            out += ',';
        }
        out += r.error;
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("output.path", "cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) fail("output.path", "short write to '" + path + "'");
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::size_t nt = static_cast<std::size_t>(thread_count());
    nt = std::min(nt, n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

void merge_error(std::string& slot, const std::string& token) {
    if (token == "failed" || slot.empty()) slot = token;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

std::vector<double> GridSpec::realize() const {
    if (!values.empty()) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) fail("sweep.grid.values", "entries must be finite");
            if (i > 0 && !(values[i] > values[i - 1]))
                fail("sweep.grid.values", "entries must be strictly increasing");
        }
        return values;
    }
    if (points < 2) fail("sweep.grid.points", "must be >= 2 (use values for a single point)");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        fail("sweep.grid", "need min < max");
    if (log_spacing && !(min > 0.0)) fail("sweep.grid", "log spacing needs min > 0");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double n1 = static_cast<double>(points - 1);
    if (log_spacing) {
        const double la = std::log(min), lb = std::log(max);
        for (int i = 0; i < points; ++i)
            g[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / n1);
    } else {
        for (int i = 0; i < points; ++i)
            g[static_cast<std::size_t>(i)] = min + (max - min) * i / n1;
    }
    g.front() = min;
    g.back() = max;
    return g;
}

ScenarioConfig default_config() { return {}; }

ScenarioConfig parse_config(const std::string& json_text) {
    njson j;
    try {
        j = njson::parse(json_text);
    } catch (const njson::parse_error& e) {
        fail("$", std::string("invalid JSON: ") + e.what());
    }
    expect_object(j, "$");
    reject_unknown(j, "$",
                   {"units", "body", "environment", "sweep", "quadrature", "oracle", "output"});
    ScenarioConfig c;

    if (j.contains("units")) {
        const auto& o = j.at("units");
        expect_object(o, "units");
        reject_unknown(o, "units", {"omega_c_rad_s"});
        c.units.omega_c_rad_s = get_number(o, "units", "omega_c_rad_s", c.units.omega_c_rad_s);
    }

    if (j.contains("body")) {
        const auto& o = j.at("body");
        expect_object(o, "body");
        reject_unknown(o, "body", {"radius_m", "T_K", "omega0_rad_s", "material"});
        c.body.radius_m = get_number(o, "body", "radius_m", c.body.radius_m);
        c.body.T_K = get_number(o, "body", "T_K", c.body.T_K);
        c.body.omega0_rad_s = get_number(o, "body", "omega0_rad_s", c.body.omega0_rad_s);
        if (o.contains("material")) c.body.material = parse_material(o.at("material"), "body.material");
    }

    // sweep first: the grid key suffixes depend on the kind
    if (j.contains("sweep")) {
        const auto& o = j.at("sweep");
        expect_object(o, "sweep");
        reject_unknown(o, "sweep", {"kind", "grid"});
        const std::string kind = get_string(o, "sweep", "kind", "separation");
        if (kind == "separation")
            c.sweep.kind = SweepKind::Separation;
        else if (kind == "spectrum")
            c.sweep.kind = SweepKind::Spectrum;
        else if (kind == "torque_curve")
            c.sweep.kind = SweepKind::TorqueCurve;
        else
            fail("sweep.kind", "expected \"separation\", \"spectrum\" or \"torque_curve\"");
        if (o.contains("grid"))
            c.sweep.grid = parse_grid(o.at("grid"), "sweep.grid", c.sweep.kind);
        else if (c.sweep.kind != SweepKind::Separation)
            fail("sweep.grid", "missing required key (no default grid for this sweep kind)");
    }

    if (j.contains("environment")) {
        const auto& o = j.at("environment");
        expect_object(o, "environment");
        reject_unknown(o, "environment", {"geometry", "z_m", "T0_K", "material"});
        const std::string g = get_string(o, "environment", "geometry", "conductor");
        if (g == "vacuum")
            c.environment.geometry = GeometryKind::Vacuum;
        else if (g == "half_space")
            c.environment.geometry = GeometryKind::HalfSpace;
        else if (g == "conductor")
            c.environment.geometry = GeometryKind::Conductor;
        else
            fail("environment.geometry", "expected \"vacuum\", \"half_space\" or \"conductor\"");
        if (o.contains("z_m")) c.environment.z_m = require_number(o, "environment", "z_m");
        c.environment.T0_K = get_number(o, "environment", "T0_K", c.environment.T0_K);
        if (o.contains("material"))
            c.environment.material = parse_material(o.at("material"), "environment.material");
    }

    if (j.contains("quadrature")) {
        const auto& o = j.at("quadrature");
        expect_object(o, "quadrature");
        reject_unknown(o, "quadrature", {"rel_tol", "abs_tol", "max_refinements"});
        c.quadrature.rel_tol = get_number(o, "quadrature", "rel_tol", c.quadrature.rel_tol);
        c.quadrature.abs_tol = get_number(o, "quadrature", "abs_tol", c.quadrature.abs_tol);
        c.quadrature.max_refinements =
            get_integer(o, "quadrature", "max_refinements", c.quadrature.max_refinements);
    }

    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        expect_object(o, "oracle");
        reject_unknown(o, "oracle",
                       {"modes", "eta", "nu_min_rad_s", "nu_max_rad_s", "chi_tol", "gamma_tol",
                        "probes_rad_s"});
        c.oracle.modes = get_integer(o, "oracle", "modes", c.oracle.modes);
        c.oracle.eta = get_number(o, "oracle", "eta", c.oracle.eta);
        if (o.contains("nu_min_rad_s"))
            c.oracle.nu_min_rad_s = require_number(o, "oracle", "nu_min_rad_s");
        if (o.contains("nu_max_rad_s"))
            c.oracle.nu_max_rad_s = require_number(o, "oracle", "nu_max_rad_s");
        c.oracle.chi_tol = get_number(o, "oracle", "chi_tol", c.oracle.chi_tol);
        c.oracle.gamma_tol = get_number(o, "oracle", "gamma_tol", c.oracle.gamma_tol);
        if (o.contains("probes_rad_s"))
            c.oracle.probes_rad_s = get_number_array(o, "oracle", "probes_rad_s");
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        expect_object(o, "output");
        reject_unknown(o, "output", {"path", "precision"});
        c.output.path = get_string(o, "output", "path", c.output.path.c_str());
        c.output.precision = get_integer(o, "output", "precision", c.output.precision);
    }

    validate(c);
    return c;
}

ScenarioConfig load_config_file(const std::string& file_path) {
    std::ifstream f(file_path, std::ios::binary);
    if (!f) fail("$", "cannot open config file '" + file_path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void validate(const ScenarioConfig& c) {
    if (!(c.units.omega_c_rad_s > 0.0) || !std::isfinite(c.units.omega_c_rad_s))
        fail("units.omega_c_rad_s", "must be a positive number");
    if (!(c.body.radius_m > 0.0)) fail("body.radius_m", "must be > 0");
    if (!(c.body.T_K >= 0.0)) fail("body.T_K", "must be >= 0");
    if (!std::isfinite(c.body.omega0_rad_s)) fail("body.omega0_rad_s", "must be finite");
    validate_material(c.body.material, "body.material");

    if (!(c.environment.T0_K >= 0.0)) fail("environment.T0_K", "must be >= 0");
    if (c.environment.geometry == GeometryKind::HalfSpace) {
        if (!c.environment.material)
            fail("environment.material", "required for half_space geometry");
        validate_material(*c.environment.material, "environment.material");
    } else if (c.environment.material) {
        fail("environment.material", "only meaningful for half_space geometry");
    }
    if (c.sweep.kind == SweepKind::Separation) {
        if (c.environment.z_m)
            fail("environment.z_m", "set by the separation sweep grid, remove it");
    } else if (c.environment.geometry != GeometryKind::Vacuum) {
        if (!c.environment.z_m) fail("environment.z_m", "required for this sweep kind");
        if (!(*c.environment.z_m > 0.0)) fail("environment.z_m", "must be > 0");
    } else if (c.environment.z_m) {
        fail("environment.z_m", "not used with vacuum geometry");
    }

    const auto grid = c.sweep.grid.realize();
    if (c.sweep.kind != SweepKind::TorqueCurve)
        for (double v : grid)
            if (!(v > 0.0))
                fail("sweep.grid", c.sweep.kind == SweepKind::Separation
                                       ? "separations must be > 0"
                                       : "frequencies must be > 0");

    if (!(c.quadrature.rel_tol > 1e-12) || !(c.quadrature.rel_tol < 1e-2))
        fail("quadrature.rel_tol", "must lie in (1e-12, 1e-2)");
    if (!(c.quadrature.abs_tol >= 0.0)) fail("quadrature.abs_tol", "must be >= 0");
    if (c.quadrature.max_refinements < 1 || c.quadrature.max_refinements > 10000000)
        fail("quadrature.max_refinements", "must lie in [1, 1e7]");

    if (c.oracle.modes < 2 || c.oracle.modes > 10000000)
        fail("oracle.modes", "must lie in [2, 1e7]");
    if (!(c.oracle.eta > 0.0) || !(c.oracle.eta < 0.5))
        fail("oracle.eta", "must lie in (0, 0.5)");
    if (!(c.oracle.chi_tol > 0.0) || !(c.oracle.chi_tol < 1.0))
        fail("oracle.chi_tol", "must lie in (0, 1)");
    if (!(c.oracle.gamma_tol > 0.0) || !(c.oracle.gamma_tol < 1.0))
        fail("oracle.gamma_tol", "must lie in (0, 1)");
    if (c.oracle.nu_min_rad_s.has_value() != c.oracle.nu_max_rad_s.has_value())
        fail("oracle.nu_min_rad_s", "provide both bath bounds or neither");
    if (c.oracle.nu_min_rad_s &&
        (!(*c.oracle.nu_min_rad_s > 0.0) || !(*c.oracle.nu_max_rad_s > *c.oracle.nu_min_rad_s)))
        fail("oracle.nu_min_rad_s", "need 0 < nu_min < nu_max");
    for (double p : c.oracle.probes_rad_s)
        if (!(p > 0.0) || !std::isfinite(p))
            fail("oracle.probes_rad_s", "probe frequencies must be positive");

    if (c.output.path.empty()) fail("output.path", "must be a non-empty file path");
    if (c.output.precision < 6 || c.output.precision > 17)
        fail("output.precision", "must lie in [6, 17]");
}

std::string serialize_config(const ScenarioConfig& c, int indent) {
    njson j;
    j["units"] = {{"omega_c_rad_s", c.units.omega_c_rad_s}};
    j["body"] = {{"radius_m", c.body.radius_m},
                 {"T_K", c.body.T_K},
                 {"omega0_rad_s", c.body.omega0_rad_s},
                 {"material", material_to_json(c.body.material)}};
    njson env;
    env["geometry"] = geometry_name(c.environment.geometry);
    env["T0_K"] = c.environment.T0_K;
    if (c.environment.z_m) env["z_m"] = *c.environment.z_m;
    if (c.environment.material) env["material"] = material_to_json(*c.environment.material);
    j["environment"] = std::move(env);
    njson grid;
    const std::string suffix = grid_suffix(c.sweep.kind);
    if (!c.sweep.grid.values.empty()) {
        grid["values" + suffix] = c.sweep.grid.values;
    } else {
        grid["min" + suffix] = c.sweep.grid.min;
        grid["max" + suffix] = c.sweep.grid.max;
        grid["points"] = c.sweep.grid.points;
        grid["spacing"] = c.sweep.grid.log_spacing ? "log" : "linear";
    }
    j["sweep"] = {{"kind", sweep_name(c.sweep.kind)}, {"grid", std::move(grid)}};
    j["quadrature"] = {{"rel_tol", c.quadrature.rel_tol},
                       {"abs_tol", c.quadrature.abs_tol},
                       {"max_refinements", c.quadrature.max_refinements}};
    njson oracle;
    oracle["modes"] = c.oracle.modes;
    oracle["eta"] = c.oracle.eta;
    oracle["chi_tol"] = c.oracle.chi_tol;
    oracle["gamma_tol"] = c.oracle.gamma_tol;
    if (c.oracle.nu_min_rad_s) oracle["nu_min_rad_s"] = *c.oracle.nu_min_rad_s;
    if (c.oracle.nu_max_rad_s) oracle["nu_max_rad_s"] = *c.oracle.nu_max_rad_s;
    if (!c.oracle.probes_rad_s.empty()) oracle["probes_rad_s"] = c.oracle.probes_rad_s;
    j["oracle"] = std::move(oracle);
    j["output"] = {{"path", c.output.path}, {"precision", c.output.precision}};
    return indent < 0 ? j.dump() : j.dump(indent);
}

std::uint64_t config_hash(const ScenarioConfig& c) {
    const std::string text = serialize_config(c, -1);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char byte : text) {
        h ^= byte;
        h *= 1099511628211ull;
    }
    return h;
}

int thread_count() {
    if (const char* s = std::getenv("SPINRAD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (*s == '\0' || *end != '\0' || v < 1 || v > 256)
            fail("SPINRAD_THREADS", "must be an integer in [1, 256]");
        return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

namespace {

std::string count_summary(const ScenarioConfig& cfg, std::size_t points, std::size_t failed) {
    std::string s = sweep_name(cfg.sweep.kind);
    s += " sweep: " + std::to_string(points) + " points, " + std::to_string(failed) + " failed";
    return s;
}

void collect_warnings(const Realized& R, const ScenarioConfig& cfg, double max_abs_omega0_int,
                      std::vector<std::string>& out) {
    SpinningBody probe = R.body;
    probe.omega0 = max_abs_omega0_int;
    const std::string w = point_dipole_warning(probe);
    if (!w.empty()) out.push_back(w);
    if (cfg.body.material.model == MaterialSpec::Model::Tabulated) {
        const std::string k =
            kramers_kronig_warning(material_internal(cfg.body.material, R.us, "body.material"));
        if (!k.empty()) out.push_back("body.material: " + k);
    }
    if (cfg.environment.material &&
        cfg.environment.material->model == MaterialSpec::Model::Tabulated) {
        const std::string k = kramers_kronig_warning(
            material_internal(*cfg.environment.material, R.us, "environment.material"));
        if (!k.empty()) out.push_back("environment.material: " + k);
    }
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    const Realized R = realize(cfg);
    const std::size_t n = R.grid_si.size();
    std::vector<Row> rows(n);
    RunResult result;
    result.points = n;
    result.csv_path = cfg.output.path;

    std::vector<const char*> header;
    std::string summary_extra;

    if (cfg.sweep.kind == SweepKind::Separation) {
        header = {"z_m", "P_W", "P_vac_W", "M_N_m", "P_err_W", "M_err_N_m"};
        // vacuum reference is separation independent; compute it once
        double pvac = kNaN;
        std::string pvac_error;
        try {
            const Environment vac{PlanarGeometry::vacuum(), R.T0};
            pvac = R.us.power_out(radiated_power(R.body, vac, R.quad).value);
        } catch (const QuadratureNonConvergence& e) {
            pvac = R.us.power_out(e.partial_value[0]);
            pvac_error = "no_convergence";
        } catch (const std::exception&) {
            pvac_error = "failed";
        }
        parallel_for(n, [&](std::size_t i) {
            Row& r = rows[i];
            r.cols.assign(6, kNaN);
            r.cols[0] = R.grid_si[i];
            r.cols[2] = pvac;
            if (!pvac_error.empty()) merge_error(r.error, pvac_error);
            const Environment env{make_geometry(R.geom, R.env_mat, R.us.length_in(R.grid_si[i])),
                                  R.T0};
            try {
                const auto P = radiated_power(R.body, env, R.quad);
                r.cols[1] = R.us.power_out(P.value);
                r.cols[4] = R.us.power_out(P.error);
            } catch (const QuadratureNonConvergence& e) {
                r.cols[1] = R.us.power_out(e.partial_value[0]);
                r.cols[4] = R.us.power_out(e.achieved_error[0]);
                merge_error(r.error, "no_convergence");
            } catch (const std::exception&) {
                merge_error(r.error, "failed");
            }
            try {
                const auto M = friction_torque(R.body, env, R.quad);
                r.cols[3] = R.us.torque_out(M.value);
                r.cols[5] = R.us.torque_out(M.error);
            } catch (const QuadratureNonConvergence& e) {
                r.cols[3] = R.us.torque_out(e.partial_value[0]);
                r.cols[5] = R.us.torque_out(e.achieved_error[0]);
                merge_error(r.error, "no_convergence");
            } catch (const std::exception&) {
                merge_error(r.error, "failed");
            }
        });
        collect_warnings(R, cfg, R.body.omega0, result.warnings);
    } else if (cfg.sweep.kind == SweepKind::TorqueCurve) {
        header = {"omega0_rad_s", "M_N_m", "M_err_N_m", "P_W", "P_err_W"};
        const Environment env{
            make_geometry(R.geom, R.env_mat, R.z_int.value_or(1.0)), R.T0};
        parallel_for(n, [&](std::size_t i) {
            Row& r = rows[i];
            r.cols.assign(5, kNaN);
            r.cols[0] = R.grid_si[i];
            SpinningBody body = R.body;
            body.omega0 = R.us.frequency_in(R.grid_si[i]);
            try {
                const auto M = friction_torque(body, env, R.quad);
                r.cols[1] = R.us.torque_out(M.value);
                r.cols[2] = R.us.torque_out(M.error);
            } catch (const QuadratureNonConvergence& e) {
                r.cols[1] = R.us.torque_out(e.partial_value[0]);
                r.cols[2] = R.us.torque_out(e.achieved_error[0]);
                merge_error(r.error, "no_convergence");
            } catch (const std::exception&) {
                merge_error(r.error, "failed");
            }
            try {
                const auto P = radiated_power(body, env, R.quad);
                r.cols[3] = R.us.power_out(P.value);
                r.cols[4] = R.us.power_out(P.error);
            } catch (const QuadratureNonConvergence& e) {
                r.cols[3] = R.us.power_out(e.partial_value[0]);
                r.cols[4] = R.us.power_out(e.achieved_error[0]);
                merge_error(r.error, "no_convergence");
            } catch (const std::exception&) {
                merge_error(r.error, "failed");
            }
        });
        double worst = 0.0;
        for (double v : R.grid_si) worst = std::max(worst, std::abs(R.us.frequency_in(v)));
        collect_warnings(R, cfg, worst, result.warnings);
    } else {
        header = {"omega_rad_s",  "dP_domega_W_s",     "dP_zz_W_s",
                  "dP_xx_minus_W_s", "dP_xx_plus_W_s", "dM_domega_N_m_s",
                  "dM_plus_N_m_s", "dM_minus_N_m_s"};
        const Environment env{
            make_geometry(R.geom, R.env_mat, R.z_int.value_or(1.0)), R.T0};
        parallel_for(n, [&](std::size_t i) {
            Row& r = rows[i];
            r.cols.assign(8, kNaN);
            r.cols[0] = R.grid_si[i];
            const double w = R.us.frequency_in(R.grid_si[i]);
            try {
                const auto g = im_green(env.geometry, w, R.quad);
                const auto pd = power_spectral_density(R.body, R.T0, g, w);
                const auto td = torque_spectral_density(R.body, R.T0, g, w);
                r.cols[1] = R.us.power_density_out(pd.total());
                r.cols[2] = R.us.power_density_out(pd.zz);
                r.cols[3] = R.us.power_density_out(pd.xx_minus);
                r.cols[4] = R.us.power_density_out(pd.xx_plus);
                r.cols[5] = R.us.torque_density_out(td.total());
                r.cols[6] = R.us.torque_density_out(td.plus);
                r.cols[7] = R.us.torque_density_out(td.minus);
            } catch (const QuadratureNonConvergence&) {
                merge_error(r.error, "no_convergence");
            } catch (const std::exception&) {
                merge_error(r.error, "failed");
            }
        });
        // adaptive totals for the summary line
        try {
            const auto P = radiated_power(R.body, env, R.quad);
            const auto M = friction_torque(R.body, env, R.quad);
            summary_extra = "; total P = " + fmt_g(R.us.power_out(P.value), 9) + " W +- " +
                            fmt_g(R.us.power_out(P.error), 3) + ", total M = " +
                            fmt_g(R.us.torque_out(M.value), 9) + " N m +- " +
                            fmt_g(R.us.torque_out(M.error), 3);
        } catch (const std::exception&) {
            summary_extra = "; totals not converged";
        }
        collect_warnings(R, cfg, R.body.omega0, result.warnings);
    }

    for (const auto& r : rows)
        if (!r.error.empty()) ++result.failed;

    write_file(cfg.output.path, render_csv(cfg, header, rows));
    result.summary =
        count_summary(cfg, result.points, result.failed) + summary_extra + " -> " + cfg.output.path;
    return result;
}

// verification driver

namespace {

struct CheckRow {
    std::string label;
    double analytic = 0.0;
    double oracle = 0.0;
    double rel = 0.0;
};

double peak_frequency(const MaterialSpec& m, const DielectricModel& internal,
                      const UnitSystem& us) {
    switch (m.model) {
    case MaterialSpec::Model::Drude: return us.conductivity_in(m.sigma0_S_per_m) / 3.0;
    case MaterialSpec::Model::Lorentz: {
        const MaterialSpec::LorentzTermSI* best = &m.terms.front();
        for (const auto& t : m.terms)
            if (t.strength > best->strength) best = &t;
        return us.frequency_in(best->omega0_rad_s);
    }
    case MaterialSpec::Model::Tabulated: {
        const auto& tab = std::get<DielectricModel::Tabulated>(internal.raw());
        return std::sqrt(tab.points.front().omega * tab.points.back().omega);
    }
    }
    return 1.0;
}

} // namespace

VerifyResult verify_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    const auto us = UnitSystem::with_characteristic_frequency(cfg.units.omega_c_rad_s);
    const auto mat = material_internal(cfg.body.material, us, "body.material");
    const auto chi = BodySusceptibility::sphere(mat);
    const double T = us.temperature_in(cfg.body.T_K);
    const double omega0 = us.frequency_in(cfg.body.omega0_rad_s);
    const bool lorentz = cfg.body.material.model == MaterialSpec::Model::Lorentz;
    const bool drude = cfg.body.material.model == MaterialSpec::Model::Drude;

    const double peak = peak_frequency(cfg.body.material, mat, us);

    double lo = 0.0, hi = 0.0;
    if (cfg.oracle.nu_min_rad_s) {
        lo = us.frequency_in(*cfg.oracle.nu_min_rad_s);
        hi = us.frequency_in(*cfg.oracle.nu_max_rad_s);
    } else if (drude) {
        // the flat large-nu coupling tail of a conducting sphere converges
        // slowly; push the upper edge out further than for bound resonances
        lo = peak / 100.0;
        hi = peak * 300.0;
    } else if (lorentz) {
        double wmin = std::numeric_limits<double>::infinity(), wmax = 0.0;
        for (const auto& t : cfg.body.material.terms) {
            wmin = std::min(wmin, us.frequency_in(t.omega0_rad_s));
            wmax = std::max(wmax, us.frequency_in(t.omega0_rad_s));
        }
        lo = wmin / 100.0;
        hi = wmax * 100.0;
    } else {
        const auto& tab = std::get<DielectricModel::Tabulated>(mat.raw());
        lo = tab.points.front().omega;
        hi = tab.points.back().omega;
    }

    // Resonance clearance for a probe or kernel argument: 5 linewidths for
    // narrow lines (the eta-broadened mode tails leak there), capped at half
    // the line frequency so broad oscillators keep usable probes, and never
    // below the eta smearing width itself.
    auto near_resonance = [&](double s) {
        if (!lorentz) return false;
        for (const auto& t : cfg.body.material.terms) {
            const double w0 = us.frequency_in(t.omega0_rad_s);
            const double window =
                std::max(std::min(5.0 * us.frequency_in(t.gamma_rad_s), 0.5 * w0),
                         30.0 * cfg.oracle.eta * w0);
            if (std::abs(s - w0) < window) return true;
        }
        return false;
    };

    // probe frequencies: explicit, or multiples of the peak dodging resonances
    std::vector<double> probes;
    if (!cfg.oracle.probes_rad_s.empty()) {
        for (double p : cfg.oracle.probes_rad_s) {
            const double s = us.frequency_in(p);
            if (!(s > lo && s < hi))
                fail("oracle.probes_rad_s", "probe " + fmt_g(p, 6) + " outside the bath span");
            probes.push_back(s);
        }
    } else {
        // far-tail probes lose accuracy when T amplifies the low-frequency
        // mode tails (direct kernel saturates, tail pickup grows with T), so
        // keep probes near the peak for hot bodies
        std::vector<double> mult = drude ? std::vector<double>{0.12, 0.2, 0.33, 0.55, 0.8, 1.2}
                                         : std::vector<double>{0.15, 0.3, 0.5, 0.7, 1.35, 1.9};
        if (!drude && T <= peak) {
            mult.push_back(2.8);
            mult.push_back(4.2);
        }
        for (double f : mult) {
            const double s = f * peak;
            if (!(s > lo * 1.05 && s < hi * 0.95)) continue;
            if (!near_resonance(s)) probes.push_back(s);
        }
        if (probes.empty())
            fail("oracle.probes_rad_s", "no usable auto probes; provide probes_rad_s");
    }

    const auto grid = log_grid(lo, hi, static_cast<std::size_t>(cfg.oracle.modes));
    auto weights = trapezoid_weights(grid);
    const auto bath = couplings_from_chi(chi, grid, std::move(weights), 0, omega0, cfg.oracle.eta);

    std::vector<CheckRow> chi_rows, gamma_rows;
    std::string report;

    // susceptibility reconstruction, real part against the closed form
    for (const BathChannel ch : {BathChannel::xx, BathChannel::zz}) {
        const char* name = ch == BathChannel::xx ? "chi_xx" : "chi_zz";
        for (double s : probes) {
            const cdouble exact = ch == BathChannel::xx ? chi.chi_xx(s) : chi.chi_zz(s);
            const cdouble rec = reconstruct_chi0(bath, ch, s);
            double denom = std::abs(exact.real());
            if (denom < 0.05 * std::abs(exact)) denom = std::abs(exact);
            CheckRow row;
            row.label = std::string(name) + " recon @ s = " + fmt_g(s, 4);
            row.analytic = exact.real();
            row.oracle = rec.real();
            row.rel = denom == 0.0 ? 0.0 : std::abs(exact.real() - rec.real()) / denom;
            chi_rows.push_back(std::move(row));
        }
    }

    // two-path noise kernels over (omega, m, T) combinations
    std::vector<double> temps{T};
    if (T != 0.0) temps.insert(temps.begin(), 0.0);
    // m only enters through m * omega0, so a non-rotating body needs one index
    const std::vector<int> ms = bath.omega0 == 0.0 ? std::vector<int>{0}
                                                   : std::vector<int>{-1, 0, 1};
    bool positivity_ok = true;
    std::string positivity_where;
    for (double Tc : temps)
        for (int m : ms)
            for (double w : probes) {
                const double shift = m * bath.omega0;
                const double args[3] = {shift - (w + bath.omega0), shift - (w - bath.omega0),
                                        shift - w};
                bool usable = true;
                for (double a : args) {
                    if (std::abs(a) < 1e-3 * peak) usable = false;
                    if (near_resonance(std::abs(a))) usable = false;
                }
                if (!usable) continue;
                const auto rep = verify_gamma(bath, Tc, w, m);
                for (const auto& r : rep.rows) {
                    CheckRow row;
                    row.label = r.component + " @ omega = " + fmt_g(w, 4) +
                                ", m = " + std::to_string(m) + ", T = " + fmt_g(Tc, 4);
                    row.analytic = r.component == "Gamma_xy" ? r.analytic.imag() : r.analytic.real();
                    row.oracle = r.component == "Gamma_xy" ? r.oracle.imag() : r.oracle.real();
                    row.rel = r.rel;
                    gamma_rows.push_back(std::move(row));
                    if (r.component == "Gamma_zz" &&
                        (r.analytic.real() < 0.0 || r.oracle.real() < 0.0)) {
                        positivity_ok = false;
                        positivity_where = row.label;
                    }
                }
            }

    // azimuthal shift identity on the lab-frame tensors
    double shift_dev = 0.0;
    {
        DiscreteBath a = bath, b = bath;
        const double w0s = bath.omega0 != 0.0 ? bath.omega0 : 0.3 * peak;
        a.omega0 = b.omega0 = w0s;
        a.m = 0;
        b.m = 1;
        for (double w : {probes.front(), probes.back()}) {
            const auto ta = response_from_modes(a, w);
            const auto tb = response_from_modes(b, w + w0s);
            for (int r = 0; r < 3; ++r)
                for (int col = 0; col < 3; ++col) {
                    const double scale = std::max(std::abs(ta[r][col]), 1e-300);
                    shift_dev = std::max(shift_dev, std::abs(ta[r][col] - tb[r][col]) / scale);
                }
        }
    }

    // assemble the report and verdict
    char line[192];
    report += "susceptibility reconstruction (real part, mode sum vs closed form)\n";
    for (const auto& r : chi_rows) {
        std::snprintf(line, sizeof line, "  %-28s  %13.6g  %13.6g  rel %.3g\n", r.label.c_str(),
                      r.analytic, r.oracle, r.rel);
        report += line;
    }
    report += "noise kernels (closed form vs thermal mode sum)\n";
    for (const auto& r : gamma_rows) {
        std::snprintf(line, sizeof line, "  %-44s  %13.6g  %13.6g  rel %.3g\n", r.label.c_str(),
                      r.analytic, r.oracle, r.rel);
        report += line;
    }
    report += "shift identity max deviation: " + fmt_g(shift_dev, 3) + "\n";

    VerifyResult out;
    double worst_ratio = 0.0;
    auto consider = [&](const std::string& label, double rel, double tol) {
        const double ratio = rel / tol;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            out.worst = label;
            out.worst_rel = rel;
        }
    };
    for (const auto& r : chi_rows) consider(r.label, r.rel, cfg.oracle.chi_tol);
    for (const auto& r : gamma_rows) consider(r.label, r.rel, cfg.oracle.gamma_tol);
    consider("shift identity", shift_dev, 1e-12);
    out.pass = worst_ratio <= 1.0 && positivity_ok;
    if (!positivity_ok) {
        out.pass = false;
        report += "Gamma_zz positivity violated at " + positivity_where + "\n";
        if (out.worst.empty()) out.worst = "Gamma_zz positivity";
    }
    report += out.pass ? "PASS\n"
                       : "FAIL: worst offender " + out.worst + " rel = " + fmt_g(out.worst_rel, 3) +
                             "\n";
    out.report = std::move(report);
    return out;
}

} // namespace spinrad
