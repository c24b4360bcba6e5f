#include "spinrad/scenario.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace spinrad;

namespace {

std::string data_path(const char* name) {
    return std::string(SPINRAD_TEST_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

std::string error_path(const std::string& json) {
    try {
        parse_config(json);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

// small, fast vacuum separation sweep
std::string vacuum_sweep_json(const std::string& out) {
    return R"({
        "body": {"T_K": 30.0, "material": {"model": "drude", "sigma0_S_per_m": 1.0e7}},
        "environment": {"geometry": "vacuum", "T0_K": 0.0},
        "sweep": {"kind": "separation",
                  "grid": {"values_m": [1.0e-6, 2.0e-6, 4.0e-6]}},
        "quadrature": {"rel_tol": 1.0e-5},
        "output": {"path": ")" + out + R"("}
    })";
}

} // namespace

TEST_CASE("empty config is the default config") {
    const auto parsed = parse_config("{}");
    CHECK(serialize_config(parsed) == serialize_config(default_config()));
    CHECK(config_hash(parsed) == config_hash(default_config()));
}

TEST_CASE("serialization round trips") {
    auto cfg = default_config();
    cfg.body.omega0_rad_s = 3.2e11;
    cfg.environment.geometry = GeometryKind::HalfSpace;
    cfg.environment.material = MaterialSpec{};
    cfg.environment.z_m = 5e-7;
    cfg.sweep.kind = SweepKind::Spectrum;
    cfg.sweep.grid.values = {1e11, 2e11, 3e11};
    cfg.oracle.probes_rad_s = {2e12};
    const auto text = serialize_config(cfg);
    const auto reparsed = parse_config(text);
    CHECK(serialize_config(reparsed) == text);
    CHECK(config_hash(reparsed) == config_hash(cfg));
    // compact form for hashing is valid json too
    CHECK(serialize_config(parse_config(serialize_config(cfg, -1))) == text);
}

TEST_CASE("parse rejections carry the field path") {
    CHECK(error_path(R"({"bogus": 1})") == "$.bogus");
    CHECK(error_path(R"({"body": {"radius_nm": 3}})") == "body.radius_nm");
    CHECK(error_path(R"({"body": {"T_K": "hot"}})") == "body.T_K");
    CHECK(error_path(R"({"body": {"material": {"model": "metal"}}})") == "body.material.model");
    CHECK(error_path(R"({"quadrature": {"max_refinements": 2.5}})") ==
          "quadrature.max_refinements");
    CHECK(error_path("not json at all") == "$");
    CHECK(error_path(R"([1, 2])") == "$");
    CHECK(error_path(R"({"body": {"material": {"model": "lorentz"}}})") ==
          "body.material.terms");
    CHECK(error_path(R"({"body": {"material": {"model": "lorentz",
        "terms": [{"strength": 1.0}]}}})") == "body.material.terms[0].omega0_rad_s");
}

TEST_CASE("grid parsing") {
    SUBCASE("wrong unit suffix for the sweep kind") {
        const auto p = error_path(R"({"sweep": {"kind": "separation",
            "grid": {"min_rad_s": 1e11, "max_rad_s": 1e12}}})");
        CHECK(p == "sweep.grid.min_rad_s");
    }

    SUBCASE("values and range keys cannot mix") {
        const auto p = error_path(R"({"sweep": {"kind": "spectrum",
            "grid": {"values_rad_s": [1e11], "min_rad_s": 1e11, "max_rad_s": 1e12}}})");
        CHECK(p == "sweep.grid.min_rad_s");  // blames the first clashing range key
    }

    SUBCASE("non-separation sweeps have no default grid") {
        const auto p = error_path(R"({"sweep": {"kind": "spectrum"}})");
        CHECK(p == "sweep.grid");
    }

    SUBCASE("bad spacing name") {
        const auto p = error_path(R"({"sweep": {"kind": "separation",
            "grid": {"min_m": 1e-7, "max_m": 1e-5, "spacing": "cubic"}}})");
        CHECK(p == "sweep.grid.spacing");
    }
}

TEST_CASE("grid realization") {
    SUBCASE("log spacing hits both endpoints exactly") {
        GridSpec g;
        g.min = 1e-7;
        g.max = 1e-4;
        g.points = 7;
        g.log_spacing = true;
        const auto v = g.realize();
        REQUIRE(v.size() == 7);
        CHECK(v.front() == 1e-7);
        CHECK(v.back() == 1e-4);
        CHECK(v[2] / v[1] == doctest::Approx(v[1] / v[0]).epsilon(1e-12));
    }

    SUBCASE("linear spacing") {
        GridSpec g;
        g.min = 1.0;
        g.max = 3.0;
        g.points = 3;
        g.log_spacing = false;
        const auto v = g.realize();
        REQUIRE(v.size() == 3);
        CHECK(v[0] == 1.0);
        CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(v[2] == 3.0);
    }

    SUBCASE("explicit values pass through") {
        GridSpec g;
        g.values = {0.5, 1.5, 9.0};
        CHECK(g.realize() == std::vector<double>{0.5, 1.5, 9.0});
    }

    SUBCASE("validation") {
        GridSpec g;
        g.min = 2.0;
        g.max = 1.0;
        CHECK_THROWS_AS(g.realize(), ConfigError);
        g.max = 3.0;
        g.points = 1;
        CHECK_THROWS_AS(g.realize(), ConfigError);
        GridSpec dec;
        dec.values = {2.0, 1.0};
        CHECK_THROWS_AS(dec.realize(), ConfigError);
        GridSpec neglog;
        neglog.min = -1.0;
        neglog.max = 1.0;
        neglog.log_spacing = true;
        CHECK_THROWS_AS(neglog.realize(), ConfigError);
    }
}

TEST_CASE("validation rules") {
    auto base = default_config();

    SUBCASE("separation sweeps own the separation") {
        auto c = base;
        c.environment.z_m = 1e-6;
        CHECK_THROWS_AS(validate(c), ConfigError);
    }

    SUBCASE("fixed-geometry sweeps need a separation") {
        auto c = base;
        c.sweep.kind = SweepKind::Spectrum;
        c.sweep.grid.values = {1e12};
        CHECK_THROWS_AS(validate(c), ConfigError);
        c.environment.z_m = 1e-6;
        CHECK_NOTHROW(validate(c));
    }

    SUBCASE("vacuum has no separation") {
        auto c = base;
        c.sweep.kind = SweepKind::Spectrum;
        c.sweep.grid.values = {1e12};
        c.environment.geometry = GeometryKind::Vacuum;
        c.environment.z_m = 1e-6;
        CHECK_THROWS_AS(validate(c), ConfigError);
    }

    SUBCASE("half space requires a material, others refuse one") {
        auto c = base;
        c.environment.geometry = GeometryKind::HalfSpace;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c.environment.material = MaterialSpec{};
        CHECK_NOTHROW(validate(c));
        c.environment.geometry = GeometryKind::Conductor;
        CHECK_THROWS_AS(validate(c), ConfigError);
    }

    SUBCASE("range checks") {
        auto c = base;
        c.quadrature.rel_tol = 0.5;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.quadrature.rel_tol = 1e-13;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.output.precision = 5;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.output.precision = 18;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.oracle.eta = 0.0;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.oracle.nu_min_rad_s = 1e11;
        CHECK_THROWS_AS(validate(c), ConfigError);  // missing the upper bound
        c.oracle.nu_max_rad_s = 1e13;
        CHECK_NOTHROW(validate(c));
        c = base;
        c.body.radius_m = 0.0;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = base;
        c.sweep.grid.values = {0.0, 1e-6};
        CHECK_THROWS_AS(validate(c), ConfigError);
    }
}

TEST_CASE("config hash tracks content") {
    const auto a = default_config();
    auto b = default_config();
    CHECK(config_hash(a) == config_hash(b));
    b.body.radius_m = 1.1e-8;
    CHECK(config_hash(a) != config_hash(b));
    auto c = default_config();
    c.output.precision = 10;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("thread count environment override") {
    const char* saved = std::getenv("SPINRAD_THREADS");
    const std::string saved_copy = saved ? saved : "";

    setenv("SPINRAD_THREADS", "4", 1);
    CHECK(thread_count() == 4);
    setenv("SPINRAD_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    setenv("SPINRAD_THREADS", "0", 1);
    CHECK_THROWS_AS(thread_count(), ConfigError);
    setenv("SPINRAD_THREADS", "300", 1);
    CHECK_THROWS_AS(thread_count(), ConfigError);
    setenv("SPINRAD_THREADS", "abc", 1);
    CHECK_THROWS_AS(thread_count(), ConfigError);
    setenv("SPINRAD_THREADS", "4x", 1);
    CHECK_THROWS_AS(thread_count(), ConfigError);
    unsetenv("SPINRAD_THREADS");
    CHECK(thread_count() >= 1);
    CHECK(thread_count() <= 16);

    if (saved)
        setenv("SPINRAD_THREADS", saved_copy.c_str(), 1);
    else
        unsetenv("SPINRAD_THREADS");
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("vacuum separation sweep writes a well-formed csv") {
    const auto out = data_path("vac_sweep.csv");
    const auto cfg = parse_config(vacuum_sweep_json(out));
    const auto res = run_scenario(cfg);
    CHECK(res.points == 3);
    CHECK(res.failed == 0);
    CHECK(res.csv_path == out);
    CHECK(res.summary.find("separation sweep: 3 points, 0 failed") != std::string::npos);

    const auto csv = slurp(out);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "# spinrad 0.1.0");
    std::getline(lines, line);
    {
        char expect[64];
        std::snprintf(expect, sizeof expect, "# config_hash = %016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        CHECK(line == expect);
    }
    std::getline(lines, line);
    CHECK(line == "# sweep = separation");
    std::getline(lines, line);
    CHECK(line == "# geometry = vacuum");
    std::getline(lines, line);
    CHECK(line == "z_m,P_W,P_vac_W,M_N_m,P_err_W,M_err_N_m,error");

    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        // vacuum sweep: the power column equals the vacuum reference exactly
        std::istringstream cells(line);
        std::string z, p, pvac, m;
        std::getline(cells, z, ',');
        std::getline(cells, p, ',');
        std::getline(cells, pvac, ',');
        std::getline(cells, m, ',');
        CHECK(p == pvac);
        CHECK(m == "0");
        CHECK(line.back() == ',');  // clean rows leave the error field empty
    }
    CHECK(rows == 3);
}

TEST_CASE("csv is byte identical for any worker count") {
    // same config (and so same output path) both times; capture the file
    // between runs
    const auto out = data_path("threads_check.csv");
    const char* saved = std::getenv("SPINRAD_THREADS");
    const std::string saved_copy = saved ? saved : "";

    setenv("SPINRAD_THREADS", "1", 1);
    run_scenario(parse_config(vacuum_sweep_json(out)));
    const auto serial = slurp(out);
    setenv("SPINRAD_THREADS", "8", 1);
    run_scenario(parse_config(vacuum_sweep_json(out)));

    if (saved)
        setenv("SPINRAD_THREADS", saved_copy.c_str(), 1);
    else
        unsetenv("SPINRAD_THREADS");

    CHECK(slurp(out) == serial);
}

TEST_CASE("out-of-range tabulated material marks rows failed") {
    // table covers 0.5e12 .. 2e12 rad/s; the last grid point needs 3e12
    const auto table = data_path("narrow_eps.csv");
    write_text(table, "5.0e11, 2.0, 0.5\n2.0e12, 2.0, 0.5\n");
    const auto out = data_path("failed_rows.csv");
    const std::string json = R"({
        "body": {"T_K": 0.0, "omega0_rad_s": 0.0,
                 "material": {"model": "tabulated", "path": ")" + table + R"("}},
        "environment": {"geometry": "conductor", "z_m": 1.0e-5, "T0_K": 0.05},
        "sweep": {"kind": "spectrum",
                  "grid": {"values_rad_s": [8.0e11, 1.2e12, 3.0e12]}},
        "output": {"path": ")" + out + R"("}
    })";
    const auto res = run_scenario(parse_config(json));
    CHECK(res.points == 3);
    CHECK(res.failed == 1);

    const auto csv = slurp(out);
    std::istringstream lines(csv);
    std::string line;
    int failed_rows = 0, clean_rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("omega_rad_s", 0) == 0) continue;
        if (line.find("failed") != std::string::npos) {
            ++failed_rows;
            CHECK(line.find("nan") != std::string::npos);
        } else {
            ++clean_rows;
        }
    }
    CHECK(failed_rows == 1);
    CHECK(clean_rows == 2);
}

TEST_CASE("torque curve sweep brakes in both directions") {
    const auto out = data_path("torque_curve.csv");
    const std::string json = R"({
        "body": {"T_K": 0.0, "material": {"model": "lorentz",
                 "terms": [{"strength": 1.0, "omega0_rad_s": 1.0e12, "gamma_rad_s": 3.0e11}]}},
        "environment": {"geometry": "vacuum", "T0_K": 0.0},
        "sweep": {"kind": "torque_curve",
                  "grid": {"values_rad_s": [-2.0e11, 0.0, 2.0e11]}},
        "quadrature": {"rel_tol": 1.0e-5},
        "output": {"path": ")" + out + R"("}
    })";
    const auto res = run_scenario(parse_config(json));
    CHECK(res.failed == 0);

    std::vector<double> w0s, torques;
    std::istringstream lines(slurp(out));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("omega0_rad_s", 0) == 0) continue;
        std::istringstream cells(line);
        std::string c0, c1;
        std::getline(cells, c0, ',');
        std::getline(cells, c1, ',');
        w0s.push_back(std::stod(c0));
        torques.push_back(std::stod(c1));
    }
    REQUIRE(w0s.size() == 3);
    CHECK(torques[0] > 0.0);   // spin-up torque opposes negative rotation
    CHECK(torques[1] == 0.0);  // no rotation, no torque
    CHECK(torques[2] < 0.0);
    CHECK(torques[0] == -torques[2]);
}

TEST_CASE("verify runs clean on the default config") {
    auto cfg = default_config();
    const auto res = verify_scenario(cfg);
    CHECK(res.pass);
    CHECK(res.worst_rel < 0.01);
    CHECK(res.report.find("PASS") != std::string::npos);
    CHECK(res.report.find("chi_xx") != std::string::npos);
}

TEST_CASE("verify flags an impossible tolerance") {
    auto cfg = default_config();
    cfg.oracle.chi_tol = 1e-9;  // far below the discretization floor
    cfg.oracle.modes = 200;
    const auto res = verify_scenario(cfg);
    CHECK_FALSE(res.pass);
    CHECK(res.report.find("FAIL") != std::string::npos);
    CHECK_FALSE(res.worst.empty());
}
