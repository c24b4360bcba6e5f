#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <utility>

#include "spinrad/observables.hpp"
#include "spinrad/oracle.hpp"
#include "spinrad/scenario.hpp"
#include "spinrad/units.hpp"

namespace py = pybind11;
using namespace spinrad;

namespace {

template <typename Density, typename Member>
std::vector<double> channel(const std::vector<Density>& rows, Member Density::* field) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.*field);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radiative friction and rotational radiation of a small spinning "
              "particle near a planar surface";
    m.attr("__version__") = SPINRAD_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<QuadratureNonConvergence>(m, "NonConvergence");

    // units
    py::class_<UnitSystem>(m, "UnitSystem")
        .def_static("with_characteristic_frequency", &UnitSystem::with_characteristic_frequency,
                    py::arg("omega_c_rad_s"))
        .def_readonly("omega_c", &UnitSystem::omega_c)
        .def("frequency_in", &UnitSystem::frequency_in)
        .def("length_in", &UnitSystem::length_in)
        .def("temperature_in", &UnitSystem::temperature_in)
        .def("conductivity_in", &UnitSystem::conductivity_in)
        .def("frequency_out", &UnitSystem::frequency_out)
        .def("length_out", &UnitSystem::length_out)
        .def("temperature_out", &UnitSystem::temperature_out)
        .def("power_out", &UnitSystem::power_out)
        .def("torque_out", &UnitSystem::torque_out)
        .def("power_density_out", &UnitSystem::power_density_out)
        .def("torque_density_out", &UnitSystem::torque_density_out);

    // materials and response
    py::class_<LorentzTerm>(m, "LorentzTerm")
        .def(py::init<double, double, double>(), py::arg("strength"), py::arg("omega0"),
             py::arg("gamma"))
        .def_readwrite("strength", &LorentzTerm::strength)
        .def_readwrite("omega0", &LorentzTerm::omega0)
        .def_readwrite("gamma", &LorentzTerm::gamma);

    py::class_<DielectricModel>(m, "DielectricModel")
        .def_static("drude", &DielectricModel::drude, py::arg("sigma0"))
        .def_static("lorentz", &DielectricModel::lorentz, py::arg("terms"))
        .def_static(
            "tabulated",
            [](const std::vector<std::pair<double, cdouble>>& points) {
                std::vector<TabPoint> rows;
                rows.reserve(points.size());
                for (const auto& [w, eps] : points) rows.push_back({w, eps});
                return DielectricModel::tabulated(std::move(rows));
            },
            py::arg("points"), "points: list of (omega, complex eps) pairs, omega increasing")
        .def("epsilon", &DielectricModel::epsilon, py::arg("omega"));
    m.def("load_tabulated", &load_tabulated, py::arg("path"),
          "Read an omega, Re eps, Im eps table (internal units) from a text file");

    py::class_<BodySusceptibility>(m, "BodySusceptibility")
        .def_static("lorentz", &BodySusceptibility::lorentz, py::arg("terms"))
        .def_static("sphere", &BodySusceptibility::sphere, py::arg("material"))
        .def("chi_xx", &BodySusceptibility::chi_xx)
        .def("chi_zz", &BodySusceptibility::chi_zz)
        .def("im_chi_xx", &BodySusceptibility::im_chi_xx)
        .def("im_chi_zz", &BodySusceptibility::im_chi_zz);

    py::class_<Polarizability>(m, "Polarizability")
        .def_static("sphere", &Polarizability::sphere, py::arg("radius"), py::arg("material"))
        .def_property_readonly("radius", &Polarizability::radius)
        .def_property_readonly("volume", &Polarizability::volume)
        .def_property_readonly("susceptibility", &Polarizability::susceptibility)
        .def("im_alpha_xx", &Polarizability::im_alpha_xx)
        .def("im_alpha_zz", &Polarizability::im_alpha_zz);

    // geometry and Green functions
    py::class_<PlanarGeometry>(m, "PlanarGeometry")
        .def_static("vacuum", &PlanarGeometry::vacuum)
        .def_static("half_space", &PlanarGeometry::half_space, py::arg("material"), py::arg("z"))
        .def_static("conductor", &PlanarGeometry::conductor, py::arg("z"))
        .def_readonly("z", &PlanarGeometry::z);

    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init([](double rel_tol, double abs_tol, int max_refinements) {
                 return QuadratureConfig{rel_tol, abs_tol, max_refinements};
             }),
             py::arg("rel_tol") = 1e-6, py::arg("abs_tol") = 0.0,
             py::arg("max_refinements") = 4000)
        .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
        .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
        .def_readwrite("max_refinements", &QuadratureConfig::max_refinements);

    py::class_<ImGreenDiag>(m, "ImGreenDiag")
        .def_readonly("xx", &ImGreenDiag::xx)
        .def_readonly("yy", &ImGreenDiag::yy)
        .def_readonly("zz", &ImGreenDiag::zz);
    m.def(
        "im_green",
        [](const PlanarGeometry& g, double omega, const QuadratureConfig& cfg) {
            return im_green(g, omega, cfg);
        },
        py::arg("geometry"), py::arg("omega"), py::arg("cfg") = QuadratureConfig{},
        "Imaginary part of the scattered-plus-free Green tensor at the body");

    // observables
    py::class_<SpinningBody>(m, "SpinningBody")
        .def(py::init([](const Polarizability& pol, double T, double omega0) {
                 return SpinningBody{pol, T, omega0};
             }),
             py::arg("pol"), py::arg("T") = 0.0, py::arg("omega0") = 0.0)
        .def_readwrite("T", &SpinningBody::T)
        .def_readwrite("omega0", &SpinningBody::omega0)
        .def_readonly("pol", &SpinningBody::pol);

    py::class_<Environment>(m, "Environment")
        .def(py::init([](const PlanarGeometry& g, double T0) { return Environment{g, T0}; }),
             py::arg("geometry"), py::arg("T0") = 0.0)
        .def_readwrite("T0", &Environment::T0)
        .def_readonly("geometry", &Environment::geometry);

    m.def("point_dipole_warning", &point_dipole_warning, py::arg("body"));

    py::class_<PowerDensity>(m, "PowerDensity")
        .def_readonly("zz", &PowerDensity::zz)
        .def_readonly("xx_minus", &PowerDensity::xx_minus)
        .def_readonly("xx_plus", &PowerDensity::xx_plus)
        .def("total", &PowerDensity::total);

    py::class_<TorqueDensity>(m, "TorqueDensity")
        .def_readonly("plus", &TorqueDensity::plus)
        .def_readonly("minus", &TorqueDensity::minus)
        .def_readonly("p_part", &TorqueDensity::p_part)
        .def_readonly("e_part", &TorqueDensity::e_part)
        .def("total", &TorqueDensity::total);

    py::class_<IntegralResult>(m, "IntegralResult")
        .def_readonly("value", &IntegralResult::value)
        .def_readonly("error", &IntegralResult::error)
        .def_readonly("evaluations", &IntegralResult::evaluations);

    py::class_<TorqueResult>(m, "TorqueResult")
        .def_readonly("value", &TorqueResult::value)
        .def_readonly("error", &TorqueResult::error)
        .def_readonly("p_part", &TorqueResult::p_part)
        .def_readonly("e_part", &TorqueResult::e_part)
        .def_readonly("evaluations", &TorqueResult::evaluations);

    m.def(
        "power_spectral_density",
        [](const SpinningBody& b, const Environment& e, double w, const QuadratureConfig& cfg) {
            return power_spectral_density(b, e, w, cfg);
        },
        py::arg("body"), py::arg("env"), py::arg("omega"),
        py::arg("cfg") = QuadratureConfig{});
    m.def(
        "torque_spectral_density",
        [](const SpinningBody& b, const Environment& e, double w, const QuadratureConfig& cfg) {
            return torque_spectral_density(b, e, w, cfg);
        },
        py::arg("body"), py::arg("env"), py::arg("omega"),
        py::arg("cfg") = QuadratureConfig{});
    m.def("radiated_power", &radiated_power, py::arg("body"), py::arg("env"),
          py::arg("cfg") = QuadratureConfig{});
    m.def("friction_torque", &friction_torque, py::arg("body"), py::arg("env"),
          py::arg("cfg") = QuadratureConfig{});

    py::class_<SpectralResult>(m, "SpectralResult")
        .def_readonly("omega", &SpectralResult::omega)
        .def_readonly("total_power", &SpectralResult::total_power)
        .def_readonly("total_torque", &SpectralResult::total_torque)
        .def_property_readonly("dP_domega",
                               [](const SpectralResult& s) {
                                   std::vector<double> out;
                                   for (const auto& d : s.dP_domega) out.push_back(d.total());
                                   return out;
                               })
        .def_property_readonly("dM_domega",
                               [](const SpectralResult& s) {
                                   std::vector<double> out;
                                   for (const auto& d : s.dM_domega) out.push_back(d.total());
                                   return out;
                               })
        .def_property_readonly(
            "dP_zz", [](const SpectralResult& s) { return channel(s.dP_domega, &PowerDensity::zz); })
        .def_property_readonly("dP_xx_minus",
                               [](const SpectralResult& s) {
                                   return channel(s.dP_domega, &PowerDensity::xx_minus);
                               })
        .def_property_readonly("dP_xx_plus",
                               [](const SpectralResult& s) {
                                   return channel(s.dP_domega, &PowerDensity::xx_plus);
                               })
        .def_property_readonly(
            "dM_plus",
            [](const SpectralResult& s) { return channel(s.dM_domega, &TorqueDensity::plus); })
        .def_property_readonly(
            "dM_minus",
            [](const SpectralResult& s) { return channel(s.dM_domega, &TorqueDensity::minus); });
    m.def("spectrum", &spectrum, py::arg("body"), py::arg("env"), py::arg("omega_grid"),
          py::arg("cfg") = QuadratureConfig{});

    // discrete-bath oracle
    py::enum_<BathChannel>(m, "BathChannel")
        .value("xx", BathChannel::xx)
        .value("zz", BathChannel::zz);

    py::class_<DiscreteBath>(m, "DiscreteBath")
        .def_readonly("nu_grid", &DiscreteBath::nu_grid)
        .def_readonly("weights", &DiscreteBath::weights)
        .def_readonly("f_xx", &DiscreteBath::f_xx)
        .def_readonly("f_zz", &DiscreteBath::f_zz)
        .def_readonly("m", &DiscreteBath::m)
        .def_readonly("omega0", &DiscreteBath::omega0)
        .def_readonly("eta", &DiscreteBath::eta)
        .def("__len__", &DiscreteBath::size);

    m.def("log_grid", &log_grid, py::arg("nu_min"), py::arg("nu_max"), py::arg("n"));
    m.def("trapezoid_weights", &trapezoid_weights, py::arg("grid"));
    m.def("couplings_from_chi", &couplings_from_chi, py::arg("chi0"), py::arg("nu_grid"),
          py::arg("weights"), py::arg("m") = 0, py::arg("omega0") = 0.0, py::arg("eta") = 1e-3);
    m.def("reconstruct_chi0", &reconstruct_chi0, py::arg("bath"), py::arg("channel"),
          py::arg("s"));
    m.def("thermal_mode_spectrum", &thermal_mode_spectrum, py::arg("bath"), py::arg("channel"),
          py::arg("x"), py::arg("T"));

    py::class_<GammaReport>(m, "GammaReport")
        .def_property_readonly("max_rel", &GammaReport::max_rel)
        .def("text", &GammaReport::text);
    m.def("verify_gamma", &verify_gamma, py::arg("bath"), py::arg("T"), py::arg("omega"),
          py::arg("m"));

    // scenario front end (the CLI's run / verify / print-defaults as a library)
    py::class_<ScenarioConfig>(m, "Config")
        .def("json", [](const ScenarioConfig& c, int indent) { return serialize_config(c, indent); },
             py::arg("indent") = 2)
        .def_property_readonly("hash", &config_hash)
        .def("__repr__", [](const ScenarioConfig& c) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "<spinrad.Config %016llx>",
                          static_cast<unsigned long long>(config_hash(c)));
            return std::string(buf);
        });

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("points", &RunResult::points)
        .def_readonly("failed", &RunResult::failed)
        .def_readonly("csv_path", &RunResult::csv_path)
        .def_readonly("summary", &RunResult::summary)
        .def_readonly("warnings", &RunResult::warnings);

    py::class_<VerifyResult>(m, "VerifyResult")
        .def_readonly("pass_", &VerifyResult::pass)
        .def_readonly("worst_rel", &VerifyResult::worst_rel)
        .def_readonly("worst", &VerifyResult::worst)
        .def_readonly("report", &VerifyResult::report);

    m.def("default_config", &default_config);
    m.def("parse_config", &parse_config, py::arg("json_text"));
    m.def("load_config_file", &load_config_file, py::arg("path"));
    m.def("run_scenario", &run_scenario, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("verify_scenario", &verify_scenario, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
