#include "spinrad/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace spinrad;

namespace {

constexpr double pi = 3.14159265358979323846;

SpinningBody drude_body(double sigma, double radius, double T, double omega0) {
    return SpinningBody{Polarizability::sphere(radius, DielectricModel::drude(sigma)), T, omega0};
}

SpinningBody lorentz_body(double radius, double T, double omega0) {
    return SpinningBody{
        Polarizability::sphere(radius, DielectricModel::lorentz({{1.0, 1.0, 0.3}})), T, omega0};
}

QuadratureConfig cfg6() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-6;
    return cfg;
}

} // namespace

TEST_CASE("point dipole warning") {
    auto body = drude_body(3.0, 1e-4, 1.0, 0.0);
    CHECK(point_dipole_warning(body).empty());
    body.omega0 = 200.0;
    CHECK_FALSE(point_dipole_warning(body).empty());
}

TEST_CASE("densities require positive frequency") {
    const auto body = drude_body(3.0, 1e-4, 1.0, 0.0);
    const Environment env{PlanarGeometry::vacuum(), 0.5};
    CHECK_THROWS_AS(power_spectral_density(body, env, 0.0, cfg6()), std::domain_error);
    CHECK_THROWS_AS(power_spectral_density(body, env, -1.0, cfg6()), std::domain_error);
    CHECK_THROWS_AS(torque_spectral_density(body, env, -1.0, cfg6()), std::domain_error);
}

TEST_CASE("equilibrium is exactly null") {
    // same temperature, no rotation: absorption and emission cancel term by
    // term in floating point, not merely to rounding
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> Tdist(0.05, 5.0), wdist(0.05, 4.0), zdist(0.3, 3.0),
        sdist(0.5, 20.0);
    for (int k = 0; k < 20; ++k) {
        const double T = Tdist(rng);
        const auto body = drude_body(sdist(rng), 1e-3, T, 0.0);
        const Environment env{k % 2 ? PlanarGeometry::vacuum()
                                    : PlanarGeometry::conductor(zdist(rng)),
                              T};
        const double w = wdist(rng);
        const auto p = power_spectral_density(body, env, w, cfg6());
        const auto m = torque_spectral_density(body, env, w, cfg6());
        CHECK(p.total() == 0.0);
        CHECK(p.zz == 0.0);
        CHECK(p.xx_minus == 0.0);
        CHECK(p.xx_plus == 0.0);
        CHECK(m.total() == 0.0);
    }
}

TEST_CASE("zero temperatures leave only the rotation window") {
    const double w0 = 1.5;
    const auto body = lorentz_body(1e-3, 0.0, w0);
    const Environment env{PlanarGeometry::vacuum(), 0.0};

    SUBCASE("no emission above omega0") {
        for (double w : {w0 * 1.0001, 2.0 * w0, 10.0 * w0}) {
            const auto p = power_spectral_density(body, env, w, cfg6());
            const auto m = torque_spectral_density(body, env, w, cfg6());
            CHECK(p.total() == 0.0);
            CHECK(m.total() == 0.0);
        }
    }

    SUBCASE("inside the window power is emitted and the torque brakes") {
        for (double w : {0.2 * w0, 0.5 * w0, 0.9 * w0}) {
            const auto p = power_spectral_density(body, env, w, cfg6());
            const auto m = torque_spectral_density(body, env, w, cfg6());
            CHECK(p.total() >= 0.0);
            CHECK(m.total() <= 0.0);
            CHECK(p.xx_minus > 0.0);
            CHECK(p.zz == 0.0);  // zz channel needs thermal occupation
        }
    }

    SUBCASE("totals integrate the window only") {
        const auto P = radiated_power(body, env, cfg6());
        const auto M = friction_torque(body, env, cfg6());
        CHECK(P.value > 0.0);
        CHECK(M.value < 0.0);
        // emitted power is paid for by the spin-down torque; for vacuum T=T0=0
        // every photon leaves through the minus channel below omega0
        CHECK(P.value <= w0 * std::abs(M.value) * (1.0 + 1e-9));
    }
}

TEST_CASE("torque is odd in the rotation frequency") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> w0dist(0.1, 2.0), Tdist(0.0, 2.0);
    for (int k = 0; k < 8; ++k) {
        const double w0 = w0dist(rng);
        const double T = Tdist(rng);
        auto body = lorentz_body(1e-3, T, w0);
        // equal temperatures on even draws: there the second law pins the sign
        // (a hotter environment may legitimately spin the body up)
        const Environment env{PlanarGeometry::vacuum(), k % 2 ? Tdist(rng) : T};
        const auto fwd = friction_torque(body, env, cfg6());
        body.omega0 = -w0;
        const auto bwd = friction_torque(body, env, cfg6());
        CHECK(fwd.value == -bwd.value);  // exact in floating point
        if (body.T == env.T0) CHECK(fwd.value * w0 <= 0.0);
    }
}

TEST_CASE("no rotation means no torque") {
    const auto body = drude_body(5.0, 1e-3, 2.0, 0.0);
    const Environment env{PlanarGeometry::conductor(0.8), 0.3};
    const auto m = friction_torque(body, env, cfg6());
    CHECK(m.value == 0.0);
    CHECK(m.p_part == 0.0);
    CHECK(m.e_part == 0.0);
}

TEST_CASE("torque channel regroupings agree") {
    const auto body = lorentz_body(1e-3, 0.7, 0.9);
    const Environment env{PlanarGeometry::conductor(1.2), 0.2};
    for (double w : {0.3, 0.9, 1.7}) {
        const auto m = torque_spectral_density(body, env, w, cfg6());
        CHECK(m.plus + m.minus == doctest::Approx(m.p_part + m.e_part).epsilon(1e-12));
    }
}

TEST_CASE("hot body in cold vacuum radiates the dipole formula") {
    // stationary sphere at temperature T: P = integral of
    // (omega^4 / pi) a_T(omega) Im alpha(omega) (2 xx + zz channels) with
    // Im G = omega/(6 pi); check against a dense trapezoid evaluation
    const double T = 1.3, sigma = 4.0, a = 2e-3;
    const auto body = drude_body(sigma, a, T, 0.0);
    const Environment env{PlanarGeometry::vacuum(), 0.0};
    const auto P = radiated_power(body, env, cfg6());

    const auto& chi = body.pol.susceptibility();
    const double V = body.pol.volume();
    double acc = 0.0;
    const int n = 200000;
    const double wmax = 60.0 * T;
    const double h = wmax / n;
    for (int i = 1; i <= n; ++i) {
        const double w = h * (i - 0.5);
        const double im_a = V * chi.im_chi_xx(w);
        const double coth_w = coth(w / (2.0 * T));
        // zz carries 2 g_zz, each circular channel carries g_xx + g_yy: six
        // vacuum Green weights in total
        const double green = w / (6.0 * pi);
        const double dp = (w * w * w / (2.0 * pi)) * 6.0 * green * im_a * (coth_w - 1.0);
        acc += dp * h;
    }
    CHECK(P.value == doctest::Approx(acc).epsilon(5e-3));
    CHECK(P.value > 0.0);
}

TEST_CASE("precomputed green overload matches the dispatching one") {
    const auto body = lorentz_body(1e-3, 0.6, 0.4);
    const Environment env{PlanarGeometry::conductor(0.9), 0.2};
    const double w = 0.8;
    // the dispatching overload tightens the Green tolerance tenfold
    QuadratureConfig inner;
    inner.rel_tol = 1e-7;
    const auto g = im_green(env.geometry, w, inner);
    const auto direct = power_spectral_density(body, env, w, cfg6());
    const auto shared = power_spectral_density(body, env.T0, g, w);
    CHECK(shared.total() == doctest::Approx(direct.total()).epsilon(1e-12));
    const auto mdirect = torque_spectral_density(body, env, w, cfg6());
    const auto mshared = torque_spectral_density(body, env.T0, g, w);
    CHECK(mshared.total() == doctest::Approx(mdirect.total()).epsilon(1e-12));
}

TEST_CASE("spectrum grid agrees with pointwise densities and totals") {
    const auto body = lorentz_body(1e-3, 0.8, 0.5);
    const Environment env{PlanarGeometry::conductor(1.5), 0.3};
    const std::vector<double> grid{0.2, 0.6, 1.0, 1.6};
    const auto spec = spectrum(body, env, grid, cfg6());
    REQUIRE(spec.omega.size() == grid.size());
    REQUIRE(spec.dP_domega.size() == grid.size());
    REQUIRE(spec.dM_domega.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = power_spectral_density(body, env, grid[i], cfg6());
        CHECK(spec.dP_domega[i].total() == doctest::Approx(p.total()).epsilon(1e-9));
    }
    const auto P = radiated_power(body, env, cfg6());
    const auto M = friction_torque(body, env, cfg6());
    CHECK(spec.total_power.value == doctest::Approx(P.value).epsilon(1e-12));
    CHECK(spec.total_torque.value == doctest::Approx(M.value).epsilon(1e-12));
}

TEST_CASE("conductor proximity enhances the zz channel") {
    // near the mirror the zz Green weight doubles while xx is suppressed
    const auto body = drude_body(5.0, 1e-3, 1.0, 0.0);
    const Environment close{PlanarGeometry::conductor(0.01), 0.0};
    const Environment far{PlanarGeometry::vacuum(), 0.0};
    const double w = 1.0;
    const auto nearp = power_spectral_density(body, close, w, cfg6());
    const auto farp = power_spectral_density(body, far, w, cfg6());
    CHECK(nearp.zz == doctest::Approx(2.0 * farp.zz).epsilon(1e-3));
    CHECK(nearp.xx_minus + nearp.xx_plus < 0.01 * (farp.xx_minus + farp.xx_plus));
}
