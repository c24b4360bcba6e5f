#include "spinrad/greens.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace spinrad;

namespace {

constexpr double pi = 3.14159265358979323846;

QuadratureConfig tight() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    return cfg;
}

// conductor reference by closed-form antiderivatives of the reflection
// kernels: with a = 2z and K = omega,
//   xx = (1/8pi) [ I0 + I2/K^2 ],  I0 = int_0^K (1 - cos a t) dt,
//                                  I2 = int_0^K t^2 (1 - cos a t) dt
//   zz = (1/4pi K^2) int_0^K (K^2 - t^2)(1 + cos a t) dt
double conductor_xx_exact(double w, double z) {
    const double a = 2.0 * z, K = w;
    const double i0 = K - std::sin(a * K) / a;
    const double i2 = K * K * K / 3.0 -
                      (K * K * std::sin(a * K) / a + 2.0 * K * std::cos(a * K) / (a * a) -
                       2.0 * std::sin(a * K) / (a * a * a));
    return (i0 + i2 / (K * K)) / (8.0 * pi);
}

double conductor_zz_exact(double w, double z) {
    const double a = 2.0 * z, K = w;
    const double i = 2.0 * K * K * K / 3.0 - 2.0 * K * std::cos(a * K) / (a * a) +
                     2.0 * std::sin(a * K) / (a * a * a);
    return i / (4.0 * pi * K * K);
}

} // namespace

TEST_CASE("vacuum green function") {
    const auto g = im_green_vacuum(1.0);
    CHECK(g.xx == doctest::Approx(0.053051647697298445).epsilon(1e-15));
    CHECK(g.yy == g.xx);
    CHECK(g.zz == g.xx);
    CHECK(g.err_xx == 0.0);
    // linear in frequency
    CHECK(im_green_vacuum(3.5).zz == doctest::Approx(3.5 / (6.0 * pi)).epsilon(1e-15));
}

TEST_CASE("geometry factories validate separation") {
    CHECK_NOTHROW(PlanarGeometry::conductor(0.1));
    CHECK_THROWS_AS(PlanarGeometry::conductor(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PlanarGeometry::conductor(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(PlanarGeometry::half_space(DielectricModel::drude(1.0), 0.0),
                    std::invalid_argument);
    CHECK(PlanarGeometry::vacuum().kind == PlanarGeometry::Kind::Vacuum);
}

TEST_CASE("conductor against the closed form") {
    const auto cfg = tight();

    SUBCASE("frozen reference points") {
        const auto a = im_green_conductor(1.0, pi / 2.0, cfg);
        CHECK(a.xx == doctest::Approx(0.061114531305598318).epsilon(1e-8));
        CHECK(a.zz == doctest::Approx(0.069177414913898190).epsilon(1e-8));
        const auto b = im_green_conductor(1.0, pi, cfg);
        CHECK(b.xx == doctest::Approx(0.051035926795223477).epsilon(1e-8));
        CHECK(b.zz == doctest::Approx(0.049020205893148509).epsilon(1e-8));
    }

    SUBCASE("grid of frequencies and separations") {
        for (double w : {0.3, 1.0, 3.0}) {
            for (double z : {0.2, 1.0, 5.0}) {
                const auto g = im_green_conductor(w, z, cfg);
                CHECK(g.xx == doctest::Approx(conductor_xx_exact(w, z)).epsilon(1e-9));
                CHECK(g.zz == doctest::Approx(conductor_zz_exact(w, z)).epsilon(1e-9));
                CHECK(g.yy == g.xx);
                CHECK(g.err_xx >= 0.0);
            }
        }
    }

    SUBCASE("image cancellation at small separation") {
        // xx vanishes like (16/15) z^2 w^3 / 8pi against an O(w) background;
        // only a cancellation-free kernel can resolve it
        const double w = 1.0, z = 1e-4;
        const auto g = im_green_conductor(w, z, cfg);
        const double lead = 16.0 / 15.0 * z * z * w * w * w / (8.0 * pi);
        CHECK(g.xx == doctest::Approx(lead).epsilon(1e-6));
        // zz doubles the vacuum value as z -> 0
        CHECK(g.zz == doctest::Approx(2.0 * w / (6.0 * pi)).epsilon(1e-6));
    }
}

TEST_CASE("half space green function") {
    const auto cfg = tight();

    SUBCASE("frozen reference points") {
        const auto g = im_green_half_space(1.0, 0.7, DielectricModel::tabulated(
                                                          {{0.5, {2.0, 1.0}}, {2.0, {2.0, 1.0}}}),
                                           cfg);
        CHECK(g.xx == doctest::Approx(0.06033960533225718).epsilon(1e-8));
        CHECK(g.zz == doctest::Approx(0.09273911126560618).epsilon(1e-8));
    }

    SUBCASE("reference point scales linearly in (omega, 1/z)") {
        // same eps at (2 w, z/2) multiplies both components by 2
        const auto g = im_green_half_space(2.0, 0.35, DielectricModel::tabulated(
                                                           {{0.5, {2.0, 1.0}}, {4.0, {2.0, 1.0}}}),
                                           cfg);
        CHECK(g.xx == doctest::Approx(0.12067921066451436).epsilon(1e-8));
        CHECK(g.zz == doctest::Approx(0.18547822253121237).epsilon(1e-8));
    }

    SUBCASE("eps = 1 reproduces vacuum") {
        const auto m = DielectricModel::tabulated({{0.1, {1.0, 0.0}}, {10.0, {1.0, 0.0}}});
        const auto g = im_green_half_space(1.0, 0.9, m, cfg);
        CHECK(g.xx == doctest::Approx(1.0 / (6.0 * pi)).epsilon(1e-9));
        CHECK(g.yy == doctest::Approx(1.0 / (6.0 * pi)).epsilon(1e-9));
        CHECK(g.zz == doctest::Approx(1.0 / (6.0 * pi)).epsilon(1e-9));
    }

    SUBCASE("strongly absorbing half space approaches the conductor") {
        const auto m = DielectricModel::tabulated({{0.1, {1.0, 1e8}}, {10.0, {1.0, 1e8}}});
        const auto metal = im_green_half_space(1.0, 0.8, m, cfg);
        const auto cond = im_green_conductor(1.0, 0.8, cfg);
        CHECK(metal.xx == doctest::Approx(cond.xx).epsilon(2e-3));
        CHECK(metal.zz == doctest::Approx(cond.zz).epsilon(2e-3));
    }

    SUBCASE("lossless dielectric stays on the decaying branch") {
        // Im eps = 0 exercises the negative-zero corner of the branch choice
        const auto m = DielectricModel::tabulated({{0.1, {2.25, 0.0}}, {10.0, {2.25, 0.0}}});
        ImGreenDiag g{};
        CHECK_NOTHROW(g = im_green_half_space(1.0, 0.8, m, cfg));
        CHECK(g.xx > 0.0);
        CHECK(g.zz > 0.0);
    }
}

TEST_CASE("half space integrand branch continuity") {
    // the propagating (k_z -> 0) and evanescent (kappa -> 0) parametrizations
    // meet at k_par = omega; extrapolate both sides to the branch point
    const double w = 1.3, z = 0.6;
    const cdouble eps(2.0, 0.7);

    auto richardson = [](double f1, double f2, double f4) {
        // two-level extrapolation for f = L + a h + b h^2 + O(h^3)
        return (8.0 * f4 - 6.0 * f2 + f1) / 3.0;
    };

    for (int c = 0; c < 3; ++c) {
        const double h = 1e-4 * w;
        // propagating side: k_z = h means k_par = sqrt(w^2 - h^2)
        auto prop = [&](double kz) {
            return detail::half_space_integrand_propagating(w, z, eps,
                                                           std::sqrt(w * w - kz * kz))[c];
        };
        auto evan = [&](double u) {
            return detail::half_space_integrand_evanescent(w, z, eps,
                                                           std::sqrt(w * w + u * u))[c];
        };
        const double p = richardson(prop(h), prop(h / 2.0), prop(h / 4.0));
        const double e = richardson(evan(h), evan(h / 2.0), evan(h / 4.0));
        const double scale = std::max({std::abs(p), std::abs(e), 1e-30});
        CHECK(std::abs(p - e) / scale < 1e-6);
    }
}

TEST_CASE("lossless half space has no evanescent contribution beyond the cutoff") {
    // for real eps > 1 the evanescent sector only contributes for
    // kappa < sqrt(eps - 1) w, where the transmitted wave still propagates
    const double w = 1.0, z = 0.5;
    const cdouble eps(2.25, 0.0);
    const double cut = std::sqrt(1.25) * w;
    for (double u : {1.2 * cut, 2.0 * cut, 10.0 * cut}) {
        const auto v = detail::half_space_integrand_evanescent(w, z, eps,
                                                               std::sqrt(w * w + u * u));
        CHECK(v[0] == 0.0);
        CHECK(v[2] == 0.0);
    }
    // while below the cutoff it does contribute
    const double u = 0.5 * cut;
    const auto v = detail::half_space_integrand_evanescent(w, z, eps, std::sqrt(w * w + u * u));
    CHECK(v[2] > 0.0);
}

TEST_CASE("dispatch matches the direct calls") {
    const auto cfg = tight();
    const auto vac = im_green(PlanarGeometry::vacuum(), 1.7, cfg);
    CHECK(vac.xx == im_green_vacuum(1.7).xx);

    const auto cond = im_green(PlanarGeometry::conductor(0.4), 1.7, cfg);
    CHECK(cond.zz == im_green_conductor(1.7, 0.4, cfg).zz);

    const auto m = DielectricModel::drude(5.0);
    const auto hs = im_green(PlanarGeometry::half_space(m, 0.4), 1.7, cfg);
    CHECK(hs.zz == im_green_half_space(1.7, 0.4, m, cfg).zz);
}

TEST_CASE("invalid arguments") {
    const auto cfg = tight();
    CHECK_THROWS_AS(im_green_conductor(0.0, 1.0, cfg), std::domain_error);
    CHECK_THROWS_AS(im_green_vacuum(0.0), std::domain_error);
    CHECK_THROWS_AS(im_green_conductor(1.0, 0.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(im_green_half_space(1.0, -1.0, DielectricModel::drude(1.0), cfg),
                    std::invalid_argument);
}
