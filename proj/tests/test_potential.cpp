#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "srw/potential.hpp"
#include "srw/rng.hpp"
#include "srw/spectral.hpp"

using namespace srw;

TEST_CASE("value and force at the center") {
    GaussianPotential v(1.0, 1.0, 3);
    std::array<double, kMaxDim> x{};
    CHECK(v.value(x) == 1.0);
    const auto f = v.force(x);
    for (int a = 0; a < 3; ++a) CHECK(f[a] == 0.0);
}

TEST_CASE("value at unit radius") {
    GaussianPotential v(1.0, 1.0, 3);
    std::array<double, kMaxDim> x{1.0, 0.0, 0.0, 0.0};
    CHECK_THAT(v.value(x), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-15));
    CHECK_THAT(v.value(x), Catch::Matchers::WithinAbs(0.367879, 1e-6));
}

TEST_CASE("analytic gradient against finite differences") {
    GaussianPotential v(2.0, 1.5, 3);
    std::array<double, kMaxDim> x{0.4, -1.1, 0.7, 0.0};
    const auto g = v.gradient(x);
    const double h = 1e-6;
    for (int a = 0; a < 3; ++a) {
        auto xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const double fd = (v.value(xp) - v.value(xm)) / (2 * h);
        CHECK_THAT(g[a], Catch::Matchers::WithinRel(fd, 1e-8));
    }
}

TEST_CASE("fourier transform at p=0 matches a quadrature oracle") {
    GaussianPotential v(1.0, 1.0, 3);
    // vhat(0) = (2 pi)^{-3/2} int V = (2 pi)^{-3/2} 4 pi int_0^inf r^2 e^{-r^2} dr
    RadialQuadrature q(12.0, 24, 48);
    const double integral =
        4.0 * std::numbers::pi * q.integrate([&](double r) { return r * r * std::exp(-r * r); });
    const double oracle = integral / std::pow(2.0 * std::numbers::pi, 1.5);
    std::array<double, kMaxDim> p{};
    CHECK_THAT(v.vhat(p), Catch::Matchers::WithinRel(oracle, 1e-12));
    CHECK_THAT(v.vhat(p), Catch::Matchers::WithinRel(std::pow(2.0, -1.5), 1e-12));
}

TEST_CASE("vhat has the announced gaussian profile") {
    GaussianPotential v(1.0, 1.0, 3);
    for (double p2 : {0.1, 1.0, 4.0, 20.0}) {
        CHECK_THAT(v.vhat_r2(p2),
                   Catch::Matchers::WithinRel(std::pow(2.0, -1.5) * std::exp(-p2 / 4.0), 1e-14));
    }
}

TEST_CASE("positive definiteness sampled at 1e4 random momenta") {
    GaussianPotential v(0.7, 2.3, 3);
    Rng rng(12345);
    for (int i = 0; i < 10000; ++i) {
        std::array<double, kMaxDim> p{};
        for (int a = 0; a < 3; ++a) p[a] = rng.uniform(-40.0, 40.0);
        CHECK(v.vhat(p) >= 0.0);
    }
}

TEST_CASE("fourier inversion recovers V(0) within 1e-6 relative") {
    GaussianPotential v(1.0, 1.0, 3);
    // V(0) = (2 pi)^{-3/2} int vhat = (2 pi)^{-3/2} 4 pi int r^2 vhat(r^2) dr
    RadialQuadrature q(40.0, 32, 48);
    const double integral =
        4.0 * std::numbers::pi * q.integrate([&](double r) { return r * r * v.vhat_r2(r * r); });
    const double v0 = integral / std::pow(2.0 * std::numbers::pi, 1.5);
    CHECK_THAT(v0, Catch::Matchers::WithinRel(1.0, 1e-6));
}

TEST_CASE("uhat is the square root factor") {
    GaussianPotential v(1.0, 1.0, 3);
    for (double p2 : {0.0, 0.5, 3.0}) {
        CHECK_THAT(v.uhat_r2(p2) * v.uhat_r2(p2), Catch::Matchers::WithinRel(v.vhat_r2(p2), 1e-14));
    }
}

TEST_CASE("cutoff radius honors the advertised tolerance") {
    GaussianPotential v(1.0, 1.0, 3);
    const double rc = v.cutoff_radius(1e-12);
    CHECK_THAT(v.value_r2(rc * rc), Catch::Matchers::WithinRel(1e-12, 1e-9));
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(GaussianPotential(1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(GaussianPotential(-1.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(GaussianPotential(1.0, 0.0, 3), std::invalid_argument);
}
