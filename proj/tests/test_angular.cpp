#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dirac2d/angular.hpp"
#include "dirac2d/error.hpp"

#include <cmath>
#include <numbers>

using namespace dirac2d;

namespace {
constexpr double pi = std::numbers::pi;

// Full spinor phase after one turn: F(2 pi) times the spin rotation exp(-+ i pi).
std::complex<double> loop_phase(const AngularMode& mode, int sigma) {
    return angular_factor(mode, 2 * pi) * std::polar(1.0, -sigma * pi) / angular_factor(mode, 0.0);
}
} // namespace

TEST_CASE("config1 quantization") {
    for (int k : {-5, -3, -1, 1, 3, 5, 21}) {
        const auto m = quantize_config1(k);
        CHECK(m.eps_theta == k / 2.0);
        CHECK(total_angular_momentum(m) == k / 2.0);
        CHECK(std::abs(loop_phase(m, 1) - 1.0) < 1e-12);
        CHECK(std::abs(loop_phase(m, -1) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(quantize_config1(2), Error);
    CHECK_THROWS_AS(quantize_config1(0), Error);
}

TEST_CASE("config2 with zero holonomy reproduces config1") {
    for (int k : {-3, -1, 1, 3}) {
        CHECK(quantize_config2(k, AngularProfile::none(), 1.0).eps_theta == quantize_config1(k).eps_theta);
        const auto zero_mean = AngularProfile::sample([](double t) { return 0.4 * std::sin(t) + 0.1 * std::cos(3 * t); });
        const auto m = quantize_config2(k, zero_mean, 1.0);
        CHECK(std::abs(m.holonomy) < 1e-14);
        CHECK(std::abs(m.eps_theta - k / 2.0) < 1e-14);
    }
}

TEST_CASE("constant profile shifts eps_theta by e w0") {
    const auto m = quantize_config2(1, AngularProfile::constant(0.3), 1.0);
    CHECK(std::abs(m.holonomy - 0.3) < 1e-15);
    CHECK(std::abs(m.eps_theta - 0.8) < 1e-15);
    const auto m2 = quantize_config2(-1, AngularProfile::constant(0.3), -2.0);
    CHECK(std::abs(m2.eps_theta - (-0.5 - 0.6)) < 1e-15);
    CHECK_THROWS_AS(total_angular_momentum(m), Error);
}

TEST_CASE("angular factor solves the angular equation and is single valued") {
    const auto prof = AngularProfile::sample([](double t) { return 0.3 + 0.2 * std::cos(t); }, 4096);
    const auto m = quantize_config2(3, prof, 1.3);
    for (double t : {0.3, 1.7, 4.0}) {
        const double h = 1e-5;
        const auto F = angular_factor(m, t);
        const auto dF = (angular_factor(m, t + h) - angular_factor(m, t - h)) / (2 * h);
        // -i F' + e W F = eps_theta F
        const auto lhs = std::complex<double>(0, -1) * dF + m.charge * prof.value(t) * F;
        CHECK(std::abs(lhs - m.eps_theta * F) < 1e-8);
        CHECK(std::abs(std::abs(F) - 1.0) < 1e-15);
    }
    CHECK(std::abs(loop_phase(m, 1) - 1.0) < 1e-12);
    CHECK(std::abs(loop_phase(m, -1) - 1.0) < 1e-12);
}

TEST_CASE("moving the integral base point is a global phase") {
    const auto prof = AngularProfile::sample([](double t) { return std::cos(t) + 0.4; });
    const auto m = quantize_config2(1, prof, 1.0);
    const double t0 = 0.9;
    const auto shift = std::polar(1.0, m.charge * prof.integral(t0));
    for (double t : {1.0, 2.0, 5.0}) {
        // F with base point t0 equals F * exp(i e int_0^t0 W)
        const auto moved = std::polar(1.0, m.eps_theta * t - m.charge * (prof.integral(t) - prof.integral(t0)));
        CHECK(std::abs(moved - angular_factor(m, t) * shift) < 1e-13);
        CHECK(std::abs(std::norm(moved) - std::norm(angular_factor(m, t))) < 1e-13);
    }
}

TEST_CASE("profile validation and quadrature") {
    CHECK_THROWS_AS(AngularProfile::tabulated({1.0, 2.0, 3.0}).validate(), Error);
    CHECK_THROWS_AS(AngularProfile::tabulated({1.0, 1.0}).validate(), Error);
    const auto p = AngularProfile::tabulated({0.0, 1.0, 0.0, -1.0, 0.0});
    CHECK(std::abs(p.loop_integral()) < 1e-15);
    CHECK(std::abs(p.integral(pi / 2) - pi / 4) < 1e-15);
    CHECK(std::abs(p.value(pi / 4) - 0.5) < 1e-15);
    // periodic trapezoid on an analytic profile
    auto fn = [](double t) { return std::exp(std::sin(t)); };
    const double exact = 2 * pi * std::cyl_bessel_i(0.0, 1.0);
    CHECK(std::abs(AngularProfile::sample(fn, 8).loop_integral() - exact) < 1e-5);
    CHECK(std::abs(AngularProfile::sample(fn).loop_integral() - exact) < 1e-12);
}

TEST_CASE("coincidence flag when eps_theta vanishes") {
    const auto m = quantize_config2(1, AngularProfile::constant(-0.5), 1.0);
    CHECK(m.eps_theta == 0.0);
    CHECK(m.coincidence);
    CHECK_FALSE(quantize_config1(1).coincidence);
}
