#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dirac2d/error.hpp"
#include "dirac2d/oracle.hpp"
#include "dirac2d/radial.hpp"

#include <cmath>
#include <numbers>

using namespace dirac2d;
using namespace dirac2d::oracle;

namespace {

IVPSpec free_spec(double eps_theta, double r0, double r1, Spinor init) {
    IVPSpec s;
    s.layout = {ShellPotential{}};
    s.phys.m = 0.0;
    s.energy = 1.0;
    s.eps_theta = eps_theta;
    s.r_start = r0;
    s.r_end = r1;
    s.initial = init;
    for (double r = r0 + 0.5; r < r1; r += 0.5) {
        s.samples.push_back(r);
    }
    return s;
}

PotentialConfig deep_well() {
    PotentialConfig c;
    c.kind = ConfigKind::Config2;
    c.V0 = -5;
    c.S0 = 0;
    c.a = 1;
    c.c = 2;
    return c;
}

} // namespace

TEST_CASE("free massless system at eps_theta = 0 is circular") {
    const double r0 = 0.1;
    const auto res = integrate(free_spec(0.0, r0, 20.0, {std::cos(r0), std::sin(r0)}));
    REQUIRE(res.r.size() > 30);
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        CHECK(std::abs(res.phi[i][0].real() - std::cos(res.r[i])) < 1e-9);
        CHECK(std::abs(res.phi[i][1].real() - std::sin(res.r[i])) < 1e-9);
    }
    CHECK(res.r.back() == 20.0);
    CHECK(res.stats.steps > 0);
}

TEST_CASE("free massless system at eps_theta = 1/2 is sqrt(r) J_0, sqrt(r) J_1") {
    auto exact = [](double r) {
        return Spinor{std::sqrt(r) * std::cyl_bessel_j(0.0, r), std::sqrt(r) * std::cyl_bessel_j(1.0, r)};
    };
    const auto res = integrate(free_spec(0.5, 0.1, 20.0, exact(0.1)));
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        const auto e = exact(res.r[i]);
        CHECK(std::abs(res.phi[i][0] - e[0]) < 1e-9);
        CHECK(std::abs(res.phi[i][1] - e[1]) < 1e-9);
    }
}

TEST_CASE("integration runs backwards") {
    auto exact = [](double r) { return Spinor{std::cos(r), std::sin(r)}; };
    auto spec = free_spec(0.0, 15.0, 0.5, exact(15.0));
    spec.samples = {10.0, 5.0, 1.0};
    const auto res = integrate(spec);
    REQUIRE(res.r.size() == 4);
    CHECK(res.r[0] == 10.0);
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        CHECK(std::abs(res.phi[i][1] - exact(res.r[i])[1]) < 1e-9);
    }
}

TEST_CASE("closed-form regular solution seeds reproduce the closed form") {
    const PhysicalParams phys{};
    const ShellPotential sh{-2.0, 0.0, 0.3, 0.0};
    const auto mode = quantize_config1(3);
    for (double E : {0.1, 0.8, -0.5}) {
        const auto p = effective_params(RadialCase::C2General, sh, phys, E, mode);
        const auto s0 = spinor_basis(p, 0.1, Branch::Regular);
        IVPSpec spec;
        spec.layout = {sh};
        spec.phys = phys;
        spec.energy = E;
        spec.eps_theta = mode.eps_theta;
        spec.r_start = 0.1;
        spec.r_end = 5.0;
        spec.initial = {s0.plus, s0.minus};
        const auto res = integrate(spec);
        const auto s1 = spinor_basis(p, 5.0, Branch::Regular);
        const double mag = std::hypot(s1.plus, s1.minus);
        CHECK(std::abs(res.end()[0].real() - s1.plus) / mag < 1e-6);
        CHECK(std::abs(res.end()[1].real() - s1.minus) / mag < 1e-6);
    }
}

TEST_CASE("wronskian of two integrated solutions is constant") {
    IVPSpec a;
    a.layout = {ShellPotential{-1.0, 0.4, 0.2, 0.0}};
    a.energy = 0.3;
    a.eps_theta = 1.5;
    a.r_start = 0.2;
    a.r_end = 6.0;
    a.samples = {1.0, 2.0, 3.0, 4.0, 5.0};
    a.rtol = 1e-12;
    a.atol = 1e-14;
    IVPSpec b = a;
    a.initial = {1.0, 0.0};
    b.initial = {0.3, 1.0};
    const auto ra = integrate(a), rb = integrate(b);
    const cplx w0 = a.initial[0] * b.initial[1] - a.initial[1] * b.initial[0];
    for (std::size_t i = 0; i < ra.r.size(); ++i) {
        const cplx w = ra.phi[i][0] * rb.phi[i][1] - ra.phi[i][1] * rb.phi[i][0];
        CHECK(std::abs(w - w0) < 1e-9 * std::abs(w0));
    }
}

TEST_CASE("halving the tolerances moves the end point inside the tolerance") {
    IVPSpec s;
    s.layout = {ShellPotential{-3.0, 0.5, 0.2, 0.0, 1.0}, ShellPotential{0, 0.5, 0.2, 1.0, 2.0}, ShellPotential{0, 0, 0, 2.0}};
    s.energy = 0.2;
    s.eps_theta = 0.5;
    s.r_start = 1e-3;
    s.r_end = 5.0;
    s.initial = regular_seed(s.layout[0], s.phys, s.energy, s.eps_theta, s.r_start);
    const auto r1 = integrate(s);
    s.rtol /= 2;
    s.atol /= 2;
    const auto r2 = integrate(s);
    const double mag = std::abs(r1.end()[0]) + std::abs(r1.end()[1]);
    CHECK(std::abs(r1.end()[0] - r2.end()[0]) / mag < 1e-8);
    CHECK(std::abs(r1.end()[1] - r2.end()[1]) / mag < 1e-8);
}

TEST_CASE("shooting determinant") {
    const PhysicalParams phys{};
    PotentialConfig empty = deep_well();
    empty.V0 = 0;
    const auto mode = quantize_config1(1);
    double prev = shooting_determinant(empty, phys, mode, -0.99);
    for (double e = -0.98; e < 0.99; e += 0.01) {
        const double d = shooting_determinant(empty, phys, mode, e);
        CHECK(std::isfinite(d));
        CHECK((d < 0) == (prev < 0));
        prev = d;
    }
    const double lo = shooting_determinant(deep_well(), phys, mode, 0.0506);
    const double hi = shooting_determinant(deep_well(), phys, mode, 0.0508);
    CHECK((lo < 0) != (hi < 0));
    CHECK_THROWS_AS(shooting_determinant(deep_well(), phys, mode, 1.0), Error);
    try {
        shooting_determinant(deep_well(), phys, mode, -1.2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ScatteringOnly);
    }
}

TEST_CASE("series oracle closed forms") {
    // z is the double nearest 0.7, so the reference is exp of that double
    const auto e = series_oracle(Function::Kummer1F1, {1.0, 1.0}, 0.7, 50);
    CHECK(e.text.rfind("2.013752707470476432195964519184246838532090514047", 0) == 0);
    CHECK(e.remainder_bound < 1e-50);
    const auto j = series_oracle(Function::BesselJ, {0.5}, std::numbers::pi, 50);
    CHECK(std::abs(j.value) < 1e-16);
    const auto j3 = series_oracle(Function::BesselJ, {0.3}, 2.0, 40);
    CHECK(j3.text.rfind("4.25694061981413722302417795114571026921", 0) == 0);
}

TEST_CASE("series oracle refuses what it cannot certify") {
    auto kind = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidConfig;
    };
    CHECK(kind([] { series_oracle(Function::BesselJ, {0.3}, 41.0, 30); }) == ErrorKind::PrecisionUnreachable);
    CHECK(kind([] { series_oracle(Function::BesselJ, {0.3}, 2.0, 0); }) == ErrorKind::PrecisionUnreachable);
    CHECK(kind([] { series_oracle(Function::BesselJ, {0.3}, 2.0, 200); }) == ErrorKind::PrecisionUnreachable);
    CHECK(function_from_string("decaying_exterior_basis") == Function::BesselK);
    CHECK(function_from_string("whittaker_W") == Function::WhittakerW);
    CHECK_THROWS_AS(function_from_string("gamma"), Error);
}

TEST_CASE("series oracle and the ODE oracle agree") {
    // sqrt(r) J_mu(r) pair of the free massless system, eps_theta = 0.8
    const double eps = 0.8;
    auto exact = [&](double r) {
        const auto jp = series_oracle(Function::BesselJ, {eps - 0.5}, r, 30).value.real();
        const auto jm = series_oracle(Function::BesselJ, {eps + 0.5}, r, 30).value.real();
        return Spinor{std::sqrt(r) * jp, std::sqrt(r) * jm};
    };
    auto spec = free_spec(eps, 0.3, 12.0, exact(0.3));
    spec.rtol = 1e-12;
    spec.atol = 1e-14;
    const auto res = integrate(spec);
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        const auto e = exact(res.r[i]);
        CHECK(std::abs(res.phi[i][0] - e[0]) < 1e-9);
        CHECK(std::abs(res.phi[i][1] - e[1]) < 1e-9);
    }
}
