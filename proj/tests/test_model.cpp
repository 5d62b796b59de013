#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dirac2d/error.hpp"
#include "dirac2d/model.hpp"

#include <cmath>

using namespace dirac2d;

namespace {

PotentialConfig config1(double V0, double W0, double S0, double a = 1, double b = 2, double c = 3) {
    PotentialConfig p;
    p.kind = ConfigKind::Config1;
    p.V0 = V0;
    p.W0 = W0;
    p.S0 = S0;
    p.a = a;
    p.b = b;
    p.c = c;
    return p;
}

PotentialConfig config2(double V0, double S0, double a, double c) {
    PotentialConfig p;
    p.kind = ConfigKind::Config2;
    p.V0 = V0;
    p.S0 = S0;
    p.a = a;
    p.c = c;
    return p;
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidConfig;
}

} // namespace

TEST_CASE("config1 shells are the four steps") {
    const auto s = shells(config1(-1, 0.5, 0.2));
    REQUIRE(s.size() == 4);
    CHECK(s[0].V == -1);
    CHECK(s[0].W == 0.5);
    CHECK(s[0].S == 0.2);
    CHECK(s[1].V == 0);
    CHECK(s[1].W == 0.5);
    CHECK(s[2].W == 0);
    CHECK(s[2].S == 0.2);
    CHECK(s[3].S == 0);
    CHECK(s[0].r_lo == 0);
    CHECK(s[1].r_lo == 1);
    CHECK(s[2].r_lo == 2);
    CHECK(s[3].r_lo == 3);
    CHECK(std::isinf(s[3].r_hi));
}

TEST_CASE("config2 shells ignore the angular profile") {
    const auto s = shells(config2(-1, 0.3, 1, 2));
    REQUIRE(s.size() == 3);
    CHECK(s[0].V == -1);
    CHECK(s[0].S == 0.3);
    CHECK(s[1].V == 0);
    CHECK(s[1].S == 0.3);
    CHECK(s[2].V == 0);
    CHECK(s[2].S == 0);
    for (const auto& sh : s) {
        CHECK(sh.W == 0);
    }
}

TEST_CASE("radii out of order are rejected") {
    CHECK(kind_of([] { shells(config1(0, 0, 0, 2, 1, 3)); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { shells(config2(0, 0, 2, 1)); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { config1(NAN, 0, 0).validate(); }) == ErrorKind::InvalidConfig);
    PhysicalParams p;
    p.m = -1;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::InvalidConfig);
    PotentialConfig coul;
    coul.kind = ConfigKind::CoulombMagnetic;
    CHECK(kind_of([&] { shells(coul); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("shell lookup is half-open and agrees with the step definitions") {
    const auto cfg = config1(-1, 0.5, 0.2);
    const auto s = shells(cfg);
    CHECK(shell_index(s, 0.0) == 0);
    CHECK(shell_index(s, 0.999) == 0);
    CHECK(shell_index(s, 1.0) == 1);
    CHECK(shell_index(s, 2.0) == 2);
    CHECK(shell_index(s, 3.0) == 3);
    CHECK(shell_index(s, 1e6) == 3);
    for (double r = 0.0; r < 5.0; r += 0.01) {
        const auto& sh = s[shell_index(s, r)];
        CHECK(sh.contains(r));
        CHECK(sh.V == (r < cfg.a ? cfg.V0 : 0.0));
        CHECK(sh.W == (r < cfg.b ? cfg.W0 : 0.0));
        CHECK(sh.S == (r < cfg.c ? cfg.S0 : 0.0));
    }
}

TEST_CASE("symmetry detection") {
    // a = c collapses the middle shell
    auto c = config2(0.5, 0.5, 1, 1);
    CHECK(check_symmetry(c, 1.0).symmetry == SymmetryCase::SpinSymmetric);
    c.S0 = -0.5;
    CHECK(check_symmetry(c, 1.0).symmetry == SymmetryCase::PseudoSpinSymmetric);
    c.S0 = 0.0;
    CHECK(check_symmetry(c, 1.0).symmetry == SymmetryCase::General);
    // with a < c the middle shell carries S alone
    CHECK(check_symmetry(config2(0.5, 0.5, 1, 2), 1.0).symmetry == SymmetryCase::General);
    const auto none = check_symmetry(config2(0, 0, 1, 2), 1.0);
    CHECK(none.symmetry == SymmetryCase::SpinSymmetric);
    CHECK(none.degenerate);
    CHECK(check_symmetry(config2(0.5, 1.0, 1, 1), 2.0).symmetry == SymmetryCase::SpinSymmetric);
}
