#pragma once

#include <array>
#include <complex>

namespace dirac2d::detail {

using cplx = std::complex<double>;

/// A(z) w'' + B(z) w' + C(z) w = 0 with polynomial coefficients of degree <= 2,
/// stored lowest power first.
struct PolyODE {
    std::array<cplx, 3> A{};
    std::array<cplx, 3> B{};
    std::array<cplx, 3> C{};
};

struct Jet {
    cplx w;
    cplx dw;
};

/// Carries (w, w') from z0 to z1 along the straight segment by local Taylor
/// expansions. Each step stays within half the distance to the nearest zero of A.
/// Throws NonConvergent if a local expansion does not settle.
Jet taylor_continue(const PolyODE& ode, cplx z0, Jet start, cplx z1, double h_max = 3.0);

} // namespace dirac2d::detail
