#include "continuation.hpp"

#include "dirac2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dirac2d::detail {

namespace {

cplx eval(const std::array<cplx, 3>& p, cplx z) { return p[0] + z * (p[1] + z * p[2]); }
cplx deriv(const std::array<cplx, 3>& p, cplx z) { return p[1] + 2.0 * z * p[2]; }

double distance_to_singularity(const std::array<cplx, 3>& A, cplx z) {
    double best = std::numeric_limits<double>::infinity();
    if (std::abs(A[2]) > 0) {
        const cplx disc = std::sqrt(A[1] * A[1] - 4.0 * A[2] * A[0]);
        best = std::min(std::abs(z - (-A[1] + disc) / (2.0 * A[2])),
                        std::abs(z - (-A[1] - disc) / (2.0 * A[2])));
    } else if (std::abs(A[1]) > 0) {
        best = std::abs(z + A[0] / A[1]);
    }
    return best;
}

Jet local_step(const PolyODE& ode, cplx z, Jet j, cplx h) {
    const cplx a0 = eval(ode.A, z), a1 = deriv(ode.A, z), a2 = ode.A[2];
    const cplx b0 = eval(ode.B, z), b1 = deriv(ode.B, z), b2 = ode.B[2];
    const cplx c0 = eval(ode.C, z), c1 = deriv(ode.C, z), c2 = ode.C[2];
    const cplx h2 = h * h, h3 = h2 * h, h4 = h2 * h2;

    constexpr int max_terms = 600;
    std::vector<cplx> d;
    d.reserve(64);
    d.push_back(j.w);
    d.push_back(j.dw * h);
    cplx sw = d[0] + d[1];
    cplx sdw = d[1];
    int quiet = 0;
    for (int n = 0; n + 2 < max_terms; ++n) {
        const double nd = n;
        cplx acc = (a1 * (nd + 1) * nd + b0 * (nd + 1)) * h * d[n + 1]
                   + (a2 * nd * (nd - 1) + b1 * nd + c0) * h2 * d[n];
        if (n >= 1) {
            acc += (b2 * (nd - 1) + c1) * h3 * d[n - 1];
        }
        if (n >= 2) {
            acc += c2 * h4 * d[n - 2];
        }
        const cplx next = -acc / (a0 * (nd + 2) * (nd + 1));
        d.push_back(next);
        sw += next;
        sdw += (nd + 2) * next;
        const double scale = std::abs(sw) + std::abs(sdw);
        if ((nd + 3) * std::abs(next) <= 1e-17 * scale) {
            if (++quiet >= 3) {
                return {sw, sdw / h};
            }
        } else {
            quiet = 0;
        }
        if (!std::isfinite(std::abs(next))) {
            break;
        }
    }
    throw Error(ErrorKind::NonConvergent, "local Taylor expansion did not converge");
}

} // namespace

Jet taylor_continue(const PolyODE& ode, cplx z0, Jet start, cplx z1, double h_max) {
    cplx z = z0;
    Jet j = start;
    for (int guard = 0; guard < 200000; ++guard) {
        const cplx rest = z1 - z;
        const double left = std::abs(rest);
        if (left == 0.0) {
            return j;
        }
        const double hmag = std::min(h_max, 0.5 * distance_to_singularity(ode.A, z));
        if (!(hmag > 0)) {
            throw Error(ErrorKind::NonConvergent, "continuation path touches a singular point");
        }
        const cplx h = left <= hmag ? rest : rest * (hmag / left);
        j = local_step(ode, z, j, h);
        z = left <= hmag ? z1 : z + h;
        if (!std::isfinite(std::abs(j.w)) || !std::isfinite(std::abs(j.dw))) {
            throw Error(ErrorKind::NonConvergent, "continuation overflowed");
        }
    }
    throw Error(ErrorKind::NonConvergent, "continuation needed too many steps");
}

} // namespace dirac2d::detail
