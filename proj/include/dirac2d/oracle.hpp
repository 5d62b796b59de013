#pragma once

#include "dirac2d/angular.hpp"
#include "dirac2d/model.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace dirac2d::oracle {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 2>;  ///< (Phi+, Phi-)

/// Initial value problem for
///   Phi+' = (eW + eps_theta/r) Phi+ - (m+S-eV+E) Phi-
///   Phi-' = -(m+S+eV-E) Phi+ - (eW + eps_theta/r) Phi-
/// over a piecewise-constant layout. Integration may run in either direction.
struct IVPSpec {
    std::vector<ShellPotential> layout;
    PhysicalParams phys;
    double energy = 0.0;
    double eps_theta = 0.5;
    double r_start = 0.1;
    double r_end = 1.0;
    Spinor initial{};
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Output radii between r_start and r_end, ordered along the direction of integration.
    /// The end point is always reported last.
    std::vector<double> samples;
};

struct IVPStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

struct IVPResult {
    std::vector<double> r;
    std::vector<Spinor> phi;
    IVPStats stats;

    const Spinor& end() const { return phi.back(); }
};

/// Dormand-Prince 5(4) with dense output. Throws StiffnessFailure.
IVPResult integrate(const IVPSpec& spec);

struct ShootingOptions {
    double inner_fraction = 1e-3;  ///< r_in = inner_fraction * a
    double exterior_efolds = 20.0; ///< r_out = c + efolds / kappa_out
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// First terms of the regular solution at the origin for the innermost shell:
/// Phi ~ r^|eps_theta| times a power series.
Spinor regular_seed(const ShellPotential& shell, const PhysicalParams& phys, double energy, double eps_theta, double r);

/// Normalized mismatch (o+ i- - o- i+) / (|o| |i|) between the outward regular and
/// inward decaying solutions at r = c. Zeros in E are bound states.
/// Throws ScatteringOnly if |E| >= m.
double shooting_determinant(const PotentialConfig& config, const PhysicalParams& phys, const AngularMode& mode,
                            double energy, const ShootingOptions& options = {});

enum class Function { Kummer1F1, TricomiU, WhittakerM, WhittakerW, BesselJ, BesselY, BesselI, BesselK };

const char* to_string(Function f);
Function function_from_string(const std::string& name);

struct SeriesValue {
    cplx value;
    cplx derivative;
    std::string text;          ///< value with the requested number of significant digits
    double remainder_bound = 0;///< bound on the truncation error relative to |value|
};

/// Extended-precision (about 100 digits) evaluation from ascending series.
/// params: {a, b} for Kummer1F1/TricomiU, {nu, mu} for Whittaker, {nu} for Bessel.
/// Whittaker W, Tricomi U, Y and K use the connection formulas between series
/// solutions, with integer orders reached as the symmetric limit.
/// Throws PrecisionUnreachable when |z| > 40 or cancellation leaves fewer than the
/// requested digits.
SeriesValue series_oracle(Function f, const std::vector<double>& params, cplx z, int digits = 50);

} // namespace dirac2d::oracle
