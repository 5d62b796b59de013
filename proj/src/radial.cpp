#include "dirac2d/radial.hpp"

#include "dirac2d/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dirac2d {

namespace {

using specfun::cplx;
using specfun::SpecialValue;

constexpr double threshold_tol = 1e-12;
constexpr double singular_tol = 1e-10;

cplx unscale(const SpecialValue& v, cplx x) {
    return v.log_scale == 0.0 ? x : x * std::exp(v.log_scale);
}

// Value and d/dr of sqrt(X) f(X), X = s r.
SpecialValue sqrt_scaled(const SpecialValue& f, double X, double s) {
    const double sx = std::sqrt(X);
    SpecialValue out = f;
    out.value = sx * f.value;
    out.derivative = s * (0.5 / sx * f.value + sx * f.derivative);
    return out;
}

SpecialValue first_family(const RadialParams& p, double mu, double r, Branch br) {
    const cplx z = 2.0 * p.kappa * r;
    SpecialValue v = br == Branch::Regular ? specfun::whittaker_M(p.nu, mu, z) : specfun::whittaker_W(p.nu, mu, z);
    v.derivative *= 2.0 * p.kappa;
    return v;
}

SpecialValue second_family(const RadialParams& p, double mu, double r, Branch br) {
    const double s = std::abs(p.kappa);
    const double X = s * r;
    const bool propagating = p.kappa2 > 0;
    SpecialValue f;
    if (br == Branch::Regular) {
        f = propagating ? specfun::bessel_J(mu, X) : specfun::bessel_I(mu, X);
    } else {
        f = propagating ? specfun::bessel_Y(std::abs(mu), X) : specfun::decaying_exterior_basis(std::abs(mu), X);
    }
    return sqrt_scaled(f, X, s);
}

double regular_index(double eps_theta, double shift) {
    const double s = eps_theta < 0 ? -1.0 : 1.0;
    return s * (eps_theta + shift);
}

} // namespace

const char* to_string(RadialCase c) {
    switch (c) {
    case RadialCase::C1General: return "C1General";
    case RadialCase::C1Spin: return "C1Spin";
    case RadialCase::C1Pseudo: return "C1Pseudo";
    case RadialCase::C2General: return "C2General";
    case RadialCase::C2Spin: return "C2Spin";
    case RadialCase::C2Pseudo: return "C2Pseudo";
    }
    return "?";
}

const char* to_string(Character c) {
    switch (c) {
    case Character::Decaying: return "Decaying";
    case Character::Propagating: return "Propagating";
    case Character::Threshold: return "Threshold";
    }
    return "?";
}

RadialCase select_case(const PotentialConfig& config, double e) {
    const SymmetryReport sym = check_symmetry(config, e);
    const bool first = config.kind == ConfigKind::Config1;
    switch (sym.symmetry) {
    case SymmetryCase::SpinSymmetric: return first ? RadialCase::C1Spin : RadialCase::C2Spin;
    case SymmetryCase::PseudoSpinSymmetric: return first ? RadialCase::C1Pseudo : RadialCase::C2Pseudo;
    case SymmetryCase::General: break;
    }
    return first ? RadialCase::C1General : RadialCase::C2General;
}

RadialParams effective_params(RadialCase radial_case, const ShellPotential& shell, const PhysicalParams& phys,
                              double energy, const AngularMode& mode) {
    const double m = phys.m, e = phys.e;
    const double S = shell.S, eV = e * shell.V, eW = e * shell.W;
    const double E = energy;
    RadialParams p;
    p.radial_case = radial_case;
    p.eps_theta = mode.eps_theta;
    p.energy = E;
    p.P = m + S + eV - E;
    p.Q = m + S - eV + E;
    p.eW = eW;

    const bool spin = radial_case == RadialCase::C1Spin || radial_case == RadialCase::C2Spin;
    const bool pseudo = radial_case == RadialCase::C1Pseudo || radial_case == RadialCase::C2Pseudo;
    if (spin && eV != S) {
        throw Error(ErrorKind::InvalidMode, "spin-symmetric case needs eV = S in the shell");
    }
    if (pseudo && eV != -S) {
        throw Error(ErrorKind::InvalidMode, "pseudo-spin-symmetric case needs eV = -S in the shell");
    }
    if (!p.first_family() && eW != 0.0) {
        throw Error(ErrorKind::InvalidMode, "second-family cases carry no radial W");
    }

    switch (radial_case) {
    case RadialCase::C1General:
        p.kappa2 = (m + S) * (m + S) + eW * eW - (E - eV) * (E - eV);
        break;
    case RadialCase::C1Spin:
        p.kappa2 = eW * eW - (E - m - 2 * S) * (m + E);
        break;
    case RadialCase::C1Pseudo:
        p.kappa2 = eW * eW - (E + m + 2 * S) * (E - m);
        break;
    case RadialCase::C2General:
        p.kappa2 = (eV - E) * (eV - E) - (m + S) * (m + S);
        break;
    case RadialCase::C2Spin:
        p.kappa2 = (E - m - 2 * S) * (m + E);
        break;
    case RadialCase::C2Pseudo:
        p.kappa2 = (m + 2 * S + E) * (E - m);
        break;
    }
    const double mag = std::sqrt(std::abs(p.kappa2));
    p.kappa = p.kappa2 > 0 ? cplx(mag, 0.0) : cplx(0.0, mag);
    if (p.first_family() && mag > 0) {
        p.nu = -eW * mode.eps_theta / p.kappa;
    }
    const double et = mode.eps_theta;
    p.mu2_plus = et * (et - 1.0) + 0.25;
    p.mu2_minus = et * (et + 1.0) + 0.25;
    p.mu_plus = regular_index(et, -0.5);
    p.mu_minus = regular_index(et, 0.5);
    return p;
}

Character asymptotic_character(const RadialParams& params) {
    if (std::abs(params.kappa2) < threshold_tol) {
        return Character::Threshold;
    }
    const bool decaying = params.first_family() ? params.kappa2 > 0 : params.kappa2 < 0;
    return decaying ? Character::Decaying : Character::Propagating;
}

std::array<SpecialValue, 2> radial_basis(const RadialParams& params, double r, Branch branch) {
    if (!(r > 0)) {
        throw Error(ErrorKind::InvalidConfig, "radial basis needs r > 0");
    }
    if (asymptotic_character(params) == Character::Threshold) {
        std::ostringstream msg;
        msg << "kappa^2 = " << params.kappa2 << " is at threshold";
        throw Error(ErrorKind::ThresholdEnergy, msg.str());
    }
    if (params.first_family()) {
        return {first_family(params, params.mu_plus, r, branch), first_family(params, params.mu_minus, r, branch)};
    }
    return {second_family(params, params.mu_plus, r, branch), second_family(params, params.mu_minus, r, branch)};
}

double reconstruct_partner(const RadialParams& params, double r, double phi_minus, double dphi_minus) {
    const double scale = std::max(std::abs(params.P + params.energy), std::abs(params.energy));
    if (std::abs(params.P) < singular_tol * scale || params.P == 0.0) {
        throw Error(ErrorKind::SingularEnergy, "m+S+eV-E vanishes; use the companion relation");
    }
    return -(dphi_minus + params.g(r) * phi_minus) / params.P;
}

double reconstruct_lower(const RadialParams& params, double r, double phi_plus, double dphi_plus) {
    const double scale = std::max(std::abs(params.Q - params.energy), std::abs(params.energy));
    if (std::abs(params.Q) < singular_tol * scale || params.Q == 0.0) {
        throw Error(ErrorKind::SingularEnergy, "m+S-eV+E vanishes");
    }
    return (params.g(r) * phi_plus - dphi_plus) / params.Q;
}

SpinorValue spinor_basis(const RadialParams& params, double r, Branch branch) {
    // Lower component drives; it is made real before the partner is rebuilt.
    double u = 0.0, du = 0.0;
    const bool oscillating_whittaker = params.first_family() && params.kappa2 < 0;
    if (!oscillating_whittaker) {
        const SpecialValue f = radial_basis(params, r, branch)[1];
        u = unscale(f, f.value).real();
        du = unscale(f, f.derivative).real();
    } else {
        // M_{nu,mu}(i t) with imaginary nu is real after removing exp(i pi (mu+1/2) / 2).
        const double mu = params.mu_minus;
        const cplx ph = std::exp(cplx(0.0, 0.5 * std::numbers::pi * (mu + 0.5)));
        const SpecialValue reg = first_family(params, mu, r, Branch::Regular);
        const double ru = (unscale(reg, reg.value) / ph).real();
        const double rdu = (unscale(reg, reg.derivative) / ph).real();
        if (branch == Branch::Regular) {
            u = ru;
            du = rdu;
        } else {
            // Real combination of W with unit Wronskian modulus against the regular solution.
            const SpecialValue w = first_family(params, mu, r, Branch::Irregular);
            const cplx wv = unscale(w, w.value), wd = unscale(w, w.derivative);
            const cplx omega = ru * wd - rdu * wv;
            const cplx c = std::conj(omega) / std::abs(omega);
            u = (c * wv).real();
            du = (c * wd).real();
        }
    }
    SpinorValue s;
    s.minus = u;
    s.dminus = du;
    s.plus = reconstruct_partner(params, r, u, du);
    s.dplus = params.g(r) * s.plus - params.Q * s.minus;
    return s;
}

double first_order_residual(const RadialParams& params, double r, const SpinorValue& s) {
    const double g = params.g(r);
    const double r1 = s.dplus - (g * s.plus - params.Q * s.minus);
    const double r2 = s.dminus - (-params.P * s.plus - g * s.minus);
    const double scale = std::abs(s.dplus) + std::abs(s.dminus) + (std::abs(g) + std::abs(params.P) + std::abs(params.Q))
                                                                       * (std::abs(s.plus) + std::abs(s.minus));
    return (std::abs(r1) + std::abs(r2)) / scale;
}

} // namespace dirac2d
