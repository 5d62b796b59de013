#pragma once

#include "dirac2d/angular.hpp"
#include "dirac2d/model.hpp"
#include "dirac2d/specfun.hpp"

#include <array>
#include <complex>

namespace dirac2d {

enum class RadialCase { C1General, C1Spin, C1Pseudo, C2General, C2Spin, C2Pseudo };
enum class Character { Decaying, Propagating, Threshold };
enum class Branch { Regular, Irregular };

const char* to_string(RadialCase c);
const char* to_string(Character c);

/// Shell constants of the reduced system
///   Phi+' =  g Phi+ - Q Phi-
///   Phi-' = -P Phi+ - g Phi-
/// with P = m+S+eV-E, Q = m+S-eV+E and g = eW + eps_theta / r.
struct RadialParams {
    RadialCase radial_case = RadialCase::C1General;
    /// gamma^2, eta^2 or eta'^2 for the first family (positive means decaying),
    /// alpha^2, tau^2 or rho^2 for the second (negative means decaying).
    double kappa2 = 0.0;
    /// sqrt(kappa2): |kappa| when kappa2 > 0, i |kappa| otherwise.
    std::complex<double> kappa;
    /// Whittaker first index -eW eps_theta / kappa (first family only).
    std::complex<double> nu;
    /// mu^2 = eps_theta (eps_theta -+ 1) + 1/4 for the upper/lower component.
    double mu2_plus = 0.0;
    double mu2_minus = 0.0;
    /// Signed index of the solution regular at the origin, r^(mu+1/2).
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    double eps_theta = 0.5;
    double energy = 0.0;
    double P = 0.0;
    double Q = 0.0;
    double eW = 0.0;

    bool first_family() const {
        return radial_case == RadialCase::C1General || radial_case == RadialCase::C1Spin
               || radial_case == RadialCase::C1Pseudo;
    }
    double g(double r) const { return eW + eps_theta / r; }
};

/// Closed-form case for a configuration; spin and pseudo-spin branches are only
/// chosen when the stored couplings satisfy the identity exactly.
RadialCase select_case(const PotentialConfig& config, double e);

RadialParams effective_params(RadialCase radial_case, const ShellPotential& shell, const PhysicalParams& phys,
                              double energy, const AngularMode& mode);

/// Decaying iff (m+S)^2 + e^2 W^2 > (E-eV)^2; Threshold when |kappa2| < 1e-12.
Character asymptotic_character(const RadialParams& params);

/// Solutions of the second-order equation of each component: [0] is Phi+ (index
/// mu_plus), [1] is Phi- (index mu_minus). Derivatives are d/dr.
///   first family:  M_{nu,mu}(2 kappa r) / W_{nu,mu}(2 kappa r)
///   second family: sqrt(X) J_mu(X), sqrt(X) Y_|mu|(X) or sqrt(X) I_mu(X), sqrt(X) K_|mu|(X), X = |kappa| r
std::array<specfun::SpecialValue, 2> radial_basis(const RadialParams& params, double r, Branch branch);

/// Phi+ = -(Phi-' + g Phi-) / P. Throws SingularEnergy when |P| < 1e-10 max(|m+S+eV|, |E|).
double reconstruct_partner(const RadialParams& params, double r, double phi_minus, double dphi_minus);
/// Phi- = (g Phi+ - Phi+') / Q, the companion relation used when P vanishes.
double reconstruct_lower(const RadialParams& params, double r, double phi_plus, double dphi_plus);

struct SpinorValue {
    double plus = 0.0;
    double minus = 0.0;
    double dplus = 0.0;
    double dminus = 0.0;
};

/// Real spinor solution of the first-order system built from the closed forms.
/// Regular is finite at the origin; Irregular is an independent partner which,
/// on a decaying shell, is the exponentially decaying solution.
SpinorValue spinor_basis(const RadialParams& params, double r, Branch branch);

/// u+ v- - u- v+, constant in r for two solutions of the first-order system.
inline double spinor_wronskian(const SpinorValue& u, const SpinorValue& v) { return u.plus * v.minus - u.minus * v.plus; }

/// Residuals of the two first-order equations, relative to the local magnitude.
double first_order_residual(const RadialParams& params, double r, const SpinorValue& s);

} // namespace dirac2d
