#pragma once

#include <complex>

namespace dirac2d::specfun {

using cplx = std::complex<double>;

enum class Status { Converged, AsymptoticBranch, NearPole };

/// The true value is value * exp(log_scale); log_scale is zero unless the result
/// would over- or underflow a double.
struct SpecialValue {
    cplx value;
    cplx derivative;
    Status status = Status::Converged;
    double log_scale = 0.0;
};

const char* to_string(Status status);

/// 1F1(a; b; z). NearPole (NaN value) when b is within 1e-12 of a non-positive integer.
SpecialValue kummer_M(cplx a, cplx b, cplx z);
/// U(a; b; z) on the principal branch, defined for Re z >= 0, z != 0.
SpecialValue tricomi_U(cplx a, cplx b, cplx z);

/// M_{nu,mu}(z) = exp(-z/2) z^(mu+1/2) 1F1(1/2+mu-nu; 1+2mu; z), principal powers.
SpecialValue whittaker_M(cplx nu, cplx mu, cplx z);
/// W_{nu,mu}(z), the solution recessive as z -> +inf. Defined for Re z >= 0, z != 0.
SpecialValue whittaker_W(cplx nu, cplx mu, cplx z);

SpecialValue bessel_J(double nu, double x);
/// Ascending series only; used on the imaginary axis where it does not cancel.
SpecialValue bessel_J_series(double nu, cplx z);
/// Weber function Y_nu, nu >= 0, x > 0.
SpecialValue bessel_Y(double nu, double x);
SpecialValue bessel_I(double nu, double x);
/// K_nu(x), the exponentially decaying solution of the modified Bessel equation.
SpecialValue decaying_exterior_basis(double nu, double x);
inline SpecialValue bessel_K(double nu, double x) { return decaying_exterior_basis(nu, x); }

/// 1/Gamma(x), zero at the poles of Gamma.
double rgamma(double x);

} // namespace dirac2d::specfun
