#include "dirac2d/specfun.hpp"

#include "continuation.hpp"
#include "dirac2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dirac2d::specfun {

namespace {

using detail::Jet;
using detail::PolyODE;

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr cplx I(0.0, 1.0);

// Largest condition number (sum |t_n| / |sum|) an ascending series may have.
constexpr double max_condition = 1e3;
// Rescale factor used to keep long positive series finite.
constexpr double rescale = 1e250;
const double log_rescale = std::log(rescale);

// Smallest real power-series start; W asymptotics start no closer than this.
constexpr double asym_radius = 35.0;
constexpr double asym_radius_max = 1200.0;

SpecialValue near_pole() {
    return {cplx(nan, nan), cplx(nan, nan), Status::NearPole, 0.0};
}

bool near_nonpositive_integer(cplx b, double tol = 1e-12) {
    const double n = std::round(b.real());
    return n <= 0 && std::abs(b - cplx(n, 0.0)) < tol;
}

struct Series {
    cplx sum;
    double condition = 1.0;
    int rescales = 0;
    bool converged = false;
};

// sum_{n>=0} t_n with t_0 = 1 and t_{n+1} / t_n = ratio(n).
template <class Ratio>
Series ascending(Ratio ratio, int max_terms = 20000) {
    Series s;
    cplx t = 1.0;
    cplx sum = 1.0;
    double abs_sum = 1.0;
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
        const cplx q = ratio(n);
        t *= q;
        sum += t;
        abs_sum += std::abs(t);
        if (std::abs(sum) > rescale) {
            sum /= rescale;
            t /= rescale;
            abs_sum /= rescale;
            ++s.rescales;
        }
        if (std::abs(t) <= 1e-17 * std::abs(sum) && std::abs(q) < 0.5) {
            if (++quiet >= 3) {
                s.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        if (t == 0.0) {
            s.converged = true;
            break;
        }
    }
    s.sum = sum;
    s.condition = std::abs(sum) > 0 ? abs_sum / std::abs(sum) : std::numeric_limits<double>::infinity();
    return s;
}

Series series_1f1(cplx a, cplx b, cplx z) {
    return ascending([&](int n) { return (a + double(n)) / (b + double(n)) * z / double(n + 1); });
}

bool usable(const Series& s) { return s.converged && s.condition <= max_condition; }

// Folds a log magnitude into a value when representable.
SpecialValue fold(cplx value, cplx deriv, double log_scale, Status st) {
    if (log_scale != 0.0 && std::abs(log_scale) < 690.0) {
        const double f = std::exp(log_scale);
        return {value * f, deriv * f, st, 0.0};
    }
    return {value, deriv, st, log_scale};
}

struct KummerRaw {
    cplx value;
    cplx derivative;
    double log_scale = 0.0;
};

bool kummer_by_series(cplx a, cplx b, cplx z, KummerRaw& out) {
    const Series f = series_1f1(a, b, z);
    if (!usable(f)) {
        return false;
    }
    const Series g = series_1f1(a + 1.0, b + 1.0, z);
    if (!usable(g)) {
        return false;
    }
    // Bring both sums to the larger of the two rescale counts.
    const int k = std::max(f.rescales, g.rescales);
    const cplx fv = f.sum * std::pow(rescale, double(f.rescales - k));
    const cplx gv = g.sum * std::pow(rescale, double(g.rescales - k));
    out = {fv, a / b * gv, k * log_rescale};
    return true;
}

KummerRaw kummer_raw(cplx a, cplx b, cplx z) {
    if (z == 0.0) {
        return {1.0, a / b, 0.0};
    }
    KummerRaw out;
    if (kummer_by_series(a, b, z, out)) {
        return out;
    }
    if (z.real() < 0) {
        KummerRaw t;
        if (kummer_by_series(b - a, b, -z, t)) {
            const cplx ez = std::exp(z);
            return {ez * t.value, ez * (t.value - t.derivative), t.log_scale};
        }
    }
    double r0 = std::min(std::abs(z), 10.0);
    KummerRaw seed;
    cplx z0;
    for (;;) {
        z0 = z * (r0 / std::abs(z));
        if (kummer_by_series(a, b, z0, seed) && seed.log_scale == 0.0) {
            break;
        }
        r0 *= 0.7;
        if (r0 < 0.3) {
            throw Error(ErrorKind::NonConvergent, "no well-conditioned start point for 1F1");
        }
    }
    PolyODE ode;
    ode.A = {0.0, 1.0, 0.0};
    ode.B = {b, -1.0, 0.0};
    ode.C = {-a, 0.0, 0.0};
    const Jet j = detail::taylor_continue(ode, z0, {seed.value, seed.derivative}, z);
    return {j.w, j.dw, 0.0};
}

// exp(-z/2) z^kappa sum_n (1/2+mu-kappa)_n (1/2-mu-kappa)_n / n! (-z)^-n
struct Asym {
    cplx s;
    cplx ds;  // d/dz of the sum
    bool converged = false;
};

Asym whittaker_asym(cplx nu, cplx mu, cplx z) {
    Asym out;
    const cplx p = 0.5 + mu - nu;
    const cplx q = 0.5 - mu - nu;
    cplx c = 1.0;
    cplx s = 1.0;
    cplx ds = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n < 2000; ++n) {
        c *= (p + double(n - 1)) * (q + double(n - 1)) / double(n) * (-1.0 / z);
        s += c;
        ds += -double(n) * c / z;
        const double mag = std::abs(c);
        if (mag <= 1e-17 * std::abs(s)) {
            out.converged = true;
            break;
        }
        if (mag > prev && n > 2) {
            break;
        }
        prev = mag;
    }
    out.s = s;
    out.ds = ds;
    return out;
}

PolyODE whittaker_ode(cplx nu, cplx mu) {
    PolyODE ode;
    ode.A = {0.0, 0.0, 1.0};
    ode.C = {0.25 - mu * mu, nu, -0.25};
    return ode;
}

} // namespace

const char* to_string(Status status) {
    switch (status) {
    case Status::Converged: return "Converged";
    case Status::AsymptoticBranch: return "AsymptoticBranch";
    case Status::NearPole: return "NearPole";
    }
    return "?";
}

double rgamma(double x) {
    if (x <= 0 && x == std::floor(x)) {
        return 0.0;
    }
    if (x < 0.5) {
        // Reflection keeps tgamma away from its poles: 1/G(x) = G(1-x) sin(pi x) / pi.
        return std::tgamma(1.0 - x) * std::sin(pi * x) / pi;
    }
    if (x > 171.0) {
        return std::exp(-std::lgamma(x));
    }
    return 1.0 / std::tgamma(x);
}

SpecialValue kummer_M(cplx a, cplx b, cplx z) {
    if (near_nonpositive_integer(b)) {
        return near_pole();
    }
    const KummerRaw k = kummer_raw(a, b, z);
    return fold(k.value, k.derivative, k.log_scale, Status::Converged);
}

SpecialValue whittaker_M(cplx nu, cplx mu, cplx z) {
    const cplx b = 1.0 + 2.0 * mu;
    if (near_nonpositive_integer(b)) {
        return near_pole();
    }
    if (z == 0.0) {
        // Regular behaviour z^(mu+1/2) at the origin.
        const cplx e = mu + 0.5;
        const cplx v = e == 0.0 ? cplx(1.0) : cplx(0.0);
        const cplx d = e == 1.0 ? cplx(1.0) : (e.real() < 1.0 ? cplx(std::numeric_limits<double>::infinity()) : cplx(0.0));
        return {v, d, Status::Converged, 0.0};
    }
    const KummerRaw k = kummer_raw(0.5 + mu - nu, b, z);
    const cplx lp = -0.5 * z + (mu + 0.5) * std::log(z);
    const double ls = lp.real() + k.log_scale;
    const cplx phase = std::exp(cplx(0.0, lp.imag()));
    const cplx v = phase * k.value;
    const cplx d = phase * ((-0.5 + (mu + 0.5) / z) * k.value + k.derivative);
    return fold(v, d, ls, Status::Converged);
}

SpecialValue whittaker_W(cplx nu, cplx mu, cplx z) {
    if (z == 0.0 || z.real() < 0) {
        throw Error(ErrorKind::BranchUnsupported, "W_{nu,mu}(z) is only provided for Re z >= 0, z != 0");
    }
    if (mu.real() < 0) {
        mu = -mu;
    }
    const double az = std::abs(z);
    if (az >= asym_radius) {
        const Asym as = whittaker_asym(nu, mu, z);
        if (as.converged) {
            const cplx lp = -0.5 * z + nu * std::log(z);
            const cplx phase = std::exp(cplx(0.0, lp.imag()));
            const cplx v = phase * as.s;
            const cplx d = phase * ((-0.5 + nu / z) * as.s + as.ds);
            return fold(v, d, lp.real(), Status::AsymptoticBranch);
        }
    }
    // Start further out and integrate inward, where W is the growing solution.
    const cplx dir = z / az;
    for (double R = std::max(asym_radius, 1.5 * az); R <= asym_radius_max; R *= 1.5) {
        const cplx zs = dir * R;
        const Asym as = whittaker_asym(nu, mu, zs);
        if (!as.converged) {
            continue;
        }
        // Seed without exp(-Re zs / 2); the ODE is linear so the factor is reapplied at the end.
        const cplx lp = -0.5 * zs + nu * std::log(zs);
        const cplx phase = std::exp(cplx(0.0, lp.imag()));
        const Jet seed{phase * as.s, phase * ((-0.5 + nu / zs) * as.s + as.ds)};
        const Jet j = detail::taylor_continue(whittaker_ode(nu, mu), zs, seed, z);
        return fold(j.w, j.dw, lp.real(), Status::Converged);
    }
    throw Error(ErrorKind::NonConvergent, "asymptotic expansion of W does not settle within the supported radius");
}

SpecialValue tricomi_U(cplx a, cplx b, cplx z) {
    if (z == 0.0 || z.real() < 0) {
        throw Error(ErrorKind::BranchUnsupported, "U(a;b;z) is only provided for Re z >= 0, z != 0");
    }
    const SpecialValue w = whittaker_W(0.5 * b - a, 0.5 * (b - 1.0), z);
    // U = W exp(z/2) z^(-b/2)
    const cplx lp = 0.5 * z - 0.5 * b * std::log(z);
    const cplx phase = std::exp(cplx(0.0, lp.imag()));
    const cplx v = phase * w.value;
    const cplx d = phase * (w.derivative + (0.5 - 0.5 * b / z) * w.value);
    return fold(v, d, lp.real() + w.log_scale, w.status);
}

SpecialValue bessel_J_series(double nu, cplx z) {
    if (nu < 0 && nu == std::floor(nu)) {
        const SpecialValue p = bessel_J_series(-nu, z);
        const double sgn = std::fmod(-nu, 2.0) == 0.0 ? 1.0 : -1.0;
        return {sgn * p.value, sgn * p.derivative, p.status, p.log_scale};
    }
    if (z == 0.0) {
        const double v = nu == 0 ? 1.0 : 0.0;
        const double d = nu == 1 ? 0.5 : (nu < 1 && nu != 0 ? std::numeric_limits<double>::infinity() : 0.0);
        return {v, d, Status::Converged, 0.0};
    }
    const cplx y = -0.25 * z * z;
    // Terms t_k = (z/2)^nu (-z^2/4)^k / (k! Gamma(nu+k+1)); derivative uses (nu+2k)/z.
    const cplx lead = std::pow(0.5 * z, nu) * rgamma(nu + 1.0);
    cplx t = 1.0, s = 1.0, ds = nu;
    double abs_sum = 1.0;
    int quiet = 0;
    bool ok = false;
    for (int k = 1; k < 5000; ++k) {
        t *= y / (double(k) * (nu + k));
        s += t;
        ds += (nu + 2.0 * k) * t;
        abs_sum += std::abs(t);
        if (std::abs(t) <= 1e-17 * std::abs(s) && std::abs(y) / (k * std::abs(nu + k)) < 0.5) {
            if (++quiet >= 3) {
                ok = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (!ok) {
        throw Error(ErrorKind::NonConvergent, "Bessel series did not converge");
    }
    (void)abs_sum;
    return {lead * s, lead * ds / z, Status::Converged, 0.0};
}

namespace {

// H^(1)_nu(x) = (2 / (pi i)) exp(-i nu pi / 2) K_nu(-i x), K_nu(t) = sqrt(pi / 2t) W_{0,nu}(2t).
SpecialValue hankel1(double nu, double x) {
    const cplx t(0.0, -x);
    const SpecialValue w = whittaker_W(0.0, nu, 2.0 * t);
    const cplx st = std::sqrt(t);
    const cplx k = std::sqrt(pi / 2.0) / st * w.value;
    const cplx dk = std::sqrt(pi / 2.0) * (-0.5 / (st * t) * w.value + 2.0 / st * w.derivative);
    const cplx pref = 2.0 / (pi * I) * std::exp(cplx(0.0, -0.5 * nu * pi));
    return {pref * k, pref * dk * (-I), w.status, w.log_scale};
}

double hankel_envelope(double x) { return std::sqrt(2.0 / (pi * x)); }

} // namespace

SpecialValue bessel_J(double nu, double x) {
    if (!(x >= 0)) {
        throw Error(ErrorKind::BranchUnsupported, "bessel_J needs x >= 0");
    }
    if (nu < 0 && nu == std::floor(nu)) {
        const SpecialValue p = bessel_J(-nu, x);
        const double sgn = std::fmod(-nu, 2.0) == 0.0 ? 1.0 : -1.0;
        return {sgn * p.value, sgn * p.derivative, p.status, p.log_scale};
    }
    if (x == 0.0) {
        return bessel_J_series(nu, 0.0);
    }
    // The series cancels like exp(x); accept it while that stays small next to the
    // oscillation envelope, otherwise go through the Hankel function.
    const double growth = std::exp(x) / std::sqrt(2 * pi * std::max(x, 1.0));
    if (growth <= max_condition * hankel_envelope(x) || x <= std::abs(nu)) {
        return bessel_J_series(nu, x);
    }
    if (nu >= 0) {
        const SpecialValue h = hankel1(nu, x);
        return {h.value.real(), h.derivative.real(), Status::Converged, 0.0};
    }
    // J_{-a} = cos(a pi) J_a - sin(a pi) Y_a
    const double a = -nu;
    const SpecialValue h = hankel1(a, x);
    const double c = std::cos(a * pi), s = std::sin(a * pi);
    return {c * h.value.real() - s * h.value.imag(), c * h.derivative.real() - s * h.derivative.imag(),
            Status::Converged, 0.0};
}

SpecialValue bessel_Y(double nu, double x) {
    if (!(x > 0)) {
        throw Error(ErrorKind::BranchUnsupported, "bessel_Y needs x > 0");
    }
    if (nu < 0) {
        throw Error(ErrorKind::BranchUnsupported, "bessel_Y is provided for nu >= 0");
    }
    const SpecialValue h = hankel1(nu, x);
    return fold(h.value.imag(), h.derivative.imag(), h.log_scale, Status::Converged);
}

SpecialValue bessel_I(double nu, double x) {
    if (!(x >= 0)) {
        throw Error(ErrorKind::BranchUnsupported, "bessel_I needs x >= 0");
    }
    if (nu < 0 && nu == std::floor(nu)) {
        return bessel_I(-nu, x);
    }
    if (x == 0.0) {
        return bessel_J_series(nu, 0.0);
    }
    if (x > 30.0) {
        // e^x / sqrt(2 pi x) sum (-1)^k a_k(nu) / x^k
        const double mu4 = 4.0 * nu * nu;
        double c = 1.0, s = 1.0, ds = 0.0, prev = 1.0;
        bool ok = false;
        for (int k = 1; k < 200; ++k) {
            c *= -(mu4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
            s += c;
            ds += -k * c / x;
            if (std::abs(c) <= 1e-17 * std::abs(s)) {
                ok = true;
                break;
            }
            if (std::abs(c) > prev && k > 2 * std::abs(nu) + 2) {
                break;
            }
            prev = std::abs(c);
        }
        if (ok) {
            const double v = s / std::sqrt(2 * pi * x);
            const double d = ((1.0 - 0.5 / x) * s + ds) / std::sqrt(2 * pi * x);
            return fold(v, d, x, Status::AsymptoticBranch);
        }
    }
    // Positive-term series, rescaled to survive large x.
    const double y = 0.25 * x * x;
    double t = 1.0, s = 1.0, ds = nu;
    int rescales = 0;
    int quiet = 0;
    for (int k = 1; k < 100000; ++k) {
        t *= y / (double(k) * (nu + k));
        s += t;
        ds += (nu + 2.0 * k) * t;
        if (s > rescale) {
            s /= rescale;
            ds /= rescale;
            t /= rescale;
            ++rescales;
        }
        if (std::abs(t) <= 1e-17 * std::abs(s) && y / (k * std::abs(nu + k)) < 0.5) {
            if (++quiet >= 3) {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    // log of (x/2)^nu / Gamma(nu+1)
    const double lead_log = nu * std::log(0.5 * x);
    const double rg = rgamma(nu + 1.0);
    const double ls = lead_log + rescales * log_rescale;
    return fold(rg * s, rg * ds / x, ls, Status::Converged);
}

SpecialValue decaying_exterior_basis(double nu, double x) {
    if (!(x > 0)) {
        throw Error(ErrorKind::BranchUnsupported, "decaying_exterior_basis needs x > 0");
    }
    const SpecialValue w = whittaker_W(0.0, std::abs(nu), 2.0 * x);
    const double sx = std::sqrt(x);
    const double c = std::sqrt(pi / 2.0);
    const cplx v = c / sx * w.value;
    const cplx d = c * (-0.5 / (sx * x) * w.value + 2.0 / sx * w.derivative);
    return {v.real(), d.real(), w.status, w.log_scale};
}

} // namespace dirac2d::specfun
