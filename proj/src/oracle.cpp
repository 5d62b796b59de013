#include "dirac2d/oracle.hpp"

#include "dirac2d/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirac2d::oracle {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 4>;

struct RadialSystem {
    double P, Q, eW, eps_theta;
    std::size_t* calls;

    void operator()(const State& x, State& dx, double r) const {
        ++*calls;
        const double g = eW + eps_theta / r;
        // x = (Re Phi+, Im Phi+, Re Phi-, Im Phi-)
        dx[0] = g * x[0] - Q * x[2];
        dx[1] = g * x[1] - Q * x[3];
        dx[2] = -P * x[0] - g * x[2];
        dx[3] = -P * x[1] - g * x[3];
    }
};

State pack(const Spinor& s) { return {s[0].real(), s[0].imag(), s[1].real(), s[1].imag()}; }
Spinor unpack(const State& x) { return {cplx(x[0], x[1]), cplx(x[2], x[3])}; }

} // namespace

IVPResult integrate(const IVPSpec& spec) {
    if (!(spec.r_start > 0) || !(spec.r_end > 0)) {
        throw Error(ErrorKind::InvalidConfig, "integration interval must avoid r = 0");
    }
    if (!(spec.rtol > 0) || !(spec.atol > 0)) {
        throw Error(ErrorKind::InvalidConfig, "integration tolerances must be positive");
    }
    if (spec.layout.empty()) {
        throw Error(ErrorKind::InvalidConfig, "integration needs at least one shell");
    }
    const double dir = spec.r_end >= spec.r_start ? 1.0 : -1.0;
    const double lo = std::min(spec.r_start, spec.r_end), hi = std::max(spec.r_start, spec.r_end);

    std::vector<double> breaks;
    for (const auto& sh : spec.layout) {
        for (double edge : {sh.r_lo, sh.r_hi}) {
            if (edge > lo && edge < hi) {
                breaks.push_back(edge);
            }
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (dir < 0) {
        std::reverse(breaks.begin(), breaks.end());
    }
    breaks.push_back(spec.r_end);

    IVPResult out;
    State x = pack(spec.initial);
    std::size_t next_sample = 0;
    double r0 = spec.r_start;
    for (double r1 : breaks) {
        const double mid = 0.5 * (r0 + r1);
        const auto& sh = spec.layout[shell_index(spec.layout, mid)];
        const double e = spec.phys.e, m = spec.phys.m;
        std::size_t calls = 0;
        RadialSystem sys{m + sh.S + e * sh.V - spec.energy, m + sh.S - e * sh.V + spec.energy, e * sh.W,
                         spec.eps_theta, &calls};

        std::vector<double> times{r0};
        while (next_sample < spec.samples.size() && dir * (spec.samples[next_sample] - r1) < 0) {
            if (dir * (spec.samples[next_sample] - r0) > 0) {
                times.push_back(spec.samples[next_sample]);
            }
            ++next_sample;
        }
        times.push_back(r1);

        auto stepper = odeint::make_dense_output(spec.atol, spec.rtol, odeint::runge_kutta_dopri5<State>());
        const bool last = r1 == spec.r_end;
        std::vector<std::pair<double, State>> seen;
        std::size_t steps = 0;
        try {
            steps = odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), dir * 1e-3 * std::abs(r1 - r0),
                                            [&](const State& s, double r) { seen.emplace_back(r, s); });
        } catch (const std::exception& ex) {
            std::ostringstream msg;
            msg << "integration failed on [" << r0 << ", " << r1 << "]: " << ex.what();
            throw Error(ErrorKind::StiffnessFailure, msg.str());
        }
        for (std::size_t i = 1; i < seen.size(); ++i) {
            // The segment end is reported once, after the last segment.
            if (i + 1 == seen.size() && !last) {
                break;
            }
            out.r.push_back(seen[i].first);
            out.phi.push_back(unpack(seen[i].second));
        }
        x = seen.back().second;
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::StiffnessFailure, "integration produced a non-finite value");
            }
        }
        out.stats.steps += steps;
        out.stats.rhs_calls += calls;
        const std::size_t attempts = calls > 0 ? (calls - 1) / 6 : 0;
        out.stats.rejected += attempts > steps ? attempts - steps : 0;
        r0 = r1;
    }
    return out;
}

Spinor regular_seed(const ShellPotential& shell, const PhysicalParams& phys, double energy, double eps_theta, double r) {
    const double P = phys.m + shell.S + phys.e * shell.V - energy;
    const double Q = phys.m + shell.S - phys.e * shell.V + energy;
    const double eW = phys.e * shell.W;
    const bool upper = eps_theta >= 0;
    const double s = std::abs(eps_theta);
    double a = upper ? 1.0 : 0.0;
    double b = upper ? 0.0 : 1.0;
    double sa = a, sb = b, rn = 1.0;
    for (int n = 1; n < 200; ++n) {
        double an, bn;
        if (upper) {
            an = (eW * a - Q * b) / n;
            bn = (-P * a - eW * b) / (n + 2 * s);
        } else {
            bn = (-P * a - eW * b) / n;
            an = (eW * a - Q * b) / (n + 2 * s);
        }
        a = an;
        b = bn;
        rn *= r;
        sa += a * rn;
        sb += b * rn;
        if (std::abs(a * rn) + std::abs(b * rn) < 1e-18 * (std::abs(sa) + std::abs(sb))) {
            break;
        }
    }
    const double lead = std::pow(r, s);
    return {cplx(lead * sa), cplx(lead * sb)};
}

double shooting_determinant(const PotentialConfig& config, const PhysicalParams& phys, const AngularMode& mode,
                            double energy, const ShootingOptions& options) {
    const auto layout = shells(config);
    const double k2 = phys.m * phys.m - energy * energy;
    if (!(k2 > 0)) {
        throw Error(ErrorKind::ScatteringOnly, "no decaying exterior solution for |E| >= m");
    }
    const double kappa = std::sqrt(k2);
    const double r_in = options.inner_fraction * config.a;
    const double r_match = config.c;

    IVPSpec out;
    out.layout = layout;
    out.phys = phys;
    out.energy = energy;
    out.eps_theta = mode.eps_theta;
    out.rtol = options.rtol;
    out.atol = options.atol;
    out.r_start = r_in;
    out.r_end = r_match;
    out.initial = regular_seed(layout.front(), phys, energy, mode.eps_theta, r_in);
    const Spinor o = integrate(out).end();

    IVPSpec in = out;
    in.r_start = r_match + options.exterior_efolds / kappa;
    in.r_end = r_match;
    const double Q = phys.m + energy;
    in.initial = {cplx(Q / kappa), cplx(1.0)};
    const Spinor i = integrate(in).end();

    const double det = (o[0] * i[1] - o[1] * i[0]).real();
    const double no = std::hypot(std::abs(o[0]), std::abs(o[1]));
    const double ni = std::hypot(std::abs(i[0]), std::abs(i[1]));
    return det / (no * ni);
}

// ---------------------------------------------------------------------------
// Extended-precision series

namespace {

namespace mp = boost::multiprecision;
using mpf = mp::cpp_bin_float_100;
using mpc = mp::cpp_complex_100;

const mpf mp_pi = boost::math::constants::pi<mpf>();
const mpf unit_roundoff("1e-98");

// value, derivative and an absolute error estimate (rounding plus truncation)
struct MpVal {
    mpc v;
    mpc d;
    mpf noise;
};

mpc to_mp(cplx z) { return mpc(mpf(z.real()), mpf(z.imag())); }
cplx to_double(const mpc& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

mpf mp_rgamma(const mpf& x) {
    if (x <= 0 && x == mp::floor(x)) {
        return mpf(0);
    }
    return 1 / boost::math::tgamma(x);
}

bool integer_like(const mpf& x) { return mp::abs(x - mp::round(x)) < mpf("1e-40"); }

// sum_n t_n with t_{n+1} = t_n * num(n) / den(n) * w / (n+1), t_0 = 1, plus
// sum_n n t_n. Returns the truncation bound from a geometric tail.
struct MpSeries {
    mpc sum;
    mpc nsum;
    mpf abs_sum;
    mpf tail;
};

MpSeries hyper_series(const mpf& a, const mpf& b, const mpc& w, int /*digits*/) {
    MpSeries s;
    mpc t = 1;
    s.sum = 1;
    s.nsum = 0;
    s.abs_sum = 1;
    const mpf aw = mp::abs(w);
    const mpf target = mpf("1e-96");
    for (int n = 0; n < 20000; ++n) {
        t *= (a + n) / (b + n) * w / mpf(n + 1);
        s.sum += t;
        s.nsum += mpf(n + 1) * t;
        const mpf at = mp::abs(t);
        s.abs_sum += at;
        const int N = n + 1;
        const mpf bN = b + N + 1;
        if (bN > 0) {
            const mpf ratio = std::max(mpf(1), (mp::abs(a) + N + 1) / bN);
            const mpf q = aw * ratio / (N + 2);
            if (q < 0.5) {
                const mpf tail = at * q / (1 - q) * (N + 2);
                if (tail <= target * mp::abs(s.sum) || at == 0) {
                    s.tail = tail;
                    return s;
                }
            }
        }
    }
    throw Error(ErrorKind::PrecisionUnreachable, "extended-precision series did not converge");
}

MpVal mp_kummer(const mpf& a, const mpf& b, const mpc& z, int digits) {
    if (b <= 0 && integer_like(b)) {
        throw Error(ErrorKind::PrecisionUnreachable, "1F1 with non-positive integer b");
    }
    const MpSeries s = hyper_series(a, b, z, digits);
    MpVal out;
    out.v = s.sum;
    out.d = mp::abs(z) == 0 ? mpc(a / b) : mpc(s.nsum / z);
    out.noise = s.abs_sum * unit_roundoff + s.tail;
    return out;
}

MpVal mp_whittaker_M(const mpf& kappa, const mpf& mu, const mpc& z, int digits) {
    const MpVal f = mp_kummer(mpf(0.5) + mu - kappa, 1 + 2 * mu, z, digits);
    const mpc pref = mp::exp(-z / 2 + (mu + mpf(0.5)) * mp::log(z));
    MpVal out;
    out.v = pref * f.v;
    out.d = pref * ((mpf(-0.5) + (mu + mpf(0.5)) / z) * f.v + f.d);
    out.noise = mp::abs(pref) * f.noise;
    return out;
}

MpVal mp_whittaker_W_direct(const mpf& kappa, const mpf& mu, const mpc& z, int digits) {
    const mpf c1 = boost::math::tgamma(-2 * mu) * mp_rgamma(mpf(0.5) - mu - kappa);
    const mpf c2 = boost::math::tgamma(2 * mu) * mp_rgamma(mpf(0.5) + mu - kappa);
    const MpVal m1 = mp_whittaker_M(kappa, mu, z, digits);
    const MpVal m2 = mp_whittaker_M(kappa, -mu, z, digits);
    MpVal out;
    out.v = c1 * m1.v + c2 * m2.v;
    out.d = c1 * m1.d + c2 * m2.d;
    const mpf level = mp::abs(c1) * mp::abs(m1.v) + mp::abs(c2) * mp::abs(m2.v);
    out.noise = level * unit_roundoff + mp::abs(c1) * m1.noise + mp::abs(c2) * m2.noise;
    return out;
}

const mpf order_shift("1e-26");

// Symmetric limit for integer orders: f(x) = (f(x+d) + f(x-d)) / 2 + O(d^2).
template <class F>
MpVal symmetric_limit(const mpf& x, F fn) {
    if (!integer_like(x)) {
        return fn(x);
    }
    const MpVal p = fn(x + order_shift);
    const MpVal q = fn(x - order_shift);
    MpVal out;
    out.v = (p.v + q.v) / 2;
    out.d = (p.d + q.d) / 2;
    // O(d^2) remainder, taken relative to the function scale
    out.noise = (p.noise + q.noise) / 2 + order_shift * order_shift * (mp::abs(p.v) + mp::abs(q.v)) * 100;
    return out;
}

MpVal mp_whittaker_W(const mpf& kappa, const mpf& mu, const mpc& z, int digits) {
    return symmetric_limit(2 * mu, [&](const mpf& two_mu) { return mp_whittaker_W_direct(kappa, two_mu / 2, z, digits); });
}

// J (sign = -1) or I (sign = +1) ascending series for real order.
MpVal mp_bessel_series(const mpf& nu, const mpc& z, int sign, int digits) {
    if (nu < 0 && integer_like(nu)) {
        MpVal pos = mp_bessel_series(-nu, z, sign, digits);
        const long n = std::lround(static_cast<double>(-nu));
        if (sign < 0 && (n % 2) != 0) {
            pos.v = -pos.v;
            pos.d = -pos.d;
        }
        return pos;
    }
    // sum_k (+-z^2/4)^k / (k! (nu+1)_k)
    const mpc w = mpf(sign) * z * z / 4;
    mpc t = 1, sum = 1, dsum = nu;
    mpf abs_sum = 1;
    const mpf target = mpf("1e-96");
    mpf tail = 0;
    bool done = false;
    const mpf aw = mp::abs(w);
    for (int k = 1; k < 20000; ++k) {
        t *= w / (mpf(k) * (nu + k));
        sum += t;
        dsum += (nu + 2 * k) * t;
        const mpf at = mp::abs(t);
        abs_sum += at;
        const mpf den = (k + 1) * (nu + k + 1);
        if (den > 0) {
            const mpf q = aw / den;
            if (q < 0.5) {
                tail = at * q / (1 - q) * (mp::abs(nu) + 2 * k + 2);
                if (tail <= target * mp::abs(sum)) {
                    done = true;
                    break;
                }
            }
        }
    }
    if (!done) {
        throw Error(ErrorKind::PrecisionUnreachable, "extended-precision Bessel series did not converge");
    }
    const mpc lead = mp::exp(nu * mp::log(z / 2)) * mp_rgamma(nu + 1);
    MpVal out;
    out.v = lead * sum;
    out.d = lead * dsum / z;
    out.noise = mp::abs(lead) * (abs_sum * unit_roundoff + tail);
    return out;
}

MpVal mp_bessel_K(const mpf& nu, const mpc& z, int digits) {
    return symmetric_limit(nu, [&](const mpf& n) {
        const MpVal ip = mp_bessel_series(n, z, 1, digits);
        const MpVal im = mp_bessel_series(-n, z, 1, digits);
        const mpf c = mp_pi / (2 * mp::sin(n * mp_pi));
        MpVal out;
        out.v = c * (im.v - ip.v);
        out.d = c * (im.d - ip.d);
        out.noise = mp::abs(c) * ((mp::abs(im.v) + mp::abs(ip.v)) * unit_roundoff + im.noise + ip.noise);
        return out;
    });
}

MpVal mp_bessel_Y(const mpf& nu, const mpc& z, int digits) {
    return symmetric_limit(nu, [&](const mpf& n) {
        const MpVal jp = mp_bessel_series(n, z, -1, digits);
        const MpVal jm = mp_bessel_series(-n, z, -1, digits);
        const mpf s = mp::sin(n * mp_pi), c = mp::cos(n * mp_pi);
        MpVal out;
        out.v = (jp.v * c - jm.v) / s;
        out.d = (jp.d * c - jm.d) / s;
        out.noise = ((mp::abs(jp.v) + mp::abs(jm.v)) * unit_roundoff + jp.noise + jm.noise) / mp::abs(s);
        return out;
    });
}

std::string format(const mpc& v, int digits) {
    std::ostringstream os;
    os << v.real().str(digits, std::ios::scientific);
    if (v.imag() != 0) {
        os << (v.imag() < 0 ? " - " : " + ") << mp::abs(v.imag()).str(digits, std::ios::scientific) << "i";
    }
    return os.str();
}

} // namespace

const char* to_string(Function f) {
    switch (f) {
    case Function::Kummer1F1: return "kummer_M";
    case Function::TricomiU: return "tricomi_U";
    case Function::WhittakerM: return "whittaker_M";
    case Function::WhittakerW: return "whittaker_W";
    case Function::BesselJ: return "bessel_J";
    case Function::BesselY: return "bessel_Y";
    case Function::BesselI: return "bessel_I";
    case Function::BesselK: return "bessel_K";
    }
    return "?";
}

Function function_from_string(const std::string& name) {
    for (Function f : {Function::Kummer1F1, Function::TricomiU, Function::WhittakerM, Function::WhittakerW,
                       Function::BesselJ, Function::BesselY, Function::BesselI, Function::BesselK}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    if (name == "decaying_exterior_basis") {
        return Function::BesselK;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown special function '" + name + "'");
}

SeriesValue series_oracle(Function f, const std::vector<double>& params, cplx z, int digits) {
    if (digits < 1 || digits > 90) {
        throw Error(ErrorKind::PrecisionUnreachable, "requested digits outside 1..90");
    }
    if (std::abs(z) > 40.0) {
        throw Error(ErrorKind::PrecisionUnreachable, "|z| beyond the series radius policy of 40");
    }
    const std::size_t need = (f == Function::Kummer1F1 || f == Function::TricomiU || f == Function::WhittakerM
                              || f == Function::WhittakerW)
                                 ? 2
                                 : 1;
    if (params.size() != need) {
        throw Error(ErrorKind::InvalidConfig, std::string(to_string(f)) + " expects " + std::to_string(need) + " parameters");
    }
    const mpc zz = to_mp(z);
    const mpf p0(params[0]);
    const mpf p1 = need > 1 ? mpf(params[1]) : mpf(0);
    if (mp::abs(zz) == 0 && f != Function::Kummer1F1 && f != Function::BesselJ && f != Function::BesselI) {
        throw Error(ErrorKind::PrecisionUnreachable, "z = 0 is singular for this function");
    }
    MpVal r;
    switch (f) {
    case Function::Kummer1F1:
        if (mp::abs(zz) == 0) {
            r = {mpc(1), mpc(p0 / p1), mpf(0)};
        } else {
            r = mp_kummer(p0, p1, zz, digits);
        }
        break;
    case Function::WhittakerM:
        r = mp_whittaker_M(p0, p1, zz, digits);
        break;
    case Function::WhittakerW:
        r = mp_whittaker_W(p0, p1, zz, digits);
        break;
    case Function::TricomiU: {
        const MpVal w = mp_whittaker_W(p1 / 2 - p0, (p1 - 1) / 2, zz, digits);
        const mpc pref = mp::exp(zz / 2 - p1 / 2 * mp::log(zz));
        r.v = pref * w.v;
        r.d = pref * (w.d + (mpf(0.5) - p1 / (2 * zz)) * w.v);
        r.noise = mp::abs(pref) * w.noise;
        break;
    }
    case Function::BesselJ:
        if (mp::abs(zz) == 0) {
            r = {mpc(p0 == 0 ? 1 : 0), mpc(p0 == 1 ? mpf(0.5) : mpf(0)), mpf(0)};
        } else {
            r = mp_bessel_series(p0, zz, -1, digits);
        }
        break;
    case Function::BesselI:
        if (mp::abs(zz) == 0) {
            r = {mpc(p0 == 0 ? 1 : 0), mpc(p0 == 1 ? mpf(0.5) : mpf(0)), mpf(0)};
        } else {
            r = mp_bessel_series(p0, zz, 1, digits);
        }
        break;
    case Function::BesselY:
        r = mp_bessel_Y(p0, zz, digits);
        break;
    case Function::BesselK:
        r = mp_bessel_K(p0, zz, digits);
        break;
    }
    const mpf mag = mp::abs(r.v);
    const mpf relerr = mag > 0 ? r.noise / mag : r.noise;
    if (relerr > mp::pow(mpf(10), -digits)) {
        std::ostringstream msg;
        msg << to_string(f) << ": only about " << static_cast<double>(-mp::log10(relerr)) << " digits reachable";
        throw Error(ErrorKind::PrecisionUnreachable, msg.str());
    }
    SeriesValue out;
    out.value = to_double(r.v);
    out.derivative = to_double(r.d);
    out.text = format(r.v, digits);
    out.remainder_bound = static_cast<double>(relerr);
    return out;
}

} // namespace dirac2d::oracle
