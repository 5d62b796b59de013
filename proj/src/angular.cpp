#include "dirac2d/angular.hpp"

#include "dirac2d/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dirac2d {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_odd(int k) {
    if (k % 2 == 0) {
        throw Error(ErrorKind::InvalidMode, "angular label k must be odd, got " + std::to_string(k));
    }
}

} // namespace

AngularProfile AngularProfile::constant(double w0) {
    AngularProfile p;
    p.kind = Kind::Constant;
    p.w0 = w0;
    return p;
}

AngularProfile AngularProfile::tabulated(std::vector<double> samples) {
    AngularProfile p;
    p.kind = Kind::Tabulated;
    p.samples = std::move(samples);
    p.validate();
    return p;
}

AngularProfile AngularProfile::sample(const std::function<double(double)>& fn, int intervals) {
    if (intervals < 2) {
        throw Error(ErrorKind::InvalidConfig, "angular grid needs at least 2 intervals");
    }
    std::vector<double> s(static_cast<std::size_t>(intervals) + 1);
    for (int j = 0; j < intervals; ++j) {
        s[static_cast<std::size_t>(j)] = fn(two_pi * j / intervals);
    }
    s.back() = s.front();
    return tabulated(std::move(s));
}

void AngularProfile::validate() const {
    if (kind != Kind::Tabulated) {
        if (!std::isfinite(w0)) {
            throw Error(ErrorKind::InvalidConfig, "angular profile w0 must be finite");
        }
        return;
    }
    if (samples.size() < 3) {
        throw Error(ErrorKind::InvalidConfig, "tabulated angular profile needs at least 3 samples");
    }
    for (double v : samples) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidConfig, "tabulated angular profile has a non-finite sample");
        }
    }
    if (samples.front() != samples.back()) {
        throw Error(ErrorKind::InvalidConfig, "tabulated angular profile is not periodic (first != last sample)");
    }
}

double AngularProfile::value(double theta) const {
    switch (kind) {
    case Kind::None:
        return 0.0;
    case Kind::Constant:
        return w0;
    case Kind::Tabulated:
        break;
    }
    const auto n = samples.size() - 1;
    double t = std::fmod(theta, two_pi);
    if (t < 0) {
        t += two_pi;
    }
    const double h = two_pi / static_cast<double>(n);
    auto j = static_cast<std::size_t>(t / h);
    if (j >= n) {
        j = n - 1;
    }
    const double f = (t - h * static_cast<double>(j)) / h;
    return samples[j] * (1.0 - f) + samples[j + 1] * f;
}

double AngularProfile::integral(double theta) const {
    switch (kind) {
    case Kind::None:
        return 0.0;
    case Kind::Constant:
        return w0 * theta;
    case Kind::Tabulated:
        break;
    }
    const auto n = samples.size() - 1;
    const double h = two_pi / static_cast<double>(n);
    if (theta >= two_pi) {
        return loop_integral();
    }
    double acc = 0.0;
    std::size_t j = 0;
    for (; j < n && h * static_cast<double>(j + 1) <= theta; ++j) {
        acc += 0.5 * h * (samples[j] + samples[j + 1]);
    }
    if (j < n) {
        const double d = theta - h * static_cast<double>(j);
        const double slope = (samples[j + 1] - samples[j]) / h;
        acc += samples[j] * d + 0.5 * slope * d * d;
    }
    return acc;
}

double AngularProfile::loop_integral() const {
    switch (kind) {
    case Kind::None:
        return 0.0;
    case Kind::Constant:
        return two_pi * w0;
    case Kind::Tabulated:
        break;
    }
    const auto n = samples.size() - 1;
    const double h = two_pi / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += 0.5 * h * (samples[j] + samples[j + 1]);
    }
    return acc;
}

AngularMode quantize_config1(int k) {
    require_odd(k);
    AngularMode mode;
    mode.family = ModeFamily::Config1;
    mode.k = k;
    mode.eps_theta = 0.5 * k;
    return mode;
}

AngularMode quantize_config2(int k, const AngularProfile& profile, double charge) {
    require_odd(k);
    profile.validate();
    AngularMode mode;
    mode.family = ModeFamily::Config2;
    mode.k = k;
    mode.charge = charge;
    mode.profile = profile;
    // Single-valuedness: exp(i [2pi eps - e loop(W)]) = -1.
    mode.holonomy = charge * profile.loop_integral() / two_pi;
    mode.eps_theta = 0.5 * k + mode.holonomy;
    mode.coincidence = std::abs(mode.eps_theta) < 1e-12;
    return mode;
}

std::complex<double> angular_factor(const AngularMode& mode, double theta) {
    double phase = mode.eps_theta * theta;
    if (mode.family == ModeFamily::Config2) {
        phase -= mode.charge * mode.profile.integral(theta);
    }
    return std::polar(1.0, phase);
}

double total_angular_momentum(const AngularMode& mode) {
    if (mode.family != ModeFamily::Config1) {
        throw Error(ErrorKind::InvalidMode, "J_z is not conserved for a theta-dependent angular potential");
    }
    return 0.5 * mode.k;
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidMode: return "InvalidMode";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::BranchUnsupported: return "BranchUnsupported";
    case ErrorKind::IndexDegenerate: return "IndexDegenerate";
    case ErrorKind::ThresholdEnergy: return "ThresholdEnergy";
    case ErrorKind::SingularEnergy: return "SingularEnergy";
    case ErrorKind::Unclassified: return "Unclassified";
    case ErrorKind::NoTableRow: return "NoTableRow";
    case ErrorKind::WindowOutsideRegion: return "WindowOutsideRegion";
    case ErrorKind::ScatteringOnly: return "ScatteringOnly";
    case ErrorKind::StiffnessFailure: return "StiffnessFailure";
    case ErrorKind::PrecisionUnreachable: return "PrecisionUnreachable";
    }
    return "Unknown";
}

} // namespace dirac2d
