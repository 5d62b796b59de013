#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace dirac2d {

/// Angular profile W(theta) of the second configuration, where A_theta = W(theta)/r.
/// Tabulated samples cover [0, 2pi] on a uniform grid including both end points,
/// so a periodic profile has samples.front() == samples.back().
struct AngularProfile {
    enum class Kind { None, Constant, Tabulated };

    Kind kind = Kind::None;
    double w0 = 0.0;
    std::vector<double> samples;

    static AngularProfile none() { return {}; }
    static AngularProfile constant(double w0);
    static AngularProfile tabulated(std::vector<double> samples);
    /// Samples `fn` on `intervals` uniform subintervals of [0, 2pi].
    static AngularProfile sample(const std::function<double(double)>& fn, int intervals = 1024);

    /// Throws InvalidConfig for a tabulated profile that is not periodic or too short.
    void validate() const;

    /// Piecewise-linear interpolant of the samples (exact for None/Constant).
    double value(double theta) const;
    /// Integral of W from 0 to theta, theta in [0, 2pi]. For tabulated profiles this is
    /// the exact integral of the interpolant, so integral(2pi) is the trapezoid sum.
    double integral(double theta) const;
    /// Closed-loop integral over one period.
    double loop_integral() const;

    bool operator==(const AngularProfile&) const = default;
};

enum class ModeFamily { Config1, Config2 };

struct AngularMode {
    ModeFamily family = ModeFamily::Config1;
    int k = 1;                ///< odd integer label
    double eps_theta = 0.5;   ///< angular eigenvalue
    double charge = 1.0;      ///< e used for the holonomy (Config2 only)
    double holonomy = 0.0;    ///< (e / 2pi) * loop integral of W
    AngularProfile profile;
    /// Set when eps_theta vanishes: the loop phase is an odd multiple of pi and both
    /// radial solutions are regular at the origin.
    bool coincidence = false;
};

AngularMode quantize_config1(int k);
AngularMode quantize_config2(int k, const AngularProfile& profile, double charge);

/// F(theta) = exp(i [eps_theta * theta - e * int_0^theta W]), the solution of
/// (-i d/dtheta + e W) F = eps_theta F with F(0) = 1.
std::complex<double> angular_factor(const AngularMode& mode, double theta);

/// J_z = -i d/dtheta + sigma_3 / 2 eigenvalue, k/2. Only defined for Config1 modes.
double total_angular_momentum(const AngularMode& mode);

} // namespace dirac2d
