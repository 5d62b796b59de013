#pragma once

#include "dirac2d/angular.hpp"

#include <limits>
#include <vector>

namespace dirac2d {

/// Units with hbar = c = 1. Z and B are only read by the Coulomb analyzer.
struct PhysicalParams {
    double m = 1.0;
    double e = 1.0;
    double Z = 0.0;
    double B = 0.0;

    void validate() const;
    bool operator==(const PhysicalParams&) const = default;
};

enum class ConfigKind { Config1, Config2, CoulombMagnetic };

/// Config1: V0 for r < a, W0 (A_theta = W0) for r < b, S0 for r < c.
/// Config2: V0 for r < a, S0 for r < c, and an angular profile W(theta)/r.
struct PotentialConfig {
    ConfigKind kind = ConfigKind::Config1;
    double V0 = 0.0;
    double W0 = 0.0;
    double S0 = 0.0;
    double a = 1.0;
    double b = 2.0;
    double c = 3.0;
    AngularProfile w_theta;

    /// Throws InvalidConfig if radii are out of order or a value is not finite.
    void validate() const;
    bool operator==(const PotentialConfig&) const = default;
};

/// Constant couplings on [r_lo, r_hi). The outermost shell has r_hi = +inf.
struct ShellPotential {
    double V = 0.0;
    double W = 0.0;
    double S = 0.0;
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();

    bool contains(double r) const { return r >= r_lo && r < r_hi; }
};

std::vector<ShellPotential> shells(const PotentialConfig& config);

/// Index of the shell containing r (r >= 0).
std::size_t shell_index(const std::vector<ShellPotential>& layout, double r);

enum class SymmetryCase { General, SpinSymmetric, PseudoSpinSymmetric };

struct SymmetryReport {
    SymmetryCase symmetry = SymmetryCase::General;
    /// Both identities hold at once (every shell has V = S = 0).
    bool degenerate = false;
};

/// Exact comparison of e*V against +-S in every non-empty shell. Coinciding radii
/// are accepted here, since they only remove a shell.
SymmetryReport check_symmetry(const PotentialConfig& config, double e);

const char* to_string(ConfigKind kind);
const char* to_string(SymmetryCase symmetry);

} // namespace dirac2d
