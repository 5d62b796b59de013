#include "dirac2d/model.hpp"

#include "dirac2d/error.hpp"

#include <cmath>
#include <sstream>

namespace dirac2d {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::InvalidConfig, std::string(name) + " must be finite");
    }
}

// Step layout without the strict ordering check; empty shells are dropped.
std::vector<ShellPotential> layout(const PotentialConfig& cfg) {
    std::vector<ShellPotential> out;
    auto push = [&](double V, double W, double S, double lo, double hi) {
        if (hi > lo) {
            out.push_back({V, W, S, lo, hi});
        }
    };
    if (cfg.kind == ConfigKind::Config1) {
        push(cfg.V0, cfg.W0, cfg.S0, 0.0, cfg.a);
        push(0.0, cfg.W0, cfg.S0, cfg.a, cfg.b);
        push(0.0, 0.0, cfg.S0, cfg.b, cfg.c);
        push(0.0, 0.0, 0.0, cfg.c, inf);
    } else {
        push(cfg.V0, 0.0, cfg.S0, 0.0, cfg.a);
        push(0.0, 0.0, cfg.S0, cfg.a, cfg.c);
        push(0.0, 0.0, 0.0, cfg.c, inf);
    }
    return out;
}

} // namespace

void PhysicalParams::validate() const {
    require_finite(m, "m");
    require_finite(e, "e");
    require_finite(Z, "Z");
    require_finite(B, "B");
    if (m < 0) {
        throw Error(ErrorKind::InvalidConfig, "mass must be non-negative");
    }
}

void PotentialConfig::validate() const {
    require_finite(V0, "V0");
    require_finite(W0, "W0");
    require_finite(S0, "S0");
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(c, "c");
    w_theta.validate();
    switch (kind) {
    case ConfigKind::Config1:
        if (!(0 < a && a < b && b < c)) {
            std::ostringstream msg;
            msg << "Config1 requires 0 < a < b < c, got a=" << a << " b=" << b << " c=" << c;
            throw Error(ErrorKind::InvalidConfig, msg.str());
        }
        break;
    case ConfigKind::Config2:
        if (!(0 < a && a < c)) {
            std::ostringstream msg;
            msg << "Config2 requires 0 < a < c, got a=" << a << " c=" << c;
            throw Error(ErrorKind::InvalidConfig, msg.str());
        }
        break;
    case ConfigKind::CoulombMagnetic:
        break;
    }
}

std::vector<ShellPotential> shells(const PotentialConfig& config) {
    if (config.kind == ConfigKind::CoulombMagnetic) {
        throw Error(ErrorKind::InvalidConfig, "the Coulomb configuration is not piecewise constant");
    }
    config.validate();
    return layout(config);
}

std::size_t shell_index(const std::vector<ShellPotential>& layout, double r) {
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (layout[i].contains(r)) {
            return i;
        }
    }
    return layout.size() - 1;
}

SymmetryReport check_symmetry(const PotentialConfig& config, double e) {
    if (config.kind == ConfigKind::CoulombMagnetic) {
        return {};
    }
    bool spin = true;
    bool pseudo = true;
    for (const auto& sh : layout(config)) {
        spin = spin && (e * sh.V == sh.S);
        pseudo = pseudo && (e * sh.V == -sh.S);
    }
    SymmetryReport rep;
    if (spin) {
        rep.symmetry = SymmetryCase::SpinSymmetric;
        rep.degenerate = pseudo;
    } else if (pseudo) {
        rep.symmetry = SymmetryCase::PseudoSpinSymmetric;
    }
    return rep;
}

const char* to_string(ConfigKind kind) {
    switch (kind) {
    case ConfigKind::Config1: return "config1";
    case ConfigKind::Config2: return "config2";
    case ConfigKind::CoulombMagnetic: return "coulomb";
    }
    return "?";
}

const char* to_string(SymmetryCase symmetry) {
    switch (symmetry) {
    case SymmetryCase::General: return "General";
    case SymmetryCase::SpinSymmetric: return "SpinSymmetric";
    case SymmetryCase::PseudoSpinSymmetric: return "PseudoSpinSymmetric";
    }
    return "?";
}

} // namespace dirac2d
