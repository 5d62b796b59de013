#pragma once

#include "dirac2d/model.hpp"

#include <string>

namespace dirac2d {

/// Everything a JSON configuration file carries.
struct RunConfig {
    PotentialConfig potential;
    PhysicalParams phys;
    bool operator==(const RunConfig&) const = default;
};

/// Strict reader: "kind" is required, other keys default, unknown keys and
/// non-finite numbers are rejected with InvalidConfig.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON (fixed key order, 17 significant digits). parse_config of the
/// result gives back an equal RunConfig.
std::string emit_config(const RunConfig& config);

AngularProfile parse_profile(const std::string& text);

} // namespace dirac2d
