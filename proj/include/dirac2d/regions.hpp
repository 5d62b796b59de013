#pragma once

#include "dirac2d/model.hpp"
#include "dirac2d/radial.hpp"

#include <string>
#include <vector>

namespace dirac2d {

enum class RegionTable { T1_Spos, T2_Sneg_mGt, T3_Sneg_2mLt, T4_Spos, T5_Sneg_mGt, T6_Sneg_2mLt };

const char* to_string(RegionTable t);

struct ShellCharacter {
    double r_lo = 0.0;
    double r_hi = 0.0;
    Character character = Character::Decaying;
    /// First family: gamma^2 (positive decays). Second family: alpha^2 (negative decays).
    double kappa2 = 0.0;
};

struct RegionLabel {
    RegionTable table = RegionTable::T1_Spos;
    /// Roman numeral of the matching row, "I/II" for the duplicated rows of the
    /// S0 < 0, m > |S0| table, or "Threshold" when some shell sits on |kappa^2| < 1e-12.
    std::string region;
    std::vector<ShellCharacter> shells;

    bool threshold() const { return region == "Threshold"; }
    bool operator==(const RegionLabel&) const = default;
};

/// One printed row: the region name and, per shell, whether the "<" inequality holds.
struct TableRow {
    std::string region;
    std::vector<bool> below;
};

/// Throws Unclassified for S0 < 0 with m <= |S0| <= 2m.
RegionTable select_table(const PotentialConfig& config, const PhysicalParams& phys);

/// Rows as printed, merged where two printed rows coincide.
const std::vector<TableRow>& table_rows(RegionTable table);
/// Number of rows in the printed table (8 for the first configuration, 6 for the second).
int printed_row_count(RegionTable table);

/// Throws Unclassified (uncovered S0 regime) or NoTableRow (no printed row has this
/// combination of shell characters).
RegionLabel classify(const PotentialConfig& config, const PhysicalParams& phys, double energy);

/// Sorted energies at which some shell's kappa^2 changes sign.
std::vector<double> region_boundaries(const PotentialConfig& config, const PhysicalParams& phys);

} // namespace dirac2d
