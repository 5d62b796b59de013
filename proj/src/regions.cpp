#include "dirac2d/regions.hpp"

#include "dirac2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirac2d {

namespace {

constexpr bool D = true;   // "<": decaying
constexpr bool Pr = false; // ">": propagating

const std::vector<TableRow> nested4 = {
    {"I", {D, D, D, D}},      {"II", {D, D, D, Pr}},    {"III", {D, D, Pr, Pr}},  {"IV", {D, Pr, Pr, Pr}},
    {"V", {Pr, D, D, D}},     {"VI", {Pr, D, D, Pr}},   {"VII", {Pr, D, Pr, Pr}}, {"VIII", {Pr, Pr, Pr, Pr}},
};

// Rows I and II are printed with identical conditions.
const std::vector<TableRow> table2 = {
    {"I/II", {D, D, D, D}},   {"III", {D, D, Pr, Pr}},  {"IV", {D, Pr, Pr, Pr}},  {"V", {Pr, D, D, D}},
    {"VI", {Pr, D, Pr, D}},   {"VII", {Pr, D, Pr, Pr}}, {"VIII", {Pr, Pr, Pr, Pr}},
};

const std::vector<TableRow> nested3 = {
    {"I", {D, D, D}}, {"II", {D, D, Pr}}, {"III", {D, Pr, Pr}},
    {"IV", {Pr, D, D}}, {"V", {Pr, D, Pr}}, {"VI", {Pr, Pr, Pr}},
};

const std::vector<TableRow> table5 = {
    {"I", {D, D, D}}, {"II", {D, Pr, D}}, {"III", {D, Pr, Pr}},
    {"IV", {Pr, D, D}}, {"V", {Pr, Pr, D}}, {"VI", {Pr, Pr, Pr}},
};

std::string join(const std::vector<bool>& below) {
    std::string s;
    for (bool b : below) {
        s += b ? '<' : '>';
    }
    return s;
}

} // namespace

const char* to_string(RegionTable t) {
    switch (t) {
    case RegionTable::T1_Spos: return "T1_Spos";
    case RegionTable::T2_Sneg_mGt: return "T2_Sneg_mGt";
    case RegionTable::T3_Sneg_2mLt: return "T3_Sneg_2mLt";
    case RegionTable::T4_Spos: return "T4_Spos";
    case RegionTable::T5_Sneg_mGt: return "T5_Sneg_mGt";
    case RegionTable::T6_Sneg_2mLt: return "T6_Sneg_2mLt";
    }
    return "?";
}

RegionTable select_table(const PotentialConfig& config, const PhysicalParams& phys) {
    const bool first = config.kind == ConfigKind::Config1;
    if (config.kind == ConfigKind::CoulombMagnetic) {
        throw Error(ErrorKind::InvalidConfig, "the Coulomb configuration has no region table");
    }
    const double S0 = config.S0, m = phys.m;
    if (S0 >= 0) {
        return first ? RegionTable::T1_Spos : RegionTable::T4_Spos;
    }
    if (m > -S0) {
        return first ? RegionTable::T2_Sneg_mGt : RegionTable::T5_Sneg_mGt;
    }
    if (2 * m < -S0) {
        return first ? RegionTable::T3_Sneg_2mLt : RegionTable::T6_Sneg_2mLt;
    }
    std::ostringstream msg;
    msg << "no region table covers S0 = " << S0 << " with m = " << m << " (m <= |S0| <= 2m)";
    throw Error(ErrorKind::Unclassified, msg.str());
}

const std::vector<TableRow>& table_rows(RegionTable table) {
    switch (table) {
    case RegionTable::T1_Spos:
    case RegionTable::T3_Sneg_2mLt: return nested4;
    case RegionTable::T2_Sneg_mGt: return table2;
    case RegionTable::T4_Spos:
    case RegionTable::T6_Sneg_2mLt: return nested3;
    case RegionTable::T5_Sneg_mGt: return table5;
    }
    return nested4;
}

int printed_row_count(RegionTable table) {
    switch (table) {
    case RegionTable::T1_Spos:
    case RegionTable::T2_Sneg_mGt:
    case RegionTable::T3_Sneg_2mLt: return 8;
    default: return 6;
    }
}

RegionLabel classify(const PotentialConfig& config, const PhysicalParams& phys, double energy) {
    const RegionTable table = select_table(config, phys);
    const auto layout = shells(config);
    const bool first = config.kind == ConfigKind::Config1;
    const double m = phys.m, e = phys.e;
    const double absS0 = std::abs(config.S0);

    RegionLabel label;
    label.table = table;
    const AngularMode mode = quantize_config1(1);
    const RadialCase rc = first ? RadialCase::C1General : RadialCase::C2General;
    bool at_threshold = false;
    for (const auto& sh : layout) {
        const RadialParams p = effective_params(rc, sh, phys, energy, mode);
        const Character ch = asymptotic_character(p);
        at_threshold = at_threshold || ch == Character::Threshold;
        label.shells.push_back({sh.r_lo, sh.r_hi, ch, p.kappa2});
    }
    if (at_threshold) {
        label.region = "Threshold";
        return label;
    }

    // The printed inequalities, read with V0 throughout.
    const double eV0 = e * config.V0;
    std::vector<double> bounds;
    std::vector<double> lhs;
    if (first) {
        const double ms = table == RegionTable::T1_Spos ? m + config.S0 : (table == RegionTable::T2_Sneg_mGt ? m - absS0 : absS0 - m);
        const double beta = std::sqrt(ms * ms + e * e * config.W0 * config.W0);
        lhs = {std::abs(eV0 - energy), std::abs(energy), std::abs(energy), std::abs(energy)};
        bounds = {beta, beta, ms, m};
    } else {
        const double ms = table == RegionTable::T4_Spos ? m + config.S0 : (table == RegionTable::T5_Sneg_mGt ? m - absS0 : absS0 - m);
        lhs = {std::abs(eV0 - energy), std::abs(energy), std::abs(energy)};
        bounds = {ms, ms, m};
    }
    std::vector<bool> below;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        below.push_back(lhs[i] < bounds[i]);
        if ((label.shells[i].character == Character::Decaying) != below.back()) {
            std::ostringstream msg;
            msg << "table inequality for shell " << i << " disagrees with kappa^2 = " << label.shells[i].kappa2;
            throw Error(ErrorKind::NoTableRow, msg.str());
        }
    }
    for (const auto& row : table_rows(table)) {
        if (row.below == below) {
            label.region = row.region;
            return label;
        }
    }
    std::ostringstream msg;
    msg << "shell pattern " << join(below) << " at E = " << energy << " is not a row of " << to_string(table);
    throw Error(ErrorKind::NoTableRow, msg.str());
}

std::vector<double> region_boundaries(const PotentialConfig& config, const PhysicalParams& phys) {
    const auto layout = shells(config);
    const bool first = config.kind == ConfigKind::Config1;
    const double m = phys.m, e = phys.e;
    std::vector<double> out;
    for (const auto& sh : layout) {
        const double ms = m + sh.S;
        const double half = first ? std::sqrt(ms * ms + e * e * sh.W * sh.W) : std::abs(ms);
        out.push_back(e * sh.V - half);
        out.push_back(e * sh.V + half);
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double v : out) {
        if (uniq.empty() || std::abs(v - uniq.back()) > 1e-14 * std::max(1.0, std::abs(v))) {
            uniq.push_back(v);
        }
    }
    return uniq;
}

} // namespace dirac2d
