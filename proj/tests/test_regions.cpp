#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dirac2d/error.hpp"
#include "dirac2d/regions.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace dirac2d;

namespace {

PotentialConfig cfg(ConfigKind kind, double V0, double W0, double S0) {
    PotentialConfig p;
    p.kind = kind;
    p.V0 = V0;
    p.W0 = W0;
    p.S0 = S0;
    p.a = 1;
    p.b = 2;
    p.c = kind == ConfigKind::Config1 ? 3 : 2;
    return p;
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidConfig;
}

} // namespace

TEST_CASE("table selection") {
    const PhysicalParams phys{};
    CHECK(select_table(cfg(ConfigKind::Config1, 0, 0, 0.0), phys) == RegionTable::T1_Spos);
    CHECK(select_table(cfg(ConfigKind::Config1, 0, 0, 0.4), phys) == RegionTable::T1_Spos);
    CHECK(select_table(cfg(ConfigKind::Config1, 0, 0, -0.4), phys) == RegionTable::T2_Sneg_mGt);
    CHECK(select_table(cfg(ConfigKind::Config1, 0, 0, -2.5), phys) == RegionTable::T3_Sneg_2mLt);
    CHECK(select_table(cfg(ConfigKind::Config2, 0, 0, 0.4), phys) == RegionTable::T4_Spos);
    CHECK(select_table(cfg(ConfigKind::Config2, 0, 0, -0.4), phys) == RegionTable::T5_Sneg_mGt);
    CHECK(select_table(cfg(ConfigKind::Config2, 0, 0, -2.5), phys) == RegionTable::T6_Sneg_2mLt);
    CHECK(kind_of([&] { select_table(cfg(ConfigKind::Config1, 0, 0, -1.5), phys); }) == ErrorKind::Unclassified);
    CHECK(kind_of([&] { select_table(cfg(ConfigKind::Config2, 0, 0, -1.0), phys); }) == ErrorKind::Unclassified);
    CHECK(kind_of([&] { select_table(cfg(ConfigKind::Config2, 0, 0, -2.0), phys); }) == ErrorKind::Unclassified);
}

TEST_CASE("row counts") {
    CHECK(printed_row_count(RegionTable::T1_Spos) == 8);
    CHECK(printed_row_count(RegionTable::T2_Sneg_mGt) == 8);
    CHECK(printed_row_count(RegionTable::T3_Sneg_2mLt) == 8);
    CHECK(printed_row_count(RegionTable::T4_Spos) == 6);
    CHECK(printed_row_count(RegionTable::T5_Sneg_mGt) == 6);
    CHECK(printed_row_count(RegionTable::T6_Sneg_2mLt) == 6);
    CHECK(table_rows(RegionTable::T1_Spos).size() == 8);
    CHECK(table_rows(RegionTable::T2_Sneg_mGt).size() == 7);
    CHECK(table_rows(RegionTable::T3_Sneg_2mLt).size() == 8);
    for (auto t : {RegionTable::T4_Spos, RegionTable::T5_Sneg_mGt, RegionTable::T6_Sneg_2mLt}) {
        CHECK(table_rows(t).size() == 6);
    }
    for (auto t : {RegionTable::T1_Spos, RegionTable::T2_Sneg_mGt, RegionTable::T3_Sneg_2mLt, RegionTable::T4_Spos,
                   RegionTable::T5_Sneg_mGt, RegionTable::T6_Sneg_2mLt}) {
        std::set<std::vector<bool>> seen;
        for (const auto& row : table_rows(t)) {
            CHECK(seen.insert(row.below).second);
        }
    }
}

TEST_CASE("inside the gap of an empty dot is region I") {
    const PhysicalParams phys{};
    const auto label = classify(cfg(ConfigKind::Config1, 0, 0, 0), phys, 0.5);
    CHECK(label.region == "I");
    CHECK(label.shells.size() == 4);
    for (const auto& s : label.shells) {
        CHECK(s.character == Character::Decaying);
    }
    CHECK(classify(cfg(ConfigKind::Config1, 0, 0, 0), phys, 1.5).region == "VIII");
    CHECK(classify(cfg(ConfigKind::Config2, 0, 0, 0), phys, 0.5).region == "I");
}

TEST_CASE("threshold energies are reported, not forced to a side") {
    const PhysicalParams phys{};
    const auto label = classify(cfg(ConfigKind::Config1, 0.5, 0.2, 0.1), phys, 1.0);
    CHECK(label.threshold());
    CHECK(label.shells.back().character == Character::Threshold);
}

TEST_CASE("every printed row is reached and agrees with its inequalities") {
    const PhysicalParams phys{};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> V(-5, 5), W(-2, 2), E(-5, 5);
    struct Regime {
        ConfigKind kind;
        double slo, shi;
    };
    const std::vector<Regime> regimes{{ConfigKind::Config1, 0, 2},     {ConfigKind::Config1, -0.95, -0.05},
                                      {ConfigKind::Config1, -4, -2.05}, {ConfigKind::Config2, 0, 2},
                                      {ConfigKind::Config2, -0.95, -0.05}, {ConfigKind::Config2, -4, -2.05}};
    for (const auto& rg : regimes) {
        std::uniform_real_distribution<double> S(rg.slo, rg.shi);
        std::set<std::string> hit;
        RegionTable table{};
        for (int i = 0; i < 20000; ++i) {
            const auto c = cfg(rg.kind, V(rng), rg.kind == ConfigKind::Config1 ? W(rng) : 0.0, S(rng));
            table = select_table(c, phys);
            const double e = E(rng);
            try {
                const auto label = classify(c, phys, e);
                if (label.threshold()) {
                    continue;
                }
                hit.insert(label.region);
                // the independent per-shell decay test
                for (std::size_t k = 0; k < label.shells.size(); ++k) {
                    const auto sh = shells(c)[k];
                    const double lhs = (sh.S + phys.m) * (sh.S + phys.m) + (c.kind == ConfigKind::Config1 ? sh.W * sh.W : 0.0);
                    CHECK((label.shells[k].character == Character::Decaying) == (lhs > (e - sh.V) * (e - sh.V)));
                }
            } catch (const Error& ex) {
                CHECK(ex.kind() == ErrorKind::NoTableRow);
                CHECK(table == RegionTable::T2_Sneg_mGt);
            }
        }
        INFO(to_string(table));
        CHECK(hit.size() == table_rows(table).size());
    }
}

TEST_CASE("the duplicated rows of the S0 < 0, m > |S0| table share one label") {
    const PhysicalParams phys{};
    const auto label = classify(cfg(ConfigKind::Config1, 0, 0, -0.5), phys, 0.1);
    CHECK(label.table == RegionTable::T2_Sneg_mGt);
    CHECK(label.region == "I/II");
}

TEST_CASE("a combination missing from that table raises NoTableRow") {
    const PhysicalParams phys{};
    // |E| < beta, |E| > m - |S0|, |E| < m
    const auto c = cfg(ConfigKind::Config1, 0, 1.0, -0.5);
    CHECK(kind_of([&] { classify(c, phys, 0.7); }) == ErrorKind::NoTableRow);
}

TEST_CASE("shell characters are symmetric under (E, eV) -> (-E, -eV)") {
    const PhysicalParams phys{};
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const double e = -3 + 6.0 * i / 100, v = -3 + 6.0 * j / 100;
            const auto a = classify(cfg(ConfigKind::Config2, v, 0, 0.3), phys, e);
            const auto b = classify(cfg(ConfigKind::Config2, -v, 0, 0.3), phys, -e);
            REQUIRE(a.shells.size() == b.shells.size());
            for (std::size_t k = 0; k < a.shells.size(); ++k) {
                CHECK(a.shells[k].character == b.shells[k].character);
            }
            CHECK(a.region == b.region);
        }
    }
}

TEST_CASE("region boundaries are where a shell changes character") {
    const PhysicalParams phys{};
    const auto c = cfg(ConfigKind::Config1, -1.5, 0.4, 0.2);
    const auto b = region_boundaries(c, phys);
    CHECK(std::is_sorted(b.begin(), b.end()));
    for (double x : b) {
        bool changes = false;
        const auto lo = classify(c, phys, x - 1e-7), hi = classify(c, phys, x + 1e-7);
        for (std::size_t k = 0; k < lo.shells.size(); ++k) {
            changes = changes || lo.shells[k].character != hi.shells[k].character;
        }
        CHECK(changes);
    }
}
