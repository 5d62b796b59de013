#include "dirac2d/cli.hpp"

#include "dirac2d/config_io.hpp"
#include "dirac2d/error.hpp"
#include "dirac2d/oracle.hpp"
#include "dirac2d/regions.hpp"
#include "dirac2d/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#ifndef DIRAC2D_VERSION
#define DIRAC2D_VERSION "0.0.0"
#endif

namespace dirac2d::cli {

namespace {

using json = nlohmann::ordered_json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        parts.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

[[noreturn]] void usage(const std::string& what) {
    throw Error(ErrorKind::InvalidConfig, what);
}

double to_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::logic_error&) {
        usage(std::string("cannot read ") + what + " from \"" + s + "\"");
    }
}

int to_int(const std::string& s, const char* what) {
    const double v = to_double(s, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        usage(std::string(what) + " must be an integer, got \"" + s + "\"");
    }
    return static_cast<int>(v);
}

std::vector<double> number_list(const std::string& s, const char* what) {
    std::vector<double> out;
    if (s.empty()) {
        return out;
    }
    for (const auto& p : split(s, ',')) {
        out.push_back(to_double(p, what));
    }
    return out;
}

std::pair<double, double> window_of(const std::string& s) {
    const auto p = split(s, ':');
    if (p.size() != 2) {
        usage("--window expects LO:HI, got \"" + s + "\"");
    }
    return {to_double(p[0], "window bound"), to_double(p[1], "window bound")};
}

struct Range {
    double lo = 0.0, hi = 0.0;
    int n = 1;
    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

Range range_of(const std::string& s) {
    const auto p = split(s, ':');
    if (p.size() != 3) {
        usage("scan ranges are MIN:MAX:N, got \"" + s + "\"");
    }
    Range r{to_double(p[0], "scan bound"), to_double(p[1], "scan bound"), to_int(p[2], "scan count")};
    if (r.n < 1) {
        usage("scan counts must be positive");
    }
    return r;
}

/// Identifies one invocation. Identical manifests give byte-identical payloads.
struct RunManifest {
    std::string config_path;
    std::string subcommand;
    std::string format;
    std::string arguments;
    bool deterministic = true;
    std::string version = DIRAC2D_VERSION;
    std::string timestamp;
};

std::string timestamp_now() {
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        return sde;
    }
    return std::to_string(static_cast<long long>(std::time(nullptr)));
}

json manifest_json(const RunManifest& m) {
    json j;
    j["tool"] = "dirac2d";
    j["version"] = m.version;
    j["subcommand"] = m.subcommand;
    j["config"] = m.config_path;
    j["format"] = m.format;
    j["arguments"] = m.arguments;
    j["deterministic"] = m.deterministic;
    j["timestamp"] = m.timestamp;
    return j;
}

std::string manifest_header(const RunManifest& m, const std::string& format) {
    std::ostringstream os;
    const std::string open = format == "md" ? "<!-- " : "# ";
    const std::string close = format == "md" ? " -->" : "";
    os << open << "dirac2d " << m.version << " subcommand=" << m.subcommand << " format=" << m.format
       << " deterministic=" << (m.deterministic ? "true" : "false") << " timestamp=" << m.timestamp << close << "\n";
    os << open << "config=" << (m.config_path.empty() ? "(default)" : m.config_path) << close << "\n";
    os << open << "arguments=" << m.arguments << close << "\n";
    return os.str();
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

std::string md_row(const std::vector<std::string>& cells) {
    std::string s = "|";
    for (const auto& c : cells) {
        s += " " + c + " |";
    }
    return s + "\n";
}

std::string md_header(const std::vector<std::string>& cells) {
    std::string s = md_row(cells) + "|";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        s += "---|";
    }
    return s + "\n";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        s += (i ? "," : "") + cells[i];
    }
    return s + "\n";
}

const char* word(Character c) {
    switch (c) {
    case Character::Decaying: return "decaying";
    case Character::Propagating: return "propagating";
    case Character::Threshold: return "threshold";
    }
    return "?";
}

struct Common {
    std::string config;
    std::string format;
    std::string out;
};

RunConfig config_of(const Common& c) {
    return c.config.empty() ? RunConfig{} : load_config(c.config);
}

// ---- classify ------------------------------------------------------------------

struct ClassifyArgs {
    std::optional<double> eps;
    std::string scan;
};

json shells_json(const RegionLabel& label) {
    json arr = json::array();
    for (const auto& s : label.shells) {
        arr.push_back({{"interval", {s.r_lo, finite_or_null(s.r_hi)}}, {"character", word(s.character)},
                       {"kappa2", s.kappa2}});
    }
    return arr;
}

std::string classify_point(const RunConfig& rc, double eps, const RunManifest& man) {
    const RegionLabel label = classify(rc.potential, rc.phys, eps);
    const auto bounds = region_boundaries(rc.potential, rc.phys);
    if (man.format == "json") {
        json j;
        j["manifest"] = manifest_json(man);
        j["energy"] = eps;
        j["table"] = to_string(label.table);
        j["region"] = label.region;
        j["shells"] = shells_json(label);
        j["boundaries"] = bounds;
        return dump(j);
    }
    std::string s = manifest_header(man, man.format);
    if (man.format == "csv") {
        s += csv_row({"energy", "table", "region", "r_lo", "r_hi", "character", "kappa2"});
        for (const auto& sh : label.shells) {
            s += csv_row({g17(eps), to_string(label.table), label.region, g17(sh.r_lo), g17(sh.r_hi),
                          word(sh.character), g17(sh.kappa2)});
        }
        return s;
    }
    s += "Energy " + g17(eps) + ": table " + to_string(label.table) + ", region " + label.region + "\n\n";
    s += md_header({"interval", "character", "kappa2"});
    for (const auto& sh : label.shells) {
        s += md_row({"[" + g17(sh.r_lo) + ", " + g17(sh.r_hi) + ")", word(sh.character), g17(sh.kappa2)});
    }
    return s;
}

std::string classify_scan(RunConfig rc, const std::string& spec, const RunManifest& man) {
    const auto parts = split(spec, ',');
    if (parts.empty() || parts.size() > 2) {
        usage("--scan expects EMIN:EMAX:N[,VMIN:VMAX:M]");
    }
    const Range er = range_of(parts[0]);
    const std::optional<Range> vr = parts.size() == 2 ? std::optional<Range>(range_of(parts[1])) : std::nullopt;
    select_table(rc.potential, rc.phys); // an uncovered S0 regime fails the whole scan
    const std::size_t nshell = shells(rc.potential).size();

    struct Row {
        double eps, V0;
        std::string table, region;
        RegionLabel label;
    };
    std::vector<Row> rows;
    const int nv = vr ? vr->n : 1;
    for (int iv = 0; iv < nv; ++iv) {
        rc.potential.V0 = vr ? vr->at(iv) : rc.potential.V0;
        for (int ie = 0; ie < er.n; ++ie) {
            Row row{er.at(ie), rc.potential.V0, to_string(select_table(rc.potential, rc.phys)), "", {}};
            try {
                row.label = classify(rc.potential, rc.phys, row.eps);
                row.region = row.label.region;
            } catch (const Error& ex) {
                if (ex.kind() != ErrorKind::NoTableRow) {
                    throw;
                }
                row.region = "NoTableRow";
            }
            rows.push_back(std::move(row));
        }
    }
    if (man.format == "json") {
        json j;
        j["manifest"] = manifest_json(man);
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"energy", r.eps}, {"V0", r.V0}, {"table", r.table}, {"region", r.region},
                           {"shells", shells_json(r.label)}});
        }
        j["rows"] = arr;
        return dump(j);
    }
    std::vector<std::string> head{"energy", "V0", "table", "region"};
    for (std::size_t i = 0; i < nshell; ++i) {
        head.push_back("character" + std::to_string(i));
        head.push_back("kappa2_" + std::to_string(i));
    }
    std::string s = manifest_header(man, man.format);
    s += man.format == "md" ? md_header(head) : csv_row(head);
    for (const auto& r : rows) {
        std::vector<std::string> cells{g17(r.eps), g17(r.V0), r.table, r.region};
        for (std::size_t i = 0; i < nshell; ++i) {
            if (i < r.label.shells.size()) {
                cells.push_back(word(r.label.shells[i].character));
                cells.push_back(g17(r.label.shells[i].kappa2));
            } else {
                cells.push_back("");
                cells.push_back("");
            }
        }
        s += man.format == "md" ? md_row(cells) : csv_row(cells);
    }
    return s;
}

// ---- spectrum / wavefunction ---------------------------------------------------

struct SpectrumArgs {
    std::string k = "1";
    std::string window;
    int grid = 400;
    std::string samples;
    int state = 0;
    int nr = 200;
    int ntheta = 65;
    double rmax = 0.0;
};

std::vector<int> k_list(const std::string& s) {
    std::set<int> ks;
    for (const auto& p : split(s, ',')) {
        ks.insert(to_int(p, "k"));
    }
    if (ks.empty()) {
        usage("--k needs at least one value");
    }
    return {ks.begin(), ks.end()};
}

std::pair<double, double> window_for(const RunConfig& rc, const std::string& w) {
    return w.empty() ? std::pair{-rc.phys.m, rc.phys.m} : window_of(w);
}

std::vector<BoundState> solve(const RunConfig& rc, const std::vector<int>& ks, const SpectrumArgs& a) {
    const auto [lo, hi] = window_for(rc, a.window);
    SpectrumOptions opt;
    if (a.grid < 8) {
        usage("--grid must be at least 8");
    }
    opt.grid_n = a.grid;
    std::vector<BoundState> all;
    for (int k : ks) {
        const AngularMode mode = mode_for(rc.potential, rc.phys, k);
        auto states = find_bound_states(rc.potential, rc.phys, mode, lo, hi, opt);
        all.insert(all.end(), states.begin(), states.end());
    }
    return all;
}

double default_rmax(const BoundState& st) {
    const double kappa = std::sqrt(st.phys.m * st.phys.m - st.energy * st.energy);
    return st.config.c + 10.0 / kappa;
}

std::string field_csv(const std::vector<std::pair<int, const BoundState*>>& states, int nr, int ntheta, double rmax,
                      bool with_state_column) {
    std::string s;
    std::vector<std::string> head{"r", "theta", "RePsi+", "ImPsi+", "RePsi-", "ImPsi-"};
    if (with_state_column) {
        head.insert(head.begin(), {"k", "state"});
    }
    s += csv_row(head);
    for (const auto& [idx, st] : states) {
        const double R = rmax > 0 ? rmax : default_rmax(*st);
        std::vector<double> rg(static_cast<std::size_t>(nr)), tg(static_cast<std::size_t>(ntheta));
        for (int i = 0; i < nr; ++i) {
            rg[static_cast<std::size_t>(i)] = R * (i + 1) / nr;
        }
        for (int j = 0; j < ntheta; ++j) {
            tg[static_cast<std::size_t>(j)] = ntheta == 1 ? 0.0 : 2.0 * std::numbers::pi * j / (ntheta - 1);
        }
        for (const auto& f : wavefunction(*st, rg, tg)) {
            std::vector<std::string> cells{g17(f.r), g17(f.theta), g17(f.psi_plus.real()), g17(f.psi_plus.imag()),
                                           g17(f.psi_minus.real()), g17(f.psi_minus.imag())};
            if (with_state_column) {
                cells.insert(cells.begin(), {std::to_string(st->mode.k), std::to_string(idx)});
            }
            s += csv_row(cells);
        }
    }
    return s;
}

std::string spectrum_text(const RunConfig& rc, const std::vector<BoundState>& states, const RunManifest& man,
                          const std::pair<double, double>& window) {
    auto region_of = [](const BoundState& st) { return st.region ? st.region->region : std::string(); };
    auto table_of = [](const BoundState& st) { return st.region ? std::string(to_string(st.region->table)) : ""; };
    if (man.format == "json") {
        json j;
        j["manifest"] = manifest_json(man);
        j["kind"] = to_string(rc.potential.kind);
        j["window"] = {window.first, window.second};
        json arr = json::array();
        for (const auto& st : states) {
            json e;
            e["k"] = st.mode.k;
            e["eps_theta"] = st.mode.eps_theta;
            e["energy"] = st.energy;
            e["region"] = st.region ? json(region_of(st)) : json(nullptr);
            e["table"] = st.region ? json(table_of(st)) : json(nullptr);
            if (!st.region_note.empty()) {
                e["region_note"] = st.region_note;
            }
            e["norm"] = st.norm;
            e["oracle_confirmed"] = st.oracle_confirmed;
            e["residual"] = st.residual;
            arr.push_back(e);
        }
        j["states"] = arr;
        return dump(j);
    }
    const std::vector<std::string> head{"k", "eps_theta", "energy", "table", "region", "norm", "oracle_confirmed"};
    std::string s = manifest_header(man, man.format);
    s += man.format == "md" ? md_header(head) : csv_row(head);
    for (const auto& st : states) {
        const std::vector<std::string> cells{std::to_string(st.mode.k), g17(st.mode.eps_theta), g17(st.energy),
                                             table_of(st), region_of(st), g17(st.norm),
                                             st.oracle_confirmed ? "true" : "false"};
        s += man.format == "md" ? md_row(cells) : csv_row(cells);
    }
    return s;
}

// ---- coulomb -------------------------------------------------------------------

std::string coulomb_text(const RunConfig& rc, int k, std::optional<double> eps_theta, const RunManifest& man) {
    if (rc.potential.kind != ConfigKind::CoulombMagnetic) {
        usage("coulomb needs a configuration with kind \"coulomb\"");
    }
    AngularMode mode = quantize_config1(k);
    if (eps_theta) {
        mode.eps_theta = *eps_theta;
    }
    const CoulombReport rep = coulomb_analyze(rc.phys, mode);
    if (man.format == "json") {
        json j;
        j["manifest"] = manifest_json(man);
        j["eps_theta"] = rep.eps_theta;
        j["Ze"] = rep.Ze;
        j["B"] = rc.phys.B;
        j["lambda"] = rep.lambda_coeff;
        j["lambda_critical"] = -0.25;
        j["supercritical"] = rep.supercritical;
        j["critical_coupling"] = rep.critical_coupling;
        j["quoted_critical_charge"] = rep.quoted_critical_charge;
        j["depends_on_B"] = rep.depends_on_B;
        j["notes"] = rep.notes;
        return dump(j);
    }
    std::string s = manifest_header(man, man.format);
    const std::vector<std::pair<std::string, std::string>> kv{
        {"eps_theta", g17(rep.eps_theta)},
        {"Ze", g17(rep.Ze)},
        {"B", g17(rc.phys.B)},
        {"lambda", g17(rep.lambda_coeff)},
        {"supercritical", rep.supercritical ? "true" : "false"},
        {"critical_coupling", g17(rep.critical_coupling)},
        {"quoted_critical_charge", g17(rep.quoted_critical_charge)},
        {"depends_on_B", rep.depends_on_B ? "true" : "false"},
    };
    if (man.format == "csv") {
        s += csv_row({"key", "value"});
        for (const auto& [k2, v] : kv) {
            s += csv_row({k2, v});
        }
        return s;
    }
    s += md_header({"quantity", "value"});
    for (const auto& [k2, v] : kv) {
        s += md_row({k2, v});
    }
    s += "\n";
    for (const auto& n : rep.notes) {
        s += "- " + n + "\n";
    }
    return s;
}

// ---- summary tables ------------------------------------------------------------

struct SummaryRow {
    RadialCase rc;
    const char* symbol;
    const char* condition;
    const char* definition;
    const char* argument;
    const char* basis;
    const char* decaying;
    std::function<double(double m, double e, double V, double W, double S, double E)> formula;
    double V, W, S;
};

std::vector<SummaryRow> summary_rows() {
    // sample couplings satisfy each case's identity with e = 1
    return {
        {RadialCase::C1General, "gamma^2", "general", "(m+S)^2 + e^2 W^2 - (E-eV)^2", "x = 2 gamma r",
         "M_{nu,mu}(x), W_{nu,mu}(x)", "gamma^2 > 0",
         [](double m, double e, double V, double W, double S, double E) {
             return (m + S) * (m + S) + e * e * W * W - (E - e * V) * (E - e * V);
         },
         0.3, 0.2, 0.1},
        {RadialCase::C1Spin, "eta^2", "eV = S", "e^2 W^2 - (E-m-2S)(m+E)", "x = 2 eta r",
         "M_{nu,mu}(x), W_{nu,mu}(x)", "eta^2 > 0",
         [](double m, double e, double, double W, double S, double E) {
             return e * e * W * W - (E - m - 2 * S) * (m + E);
         },
         0.3, 0.2, 0.3},
        {RadialCase::C1Pseudo, "eta'^2", "eV = -S", "e^2 W^2 - (E+m+2S)(E-m)", "x = 2 eta' r",
         "M_{nu,mu}(x), W_{nu,mu}(x)", "eta'^2 > 0",
         [](double m, double e, double, double W, double S, double E) {
             return e * e * W * W - (E + m + 2 * S) * (E - m);
         },
         0.3, 0.2, -0.3},
        {RadialCase::C2General, "alpha^2", "general", "(eV-E)^2 - (m+S)^2", "X = |alpha| r",
         "sqrt(X) J_mu(X), sqrt(X) Y_|mu|(X) | sqrt(X) I_mu(X), sqrt(X) K_|mu|(X)", "alpha^2 < 0",
         [](double m, double e, double V, double, double S, double E) {
             return (e * V - E) * (e * V - E) - (m + S) * (m + S);
         },
         0.3, 0.0, 0.1},
        {RadialCase::C2Spin, "tau^2", "eV = S", "(E-m-2S)(m+E)", "X = |tau| r",
         "sqrt(X) J_mu(X), sqrt(X) Y_|mu|(X) | sqrt(X) I_mu(X), sqrt(X) K_|mu|(X)", "tau^2 < 0",
         [](double m, double, double, double, double S, double E) { return (E - m - 2 * S) * (m + E); }, 0.3,
         0.0, 0.3},
        {RadialCase::C2Pseudo, "rho^2", "eV = -S", "(m+2S+E)(E-m)", "X = |rho| r",
         "sqrt(X) J_mu(X), sqrt(X) Y_|mu|(X) | sqrt(X) I_mu(X), sqrt(X) K_|mu|(X)", "rho^2 < 0",
         [](double m, double, double, double, double S, double E) { return (m + 2 * S + E) * (E - m); }, 0.3,
         0.0, -0.3},
    };
}

std::string summary_text(const RunManifest& man) {
    const PhysicalParams phys{};
    const double E = 0.45;
    const AngularMode mode = quantize_config1(3);
    struct Computed {
        const SummaryRow* row;
        double kappa2, formula;
        RadialParams p;
        bool ok;
    };
    std::vector<Computed> rows;
    const auto defs = summary_rows();
    for (const auto& r : defs) {
        ShellPotential sh{r.V, r.W, r.S, 0.0};
        const RadialParams p = effective_params(r.rc, sh, phys, E, mode);
        const double f = r.formula(phys.m, phys.e, r.V, r.W, r.S, E);
        rows.push_back({&r, p.kappa2, f, p, std::abs(p.kappa2 - f) <= 1e-14 * std::max(1.0, std::abs(f))});
    }
    if (man.format == "json") {
        json j;
        j["manifest"] = manifest_json(man);
        json arr = json::array();
        for (const auto& c : rows) {
            arr.push_back({{"case", to_string(c.row->rc)},
                           {"symbol", c.row->symbol},
                           {"condition", c.row->condition},
                           {"definition", c.row->definition},
                           {"argument", c.row->argument},
                           {"basis", c.row->basis},
                           {"decaying", c.row->decaying},
                           {"sample_kappa2", c.kappa2},
                           {"sample_formula", c.formula},
                           {"check", c.ok ? "ok" : "mismatch"}});
        }
        j["rows"] = arr;
        return dump(j);
    }
    std::string s = manifest_header(man, man.format);
    const std::vector<std::string> head{"case", "condition", "kappa^2", "nu", "mu+, mu-", "argument", "basis",
                                        "decaying when", "check"};
    auto cells_of = [](const Computed& c) {
        const bool first = c.p.first_family();
        return std::vector<std::string>{to_string(c.row->rc),
                                        c.row->condition,
                                        std::string(c.row->symbol) + " = " + c.row->definition,
                                        first ? "-e W eps_theta / kappa" : "0",
                                        "mu^2 = eps_theta (eps_theta -+ 1) + 1/4 = (eps_theta -+ 1/2)^2",
                                        c.row->argument,
                                        c.row->basis,
                                        c.row->decaying,
                                        c.ok ? "ok" : "mismatch"};
    };
    if (man.format == "csv") {
        s += csv_row(head);
        for (const auto& c : rows) {
            auto cells = cells_of(c);
            for (auto& x : cells) {
                x = "\"" + x + "\"";
            }
            s += csv_row(cells);
        }
        return s;
    }
    s += "## First configuration (W constant for r < b)\n\n" + md_header(head);
    for (const auto& c : rows) {
        if (c.p.first_family()) {
            s += md_row(cells_of(c));
        }
    }
    s += "\n## Second configuration (W(theta)/r)\n\n" + md_header(head);
    for (const auto& c : rows) {
        if (!c.p.first_family()) {
            s += md_row(cells_of(c));
        }
    }
    s += "\nChecks evaluate each definition at m = 1, e = 1, E = 0.45, eps_theta = 3/2 against the solver's "
         "parameters.\n";
    return s;
}

// ---- hidden: specfun-eval, oracle ----------------------------------------------

specfun::SpecialValue eval_specfun(oracle::Function f, const std::vector<double>& p, std::complex<double> z) {
    using oracle::Function;
    const std::size_t need = (f == Function::BesselJ || f == Function::BesselY || f == Function::BesselI
                              || f == Function::BesselK)
                                 ? 1
                                 : 2;
    if (p.size() != need) {
        usage(std::string(oracle::to_string(f)) + " takes " + std::to_string(need) + " parameter(s)");
    }
    auto real_z = [&] {
        if (z.imag() != 0.0) {
            usage("Bessel evaluators take a real argument");
        }
        return z.real();
    };
    switch (f) {
    case Function::Kummer1F1: return specfun::kummer_M(p[0], p[1], z);
    case Function::TricomiU: return specfun::tricomi_U(p[0], p[1], z);
    case Function::WhittakerM: return specfun::whittaker_M(p[0], p[1], z);
    case Function::WhittakerW: return specfun::whittaker_W(p[0], p[1], z);
    case Function::BesselJ: return specfun::bessel_J(p[0], real_z());
    case Function::BesselY: return specfun::bessel_Y(p[0], real_z());
    case Function::BesselI: return specfun::bessel_I(p[0], real_z());
    case Function::BesselK: return specfun::decaying_exterior_basis(p[0], real_z());
    }
    usage("unknown function");
}

struct HiddenArgs {
    std::string function;
    std::string params;
    double z = 0.0;
    double zi = 0.0;
    double z1 = 0.0;
    int n = 1;
    int k = 1;
    double energy = 0.0;
    double r0 = 0.1;
    double r1 = 1.0;
    std::string branch = "regular";
};

std::string specfun_text(const HiddenArgs& a, const RunManifest& man) {
    const auto f = oracle::function_from_string(a.function);
    const auto p = number_list(a.params, "parameter");
    const auto v = eval_specfun(f, p, {a.z, a.zi});
    json j;
    j["manifest"] = manifest_json(man);
    j["function"] = oracle::to_string(f);
    j["params"] = p;
    j["z"] = {a.z, a.zi};
    j["value"] = {v.value.real(), v.value.imag()};
    j["derivative"] = {v.derivative.real(), v.derivative.imag()};
    j["log_scale"] = v.log_scale;
    j["status"] = specfun::to_string(v.status);
    return dump(j);
}

std::string oracle_text(const Common& common, const HiddenArgs& a, const RunManifest& man) {
    std::string s = manifest_header(man, "csv");
    if (!a.function.empty()) {
        const auto f = oracle::function_from_string(a.function);
        const auto p = number_list(a.params, "parameter");
        s += csv_row({"z", "closed_form", "oracle", "diff"});
        for (int i = 0; i < a.n; ++i) {
            const double z = a.n == 1 ? a.z : a.z + (a.z1 - a.z) * i / (a.n - 1);
            const auto v = eval_specfun(f, p, z);
            const double cf = (v.value * std::exp(v.log_scale)).real();
            const double orc = oracle::series_oracle(f, p, z, 30).value.real();
            s += csv_row({g17(z), g17(cf), g17(orc), g17(std::abs(cf - orc) / std::max(std::abs(orc), 1e-300))});
        }
        return s;
    }
    const RunConfig rc = config_of(common);
    const auto layout = shells(rc.potential);
    const std::size_t idx = shell_index(layout, a.r0);
    if (!(a.r0 > 0) || !(a.r1 > a.r0) || a.r1 > layout[idx].r_hi) {
        usage("oracle needs 0 < r0 < r1 inside one shell");
    }
    const AngularMode mode = mode_for(rc.potential, rc.phys, a.k);
    const RadialParams p =
        effective_params(select_case(rc.potential, rc.phys.e), layout[idx], rc.phys, a.energy, mode);
    const Branch br = a.branch == "irregular" ? Branch::Irregular : Branch::Regular;
    const SpinorValue seed = spinor_basis(p, a.r0, br);
    oracle::IVPSpec spec;
    spec.layout = layout;
    spec.phys = rc.phys;
    spec.energy = a.energy;
    spec.eps_theta = mode.eps_theta;
    spec.r_start = a.r0;
    spec.r_end = a.r1;
    spec.initial = {seed.plus, seed.minus};
    const int n = std::max(a.n, 2);
    for (int i = 1; i < n; ++i) {
        spec.samples.push_back(a.r0 + (a.r1 - a.r0) * i / (n - 1));
    }
    const auto res = oracle::integrate(spec);
    s += csv_row({"r", "closed_form_plus", "oracle_plus", "diff_plus", "closed_form_minus", "oracle_minus",
                  "diff_minus"});
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        const SpinorValue cf = spinor_basis(p, res.r[i], br);
        const double op = res.phi[i][0].real(), om = res.phi[i][1].real();
        s += csv_row({g17(res.r[i]), g17(cf.plus), g17(op), g17(cf.plus - op), g17(cf.minus), g17(om),
                      g17(cf.minus - om)});
    }
    return s;
}

// ---- plumbing ------------------------------------------------------------------

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidMode: return ConfigError;
    case ErrorKind::Unclassified:
    case ErrorKind::NoTableRow: return UnclassifiedRegime;
    case ErrorKind::WindowOutsideRegion: return BadWindow;
    default: return NumericFailure;
    }
}

// Options whose values may start with '-' are glued to their value so that the
// parser does not read "-3:3:601" as a flag.
std::vector<std::string> normalize(int argc, const char* const* argv) {
    static const std::set<std::string> valued{"--scan", "--window", "--eps",  "--k",  "--z",     "--zi",
                                              "--z1",   "--energy", "--params", "--eps-theta", "--r0", "--r1"};
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (valued.count(a) && i + 1 < argc) {
            const std::string next = argv[i + 1];
            if (next.size() > 1 && next[0] == '-' && (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
                a += "=" + next;
                ++i;
            }
        }
        args.push_back(a);
    }
    return args;
}

std::string argument_string(const std::vector<std::string>& args) {
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) {
            continue;
        }
        s += (s.empty() ? "" : " ") + args[i];
    }
    return s;
}

constexpr const char* exit_footer = "Exit codes: 0 ok, 2 configuration error, 3 unclassified regime or no table row,\n"
                                    "4 window outside the decaying-exterior region, 5 numerical failure.\n"
                                    "DIRAC2D_THREADS caps the number of worker threads (default: all cores).\n"
                                    "SOURCE_DATE_EPOCH, when set, is used as the manifest timestamp.";

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const std::vector<std::string> args = normalize(argc, argv);

    CLI::App app{"Bound states and region tables for the 2D Dirac equation in shell potentials", "dirac2d"};
    app.require_subcommand(1);
    app.footer(exit_footer);
    app.set_version_flag("--version", DIRAC2D_VERSION);

    Common common;
    auto add_common = [&](CLI::App* sub, const std::string& formats) {
        sub->add_option("--config", common.config, "configuration JSON file");
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember(split(formats, '|')));
        sub->add_option("--out", common.out, "write output to this file instead of stdout");
    };

    ClassifyArgs ca;
    auto* classify_cmd = app.add_subcommand("classify", "region of an energy, or a region scan over (E, V0)");
    add_common(classify_cmd, "json|csv|md");
    classify_cmd->add_option("--eps", ca.eps, "energy to classify");
    classify_cmd->add_option("--scan", ca.scan, "EMIN:EMAX:N[,VMIN:VMAX:M] grid, emitted as CSV by default");

    SpectrumArgs sa;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "bound-state energies from interface matching");
    add_common(spectrum_cmd, "json|csv|md");
    spectrum_cmd->add_option("--k", sa.k, "comma-separated odd angular labels")->capture_default_str();
    spectrum_cmd->add_option("--window", sa.window, "energy window LO:HI inside (-m, m), default the full gap");
    spectrum_cmd->add_option("--grid", sa.grid, "scan points per window")->capture_default_str();
    spectrum_cmd->add_option("--samples", sa.samples, "also write wavefunction samples of every state to this CSV");

    auto* wave_cmd = app.add_subcommand("wavefunction", "sampled Psi(r, theta) of one bound state");
    add_common(wave_cmd, "csv|json");
    wave_cmd->add_option("--k", sa.k, "odd angular label")->capture_default_str();
    wave_cmd->add_option("--window", sa.window, "energy window LO:HI");
    wave_cmd->add_option("--grid", sa.grid, "scan points per window")->capture_default_str();
    wave_cmd->add_option("--state", sa.state, "index of the state in the window, by energy")->capture_default_str();
    wave_cmd->add_option("--nr", sa.nr, "radial samples on (0, rmax]")->capture_default_str();
    wave_cmd->add_option("--ntheta", sa.ntheta, "angular samples on [0, 2 pi]")->capture_default_str();
    wave_cmd->add_option("--rmax", sa.rmax, "outer radius, default c + 10 / kappa");

    int coulomb_k = 1;
    std::optional<double> coulomb_eps;
    auto* coulomb_cmd = app.add_subcommand("coulomb", "critical coupling of the Coulomb impurity");
    add_common(coulomb_cmd, "json|csv|md");
    coulomb_cmd->add_option("--k", coulomb_k, "odd angular label, eps_theta = k / 2")->capture_default_str();
    coulomb_cmd->add_option("--eps-theta", coulomb_eps, "angular eigenvalue, overrides --k");

    auto* summary_cmd = app.add_subcommand("summary-tables", "parameter summaries of the six closed-form cases");
    add_common(summary_cmd, "md|json|csv");

    HiddenArgs ha;
    auto* specfun_cmd = app.add_subcommand("specfun-eval", "evaluate one special function");
    specfun_cmd->group("");
    add_common(specfun_cmd, "json");
    specfun_cmd->add_option("--function", ha.function)->required();
    specfun_cmd->add_option("--params", ha.params);
    specfun_cmd->add_option("--z", ha.z)->required();
    specfun_cmd->add_option("--zi", ha.zi);

    auto* oracle_cmd = app.add_subcommand("oracle", "closed form against the series or ODE oracle");
    oracle_cmd->group("");
    add_common(oracle_cmd, "csv");
    oracle_cmd->add_option("--function", ha.function);
    oracle_cmd->add_option("--params", ha.params);
    oracle_cmd->add_option("--z", ha.z);
    oracle_cmd->add_option("--z1", ha.z1);
    oracle_cmd->add_option("--n", ha.n);
    oracle_cmd->add_option("--k", ha.k);
    oracle_cmd->add_option("--energy", ha.energy);
    oracle_cmd->add_option("--r0", ha.r0);
    oracle_cmd->add_option("--r1", ha.r1);
    oracle_cmd->add_option("--branch", ha.branch)->check(CLI::IsMember({"regular", "irregular"}));

    std::vector<const char*> cargv{"dirac2d"};
    for (const auto& a : args) {
        cargv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "dirac2d: " << e.what() << "\n";
        return ConfigError;
    }

    RunManifest man;
    man.config_path = common.config;
    man.arguments = argument_string(args);
    man.timestamp = timestamp_now();

    try {
        std::string text;
        if (classify_cmd->parsed()) {
            man.subcommand = "classify";
            man.format = common.format.empty() ? (ca.scan.empty() ? "json" : "csv") : common.format;
            const RunConfig rc = config_of(common);
            if (!ca.scan.empty()) {
                text = classify_scan(rc, ca.scan, man);
            } else if (ca.eps) {
                text = classify_point(rc, *ca.eps, man);
            } else {
                usage("classify needs --eps or --scan");
            }
        } else if (spectrum_cmd->parsed()) {
            man.subcommand = "spectrum";
            man.format = common.format.empty() ? "json" : common.format;
            const RunConfig rc = config_of(common);
            const auto states = solve(rc, k_list(sa.k), sa);
            text = spectrum_text(rc, states, man, window_for(rc, sa.window));
            if (!sa.samples.empty()) {
                std::vector<std::pair<int, const BoundState*>> list;
                int last_k = 0, idx = 0;
                for (const auto& st : states) {
                    idx = (list.empty() || st.mode.k != last_k) ? 0 : idx + 1;
                    last_k = st.mode.k;
                    list.emplace_back(idx, &st);
                }
                RunManifest sm = man;
                sm.format = "csv";
                std::ofstream f(sa.samples);
                if (!f) {
                    usage("cannot write " + sa.samples);
                }
                f << manifest_header(sm, "csv") << field_csv(list, 100, 33, 0.0, true);
            }
        } else if (wave_cmd->parsed()) {
            man.subcommand = "wavefunction";
            man.format = common.format.empty() ? "csv" : common.format;
            const RunConfig rc = config_of(common);
            const auto ks = k_list(sa.k);
            if (ks.size() != 1) {
                usage("wavefunction takes a single --k");
            }
            if (sa.nr < 1 || sa.ntheta < 1) {
                usage("--nr and --ntheta must be positive");
            }
            const auto states = solve(rc, ks, sa);
            if (sa.state < 0 || static_cast<std::size_t>(sa.state) >= states.size()) {
                throw Error(ErrorKind::NonConvergent, "state " + std::to_string(sa.state) + " does not exist; the window holds "
                                                          + std::to_string(states.size()) + " bound state(s)");
            }
            const BoundState& st = states[static_cast<std::size_t>(sa.state)];
            const std::string csv = field_csv({{sa.state, &st}}, sa.nr, sa.ntheta, sa.rmax, false);
            if (man.format == "json") {
                json j;
                j["manifest"] = manifest_json(man);
                j["energy"] = st.energy;
                j["k"] = st.mode.k;
                json samples = json::array();
                const double R = sa.rmax > 0 ? sa.rmax : default_rmax(st);
                std::vector<double> rg, tg;
                for (int i = 0; i < sa.nr; ++i) {
                    rg.push_back(R * (i + 1) / sa.nr);
                }
                for (int i = 0; i < sa.ntheta; ++i) {
                    tg.push_back(sa.ntheta == 1 ? 0.0 : 2.0 * std::numbers::pi * i / (sa.ntheta - 1));
                }
                for (const auto& f : wavefunction(st, rg, tg)) {
                    samples.push_back({f.r, f.theta, f.psi_plus.real(), f.psi_plus.imag(), f.psi_minus.real(),
                                       f.psi_minus.imag()});
                }
                j["columns"] = {"r", "theta", "RePsi+", "ImPsi+", "RePsi-", "ImPsi-"};
                j["samples"] = samples;
                text = dump(j);
            } else {
                text = manifest_header(man, "csv") + csv;
            }
        } else if (coulomb_cmd->parsed()) {
            man.subcommand = "coulomb";
            man.format = common.format.empty() ? "json" : common.format;
            text = coulomb_text(config_of(common), coulomb_k, coulomb_eps, man);
        } else if (summary_cmd->parsed()) {
            man.subcommand = "summary-tables";
            man.format = common.format.empty() ? "md" : common.format;
            text = summary_text(man);
        } else if (specfun_cmd->parsed()) {
            man.subcommand = "specfun-eval";
            man.format = "json";
            text = specfun_text(ha, man);
        } else if (oracle_cmd->parsed()) {
            man.subcommand = "oracle";
            man.format = "csv";
            text = oracle_text(common, ha, man);
        }
        if (common.out.empty()) {
            out << text;
        } else {
            std::ofstream f(common.out, std::ios::binary);
            if (!f) {
                usage("cannot write " + common.out);
            }
            f << text;
        }
        return Ok;
    } catch (const Error& ex) {
        err << "dirac2d: " << ex.what() << "\n";
        return exit_code(ex.kind());
    } catch (const std::exception& ex) {
        err << "dirac2d: " << ex.what() << "\n";
        return NumericFailure;
    }
}

} // namespace dirac2d::cli
