#include "dirac2d/config_io.hpp"

#include "dirac2d/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dirac2d {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
    throw Error(ErrorKind::InvalidConfig, what);
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
    if (!obj.is_object()) {
        bad(std::string(where) + " must be a JSON object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            bad(std::string("unknown key \"") + key + "\" in " + where);
        }
    }
}

double number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        bad(std::string("\"") + key + "\" must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        bad(std::string("\"") + key + "\" must be finite");
    }
    return d;
}

AngularProfile profile_from(const json& j) {
    only_keys(j, {"kind", "w0", "samples"}, "Wtheta");
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        bad("Wtheta needs a string \"kind\"");
    }
    const std::string kind = j.at("kind").get<std::string>();
    AngularProfile p;
    if (kind == "none") {
        p = AngularProfile::none();
    } else if (kind == "constant") {
        p = AngularProfile::constant(number(j, "w0", 0.0));
    } else if (kind == "tabulated") {
        if (!j.contains("samples") || !j.at("samples").is_array()) {
            bad("tabulated Wtheta needs a \"samples\" array");
        }
        std::vector<double> s;
        for (const auto& v : j.at("samples")) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                bad("Wtheta samples must be finite numbers");
            }
            s.push_back(v.get<double>());
        }
        p = AngularProfile::tabulated(std::move(s));
    } else {
        bad("Wtheta kind must be none, constant or tabulated, got \"" + kind + "\"");
    }
    p.validate();
    return p;
}

json profile_to(const AngularProfile& p) {
    switch (p.kind) {
    case AngularProfile::Kind::None: return {{"kind", "none"}};
    case AngularProfile::Kind::Constant: return {{"kind", "constant"}, {"w0", p.w0}};
    case AngularProfile::Kind::Tabulated: return {{"kind", "tabulated"}, {"samples", p.samples}};
    }
    return {};
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& ex) {
        bad(std::string("malformed JSON: ") + ex.what());
    }
}

} // namespace

AngularProfile parse_profile(const std::string& text) {
    return profile_from(parse_json(text));
}

RunConfig parse_config(const std::string& text) {
    const json j = parse_json(text);
    only_keys(j, {"kind", "m", "e", "V0", "W0", "S0", "a", "b", "c", "Z", "B", "Wtheta"}, "configuration");
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        bad("configuration needs a string \"kind\"");
    }
    RunConfig rc;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "config1") {
        rc.potential.kind = ConfigKind::Config1;
    } else if (kind == "config2") {
        rc.potential.kind = ConfigKind::Config2;
    } else if (kind == "coulomb") {
        rc.potential.kind = ConfigKind::CoulombMagnetic;
    } else {
        bad("kind must be config1, config2 or coulomb, got \"" + kind + "\"");
    }
    PotentialConfig& p = rc.potential;
    p.V0 = number(j, "V0", p.V0);
    p.W0 = number(j, "W0", p.W0);
    p.S0 = number(j, "S0", p.S0);
    p.a = number(j, "a", p.a);
    p.b = number(j, "b", p.b);
    p.c = number(j, "c", p.c);
    if (j.contains("Wtheta")) {
        p.w_theta = profile_from(j.at("Wtheta"));
    }
    rc.phys.m = number(j, "m", rc.phys.m);
    rc.phys.e = number(j, "e", rc.phys.e);
    rc.phys.Z = number(j, "Z", rc.phys.Z);
    rc.phys.B = number(j, "B", rc.phys.B);
    rc.phys.validate();
    p.validate();
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        bad("cannot open configuration file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& rc) {
    // ordered_json keeps the insertion order, so the text is canonical
    nlohmann::ordered_json j;
    j["kind"] = to_string(rc.potential.kind);
    j["m"] = rc.phys.m;
    j["e"] = rc.phys.e;
    j["V0"] = rc.potential.V0;
    j["W0"] = rc.potential.W0;
    j["S0"] = rc.potential.S0;
    j["a"] = rc.potential.a;
    j["b"] = rc.potential.b;
    j["c"] = rc.potential.c;
    j["Z"] = rc.phys.Z;
    j["B"] = rc.phys.B;
    j["Wtheta"] = profile_to(rc.potential.w_theta);
    return j.dump(2);
}

} // namespace dirac2d
