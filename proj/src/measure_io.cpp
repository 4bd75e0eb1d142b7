#include "dtlab/measure_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dtlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("measure spec: " + where + ": " + what);
}

Complex parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(where, "expected [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

double parse_mass(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double m = j.get<double>();
    if (!(m > 0.0 && m <= 1.0)) fail(where, "mass must lie in (0,1]");
    return m;
}

FamilyTag parse_family_name(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a family name string");
    const std::string name = j.get<std::string>();
    if (name == "example1") return FamilyTag::example1;
    if (name == "example2") return FamilyTag::example2;
    if (name == "example3") return FamilyTag::example3;
    fail(where, "unknown family '" + name + "' (expected example1|example2|example3)");
}

AtomicMeasure parse_family_node(const json& j, const std::string& where) {
    const FamilyTag tag = parse_family_name(j.at("name"), where + ".name");
    if (!j.contains("n_max") || !j["n_max"].is_number_integer())
        fail(where, "family needs an integer n_max");
    const int n_max = j["n_max"].get<int>();
    double p = 0.0;
    if (tag == FamilyTag::example1) {
        if (!j.contains("p") || !j["p"].is_number()) fail(where, "example1 needs p > 1");
        p = j["p"].get<double>();
    }
    try {
        return make_family(tag, n_max, p);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

} // namespace

AtomicMeasure parse_measure_spec(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into a line anchor
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
            if (json_text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument("measure spec: parse error at line " + std::to_string(line) +
                                    ", column " + std::to_string(col) + ": " + e.what());
    }

    if (!root.is_object() || !root.contains("type") || !root["type"].is_string())
        fail("$", "top level must be an object with a string 'type'");
    const std::string type = root["type"].get<std::string>();

    if (type == "family") return parse_family_node(root, "$");

    if (type != "mixture") fail("$.type", "expected 'mixture' or 'family'");
    if (!root.contains("components") || !root["components"].is_array() ||
        root["components"].empty())
        fail("$.components", "mixture needs a nonempty component array");

    std::vector<AtomicMeasure> parts;
    std::size_t idx = 0;
    for (const auto& comp : root["components"]) {
        const std::string where = "$.components[" + std::to_string(idx++) + "]";
        if (!comp.is_object() || !comp.contains("type") || !comp["type"].is_string())
            fail(where, "component needs a string 'type'");
        const std::string ctype = comp["type"].get<std::string>();

        if (ctype == "dirac") {
            AtomicMeasure part;
            part.atoms.push_back({parse_point(comp.at("at"), where + ".at"),
                                  parse_mass(comp.at("mass"), where + ".mass")});
            parts.push_back(part);
        } else if (ctype == "annulus_uniform") {
            AtomicMeasure part;
            RadialComponent rc;
            rc.center = parse_point(comp.at("center"), where + ".center");
            if (!comp.contains("r_in") || !comp.contains("r_out")) fail(where, "needs r_in, r_out");
            rc.r_in = comp["r_in"].get<double>();
            rc.r_out = comp["r_out"].get<double>();
            rc.mass = parse_mass(comp.at("mass"), where + ".mass");
            rc.profile = RadialProfile::annulus_uniform;
            part.continuous.push_back(rc);
            parts.push_back(part);
        } else if (ctype == "circle_uniform") {
            AtomicMeasure part;
            RadialComponent rc;
            rc.center = parse_point(comp.at("center"), where + ".center");
            if (!comp.contains("r")) fail(where, "needs r");
            rc.r_in = rc.r_out = comp["r"].get<double>();
            rc.mass = parse_mass(comp.at("mass"), where + ".mass");
            rc.profile = RadialProfile::circle_uniform;
            part.continuous.push_back(rc);
            parts.push_back(part);
        } else if (ctype == "family") {
            AtomicMeasure fam = parse_family_node(comp, where);
            const double w = comp.contains("mass") ? parse_mass(comp["mass"], where + ".mass") : 1.0;
            parts.push_back(w < 1.0 ? scale_measure(fam, w) : fam);
        } else {
            fail(where + ".type", "unknown component type '" + ctype + "'");
        }
    }

    try {
        if (parts.size() == 1) {
            parts.front().validate();
            return parts.front();
        }
        return mix_measures(parts);
    } catch (const std::exception& e) {
        fail("$", e.what());
    }
}

AtomicMeasure load_measure_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("measure spec: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_measure_spec(ss.str());
}

std::string measure_to_json(const AtomicMeasure& mu) {
    json j;
    j["family"] = to_string(mu.family);
    if (mu.family == FamilyTag::example1) j["p"] = mu.family_p;
    j["atoms"] = mu.atoms.size();
    j["continuous_components"] = mu.continuous.size();
    if (mu.truncation) {
        j["n_max"] = mu.truncation->n_max;
        j["tail_mass"] = mu.truncation->tail_mass;
    }
    if (!mu.atoms.empty()) {
        j["first_atom"] = {mu.atoms.front().location.real(), mu.atoms.front().location.imag()};
        j["first_atom_mass"] = mu.atoms.front().mass;
    }
    return j.dump();
}

} // namespace dtlab
