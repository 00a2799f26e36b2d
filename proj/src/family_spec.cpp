#include "glpp/family_spec.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace glpp {

using nlohmann::json;

namespace {

json shorthand_to_json(const std::string& s);

json measure_json(const std::string& s) {
    std::string t = s;
    // strip whitespace
    t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return std::isspace(c); }), t.end());
    if (!t.empty() && (t[0] == '{' || t[0] == '[')) return json::parse(t);
    return shorthand_to_json(t);
}

json shorthand_to_json(const std::string& s) {
    auto paren = s.find('(');
    if (paren != std::string::npos) {
        if (s.back() != ')') throw ConfigError("unbalanced family shorthand: " + s);
        std::string head = s.substr(0, paren);
        std::string inner = s.substr(paren + 1, s.size() - paren - 2);
        if (head == "integrable") return json{{"kind", "integrable"}, {"mu0", measure_json(inner)}};
        if (head == "edge_lpp") return json{{"kind", "edge_lpp"}, {"mu", measure_json(inner)}};
        if (head == "constant") return json{{"kind", "constant"}, {"mu", measure_json(inner)}};
        throw ConfigError("unknown family combinator: " + head);
    }
    auto at = s.find('@');
    if (at != std::string::npos) {
        std::string head = s.substr(0, at), path = s.substr(at + 1);
        if (head != "table") throw ConfigError("only table@file.json is supported");
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open table file: " + path);
        json j;
        in >> j;
        if (!j.contains("kind")) j["kind"] = "table";
        return j;
    }
    auto colon = s.find(':');
    std::string head = colon == std::string::npos ? s : s.substr(0, colon);
    double param = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
    if (head == "geometric") return json{{"kind", "geometric"}, {"p", param}};
    if (head == "poisson") return json{{"kind", "poisson"}, {"lambda", param}};
    if (head == "poisson_shifted") return json{{"kind", "poisson_shifted"}, {"lambda", param}};
    if (head == "zeta") return json{{"kind", "zeta"}, {"alpha", param}};
    if (head == "exp" || head == "exponential")
        return json{{"kind", "exponential"}, {"lambda", param}};
    if (head == "half_normal") return json{{"kind", "half_normal"}, {"sigma", param}};
    throw ConfigError("unknown family shorthand: " + s);
}

DiscreteMeasure measure_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int cap = j.value("cap", 0);
    if (kind == "geometric")
        return DiscreteMeasure::geometric(j.at("p").get<double>(), cap > 0 ? cap : 2000);
    if (kind == "poisson")
        return DiscreteMeasure::poisson_conditioned(j.at("lambda").get<double>(),
                                                    cap > 0 ? cap : 400);
    if (kind == "poisson_shifted")
        return DiscreteMeasure::poisson_shifted(j.at("lambda").get<double>(),
                                                cap > 0 ? cap : 400);
    if (kind == "zeta")
        return DiscreteMeasure::zeta(j.at("alpha").get<double>(), cap > 0 ? cap : 200000);
    if (kind == "table") {
        std::vector<std::pair<int, double>> entries;
        for (auto& e : j.at("entries"))
            entries.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
        return DiscreteMeasure::from_table(entries);
    }
    throw ConfigError("unknown measure kind: " + kind);
}

}  // namespace

DiscreteMeasure parse_measure(const std::string& text) {
    return measure_from_json(measure_json(text));
}

FamilySpec parse_family(const std::string& text) {
    json j = measure_json(text);
    std::string kind = j.at("kind").get<std::string>();
    FamilySpec spec;
    spec.canonical_json = j.dump();
    if (kind == "exponential") {
        auto f0 = std::make_shared<ExponentialDensity>(j.at("lambda").get<double>());
        spec.continuous.emplace(DensityFamily::integrable(f0));
        spec.label = spec.continuous->label();
        return spec;
    }
    if (kind == "half_normal") {
        auto f0 = std::make_shared<HalfNormalDensity>(j.at("sigma").get<double>());
        spec.continuous.emplace(DensityFamily::integrable(f0));
        spec.label = spec.continuous->label();
        return spec;
    }
    if (kind == "integrable") {
        spec.discrete.emplace(MeasureFamily::integrable(measure_from_json(j.at("mu0"))));
    } else if (kind == "edge_lpp") {
        spec.discrete.emplace(MeasureFamily::edge_lpp(measure_from_json(j.at("mu"))));
    } else if (kind == "constant") {
        spec.discrete.emplace(MeasureFamily::constant(measure_from_json(j.at("mu"))));
    } else {
        // bare measure: the constant family
        spec.discrete.emplace(MeasureFamily::constant(measure_from_json(j)));
    }
    spec.label = spec.discrete->label();
    return spec;
}

}  // namespace glpp
