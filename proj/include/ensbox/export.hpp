#pragma once

// JSON documents for analysis results. Every behavior inside them uses the
// {"scenario":[...],"table":[...]} mirror from io.hpp.
//
//   vertex database  {"format":1,"scenario":[X,Y,A,B],
//                     "classes":[{"representative":B,"local":bool,
//                                 "full_output":bool,"degree":n,"orbit_size":n}],
//                     "vertices":[B,...]}
//   vertex list      {"scenario":[X,Y,A,B],"vertices":[B,...]}
//   decomposition    {"terms":[{"weight":"p/q","vertex":B},...]}
//   clique witness   {"events":[{"event":"1120|0011","weight":"p/q"},...],
//                     "total_weight":"p/q"}
//   membership       {"verdict":"inside"|"outside","weights":[...],
//                     "functional":{...,"bound":"p/q"}}

#include "enumeration.hpp"
#include "extremality.hpp"
#include "io.hpp"
#include "lo.hpp"
#include "membership.hpp"

#include <string>
#include <vector>

namespace ensbox {

inline constexpr int database_format = 1;

namespace detail {

inline json rational_array(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v)
        out.push_back(format_rational(r));
    return out;
}

template <class F>
auto json_guard(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
}

inline Scenario scenario_of(const json& j) {
    const auto& sc = j.at("scenario");
    if (!sc.is_array() || sc.size() != 4)
        throw ParseError("'scenario' must be [X,Y,A,B]");
    return scenario_from_fields(sc[0].get<int>(), sc[1].get<int>(), sc[2].get<int>(),
                                sc[3].get<int>());
}

} // namespace detail

inline json vertices_to_json(const Scenario& s, const std::vector<Behavior>& vertices) {
    json j;
    j["scenario"] = {s.X, s.Y, s.A, s.B};
    json list = json::array();
    for (const auto& v : vertices) {
        if (v.scenario() != s)
            throw ShapeError("vertex scenario (" + v.scenario().to_string() +
                             ") differs from the list (" + s.to_string() + ")");
        list.push_back(table_to_json(v));
    }
    j["vertices"] = std::move(list);
    return j;
}

inline std::vector<Behavior> vertices_from_json(const json& j) {
    return detail::json_guard([&] {
        Scenario s = detail::scenario_of(j);
        std::vector<Behavior> out;
        for (const auto& v : j.at("vertices")) {
            Behavior b = behavior_from_json(v);
            if (b.scenario() != s)
                throw ShapeError("vertex scenario differs from the list");
            out.push_back(std::move(b));
        }
        return out;
    });
}

inline json vertex_database(const VertexClassSummary& summary,
                            const std::vector<Behavior>& vertices) {
    const Scenario& s = summary.scenario;
    json j = vertices_to_json(s, vertices);
    json classes = json::array();
    for (const auto& c : summary.classes) {
        json cj;
        cj["representative"] = table_to_json(c.representative);
        cj["local"] = c.local;
        cj["full_output"] = c.full_output;
        cj["degree"] = c.degree;
        cj["orbit_size"] = relabeling_orbit(c.representative).size();
        classes.push_back(std::move(cj));
    }
    json out;
    out["format"] = database_format;
    out["scenario"] = j["scenario"];
    out["classes"] = std::move(classes);
    out["vertices"] = std::move(j["vertices"]);
    return out;
}

/// Class representatives and vertices of a database; rejects unknown formats.
inline std::pair<std::vector<Behavior>, std::vector<Behavior>> database_from_json(const json& j) {
    return detail::json_guard([&] {
        int format = j.at("format").get<int>();
        if (format != database_format)
            throw ParseError("unsupported database format " + std::to_string(format));
        std::vector<Behavior> reps;
        for (const auto& c : j.at("classes"))
            reps.push_back(behavior_from_json(c.at("representative")));
        return std::make_pair(std::move(reps), vertices_from_json(j));
    });
}

inline json decomposition_to_json(const Decomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms)
        terms.push_back({{"weight", format_rational(t.weight)}, {"vertex", table_to_json(t.vertex)}});
    return {{"terms", std::move(terms)}};
}

inline Decomposition decomposition_from_json(const json& j) {
    return detail::json_guard([&] {
        Decomposition d;
        for (const auto& t : j.at("terms"))
            d.terms.push_back({parse_rational(t.at("weight").get<std::string>()),
                               behavior_from_json(t.at("vertex"))});
        return d;
    });
}

inline json clique_to_json(const CliqueWitness& w) {
    json events = json::array();
    for (const auto& e : w.events)
        events.push_back({{"event", format_event(e)}, {"weight", format_rational(e.weight)}});
    return {{"events", std::move(events)}, {"total_weight", format_rational(w.total_weight)}};
}

inline json membership_to_json(const MembershipResult& r) {
    json j;
    j["verdict"] = r.inside() ? "inside" : "outside";
    j["weights"] = detail::rational_array(r.weights);
    if (r.functional)
        j["functional"] = functional_to_json(*r.functional, r.bound);
    return j;
}

inline json visibility_to_json(const VisibilityResult& r) {
    json j;
    j["visibility"] = format_rational(r.visibility);
    j["weights"] = detail::rational_array(r.weights);
    if (r.functional)
        j["functional"] = functional_to_json(*r.functional, r.bound);
    return j;
}

} // namespace ensbox
