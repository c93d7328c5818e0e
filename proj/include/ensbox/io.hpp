#pragma once

// Text and JSON serialization of behaviors and functionals.
//
// Text format:
//   line 1      "X Y A B"
//   X*Y lines   line (x*Y + y) holds the A*B entries of block (x, y) in
//               order a*B + b, as "num/den", "0" or "1", single-space separated.
//
// JSON mirror: {"scenario":[X,Y,A,B],"table":["num/den", ...]} in flat order.

#include "behavior.hpp"
#include "errors.hpp"
#include "rational.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ensbox {

using json = nlohmann::json;

inline std::string to_text(const Table& t) {
    const Scenario& s = t.scenario();
    std::string out = std::to_string(s.X) + " " + std::to_string(s.Y) + " " + std::to_string(s.A) +
                      " " + std::to_string(s.B) + "\n";
    std::size_t block = static_cast<std::size_t>(s.A) * s.B;
    for (std::size_t line = 0; line < static_cast<std::size_t>(s.X) * s.Y; ++line) {
        for (std::size_t k = 0; k < block; ++k) {
            if (k)
                out += ' ';
            out += format_rational(t[line * block + k]);
        }
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok)
        tokens.push_back(tok);
    return tokens;
}

inline int parse_cardinality(const std::string& tok) {
    if (tok.empty() || tok.size() > 6)
        throw ParseError("bad scenario field '" + tok + "'");
    for (char c : tok)
        if (c < '0' || c > '9')
            throw ParseError("bad scenario field '" + tok + "'");
    return std::stoi(tok);
}

inline Scenario scenario_from_fields(int X, int Y, int A, int B) {
    try {
        return Scenario(X, Y, A, B);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

} // namespace detail

inline Behavior behavior_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && detail::split_ws(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        throw ParseError("empty behavior file");
    auto header = detail::split_ws(lines[0]);
    if (header.size() != 4)
        throw ParseError("header must be 'X Y A B'");
    Scenario s = detail::scenario_from_fields(
        detail::parse_cardinality(header[0]), detail::parse_cardinality(header[1]),
        detail::parse_cardinality(header[2]), detail::parse_cardinality(header[3]));
    std::size_t rows = static_cast<std::size_t>(s.X) * s.Y;
    std::size_t block = static_cast<std::size_t>(s.A) * s.B;
    if (lines.size() != rows + 1)
        throw ParseError("expected " + std::to_string(rows) + " table lines, found " +
                         std::to_string(lines.size() - 1));
    std::vector<Rational> values;
    values.reserve(s.size());
    for (std::size_t r = 0; r < rows; ++r) {
        auto tokens = detail::split_ws(lines[r + 1]);
        if (tokens.size() != block)
            throw ParseError("line " + std::to_string(r + 2) + " has " +
                             std::to_string(tokens.size()) + " entries, expected " +
                             std::to_string(block));
        for (const auto& tok : tokens)
            values.push_back(parse_rational(tok));
    }
    return Behavior(s, std::move(values));
}

inline json table_to_json(const Table& t) {
    const Scenario& s = t.scenario();
    json j;
    j["scenario"] = {s.X, s.Y, s.A, s.B};
    json table = json::array();
    for (const auto& v : t.values())
        table.push_back(format_rational(v));
    j["table"] = std::move(table);
    return j;
}

inline std::pair<Scenario, std::vector<Rational>> table_from_json(const json& j) {
    try {
        const auto& sc = j.at("scenario");
        if (!sc.is_array() || sc.size() != 4)
            throw ParseError("'scenario' must be [X,Y,A,B]");
        Scenario s = detail::scenario_from_fields(sc[0].get<int>(), sc[1].get<int>(),
                                                  sc[2].get<int>(), sc[3].get<int>());
        const auto& tab = j.at("table");
        if (!tab.is_array() || tab.size() != s.size())
            throw ParseError("'table' must hold " + std::to_string(s.size()) + " entries");
        std::vector<Rational> values;
        values.reserve(s.size());
        for (const auto& v : tab) {
            if (v.is_string())
                values.push_back(parse_rational(v.get<std::string>()));
            else if (v.is_number_integer())
                values.push_back(Rational(v.get<long>()));
            else
                throw ParseError("table entries must be rational strings");
        }
        return {s, std::move(values)};
    } catch (const json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
}

inline Behavior behavior_from_json(const json& j) {
    auto [s, values] = table_from_json(j);
    return Behavior(s, std::move(values));
}

/// Functional plus the bound it is compared against.
inline json functional_to_json(const BellFunctional& f, const Rational& bound) {
    json j = table_to_json(f);
    j["bound"] = format_rational(bound);
    return j;
}

inline std::pair<BellFunctional, Rational> functional_from_json(const json& j) {
    auto [s, values] = table_from_json(j);
    Rational bound = 0;
    try {
        bound = parse_rational(j.at("bound").get<std::string>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
    return {BellFunctional(s, std::move(values)), bound};
}

/// Accepts either format; JSON is recognized by a leading '{'.
inline Behavior behavior_from_string(const std::string& content) {
    auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        json j;
        try {
            j = json::parse(content);
        } catch (const json::exception& e) {
            throw ParseError(std::string("json: ") + e.what());
        }
        return behavior_from_json(j);
    }
    return behavior_from_text(content);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << content;
}

inline Behavior load_behavior(const std::string& path) {
    return behavior_from_string(read_file(path));
}

} // namespace ensbox
