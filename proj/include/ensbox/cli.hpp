#pragma once

// The ensbox command line. Each subcommand writes a deterministic report to
// `out` and returns the process exit code:
//   0  success / positive verdict   (valid, extremal, violation found, min dit found)
//   1  negative verdict             (invalid, not extremal, no violation, no dit <= d_max)
//   2  input error                  (unreadable or malformed file, bad arguments)
//   3  a resource guard was hit

#include "boxgen.hpp"
#include "comm.hpp"
#include "enumeration.hpp"
#include "export.hpp"
#include "extremality.hpp"
#include "io.hpp"
#include "lo.hpp"
#include "relabeling.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ensbox::cli {

enum Exit : int { ok = 0, negative = 1, input_error = 2, guard = 3 };

inline Scenario scenario_arg(const std::vector<int>& v) {
    if (v.size() != 4)
        throw ParseError("scenario needs four numbers X Y A B");
    return detail::scenario_from_fields(v[0], v[1], v[2], v[3]);
}

inline void write_json(const std::string& path, const json& j) { write_file(path, j.dump() + "\n"); }

inline int cmd_validate(const std::string& path, std::ostream& out) {
    Behavior p = load_behavior(path);
    out << "scenario " << p.scenario().to_string() << "\n";
    auto report = validate(p);
    if (report.ok()) {
        out << "ok\n";
        return ok;
    }
    out << "invalid\n";
    for (const auto& v : report.violations)
        out << "  " << v << "\n";
    return negative;
}

inline int cmd_extremal(const std::string& path, const std::string& perturbation_path,
                        std::ostream& out) {
    Behavior p = load_behavior(path);
    auto cert = extremality_certificate(p);
    if (cert.extremal()) {
        out << "extremal\n";
        return ok;
    }
    out << "non-extremal\n";
    out << "steps +" << format_rational(cert.alpha) << " -" << format_rational(cert.beta) << "\n";
    if (perturbation_path.empty()) {
        out << to_text(*cert.perturbation);
    } else {
        write_file(perturbation_path, to_text(*cert.perturbation));
        out << "perturbation written to " << perturbation_path << "\n";
    }
    return negative;
}

struct EnumerateArgs {
    std::vector<int> scenario;
    std::vector<std::string> seeds;
    std::string out_path;
    std::size_t max_rays = DDOptions{}.max_rays;
    std::size_t max_classes = EnumerationOptions{}.max_classes;
};

inline int cmd_enumerate(const EnumerateArgs& a, std::ostream& out) {
    Scenario s = scenario_arg(a.scenario);
    EnumerationOptions opt;
    opt.dd.max_rays = a.max_rays;
    opt.max_classes = a.max_classes;
    std::vector<Behavior> seeds;
    for (const auto& path : a.seeds)
        seeds.push_back(load_behavior(path));
    auto summary = enumerate_vertex_classes(s, seeds, opt);
    std::vector<Behavior> vertices;
    std::vector<std::size_t> orbit_sizes;
    for (const auto& c : summary.classes) {
        auto orbit = relabeling_orbit(c.representative, opt.max_vertices);
        orbit_sizes.push_back(orbit.size());
        for (auto& v : orbit)
            vertices.push_back(std::move(v));
    }
    std::sort(vertices.begin(), vertices.end());
    out << "scenario " << s.to_string() << "\n";
    out << "vertices " << vertices.size() << "\n";
    out << "classes " << summary.classes.size() << " (nonlocal " << summary.nonlocal_count()
        << ", nonlocal full-output " << summary.nonlocal_full_output_count() << ")\n";
    for (std::size_t i = 0; i < summary.classes.size(); ++i) {
        const auto& c = summary.classes[i];
        out << "class " << i << ": " << (c.local ? "local" : "nonlocal");
        if (!c.local && c.full_output)
            out << " full-output";
        out << ", degree " << c.degree << ", orbit " << orbit_sizes[i] << "\n";
    }
    if (!a.out_path.empty()) {
        write_json(a.out_path, vertex_database(summary, vertices));
        out << "database written to " << a.out_path << "\n";
    }
    return ok;
}

struct Lo2Args {
    std::string path;
    int k = 2;
    std::size_t max_graph_vertices = LOOptions{}.max_graph_vertices;
    std::uint64_t max_nodes = LOOptions{}.max_search_nodes;
    std::string json_path;
};

inline int cmd_lo2(const Lo2Args& a, std::ostream& out) {
    Behavior p = load_behavior(a.path);
    LOOptions opt;
    opt.max_copies = std::max(opt.max_copies, a.k);
    opt.max_graph_vertices = a.max_graph_vertices;
    opt.max_search_nodes = a.max_nodes;
    auto g = build_exclusivity_graph(p, a.k, opt);
    out << "graph " << g.size() << " events, k = " << a.k << "\n";
    auto r = find_violating_clique(g, opt);
    if (r.witness) {
        const auto& w = *r.witness;
        out << "violation: clique of " << w.events.size() << " events, total weight "
            << format_rational(w.total_weight) << "\n";
        for (const auto& e : w.events)
            out << "  " << format_event(e) << " " << format_rational(e.weight) << "\n";
        if (!a.json_path.empty())
            write_json(a.json_path, clique_to_json(w));
        return ok;
    }
    if (!r.complete) {
        out << "search stopped after " << r.nodes << " nodes without a decision\n";
        return guard;
    }
    out << "no violation; maximum clique weight " << format_rational(*r.max_weight) << "\n";
    return negative;
}

struct CommArgs {
    std::string path;
    int d_max = 5;
    std::size_t max_strategies = CommOptions{}.max_strategies;
    std::string json_path;
};

inline int cmd_commcheck(const CommArgs& a, std::ostream& out) {
    Behavior p = load_behavior(a.path);
    CommOptions opt;
    opt.max_strategies = a.max_strategies;
    auto r = min_dit(p, a.d_max, opt);
    json report;
    report["box"] = a.path;
    json per_d = json::array();
    for (std::size_t i = 0; i < r.per_d.size(); ++i) {
        int d = static_cast<int>(i) + 1;
        const auto& m = r.per_d[i];
        json entry = membership_to_json(m);
        entry["d"] = d;
        out << "d " << d << ": " << (m.inside() ? "inside" : "outside");
        if (!m.inside()) {
            auto vis = comm_visibility_witness(p, d, opt);
            out << ", visibility " << format_rational(vis.visibility);
            entry["visibility"] = visibility_to_json(vis);
            out << ", separating bound " << format_rational(m.bound) << " < "
                << format_rational(m.functional->value(p));
        }
        out << "\n";
        per_d.push_back(std::move(entry));
    }
    report["per_d"] = std::move(per_d);
    if (r.min_dit)
        report["min_dit"] = *r.min_dit;
    else
        report["bound"] = "> " + std::to_string(a.d_max);
    if (!a.json_path.empty())
        write_json(a.json_path, report);
    if (r.min_dit) {
        out << "min_dit " << *r.min_dit << "\n";
        return ok;
    }
    out << "min_dit > " << a.d_max << "\n";
    return negative;
}

/// Name of the shipped fixture (or "local") in the same class as v, else "-".
inline std::string class_label(const Behavior& v) {
    if (is_deterministic(v))
        return "local";
    Behavior c = canonical_form(v);
    for (const auto& name : fixture_names()) {
        auto f = *named_fixture(name);
        if (f.scenario() == v.scenario() && canonical_form(f) == c)
            return name;
    }
    return "-";
}

inline int cmd_decompose(const std::string& path, const std::string& out_path, std::ostream& out) {
    Behavior p = load_behavior(path);
    auto d = decompose_into_vertices(p);
    out << "terms " << d.terms.size() << "\n";
    for (const auto& t : d.terms)
        out << "  " << format_rational(t.weight) << " " << class_label(t.vertex) << "\n";
    if (!out_path.empty()) {
        write_json(out_path, decomposition_to_json(d));
        out << "decomposition written to " << out_path << "\n";
    }
    return ok;
}

inline std::string write_numbered(const std::string& dir, const std::string& stem, std::size_t i,
                                  const Behavior& p) {
    std::string path = (std::filesystem::path(dir) / (stem + "_" + std::to_string(i) + ".txt")).string();
    write_file(path, to_text(p));
    return path;
}

struct GenerateArgs {
    std::string dir = ".";
    std::string name;
    std::vector<int> scenario;
    bool coprime = false;
};

inline int cmd_generate_fixtures(const GenerateArgs& a, std::ostream& out) {
    if (!a.name.empty()) {
        auto p = named_fixture(a.name);
        if (!p)
            throw ParseError("unknown fixture '" + a.name + "'");
        out << to_text(*p);
        return ok;
    }
    std::filesystem::create_directories(a.dir);
    for (const auto& name : fixture_names()) {
        std::string path = (std::filesystem::path(a.dir) / (name + ".txt")).string();
        write_file(path, to_text(*named_fixture(name)));
        out << path << "\n";
    }
    return ok;
}

inline int cmd_generate_eq1(const GenerateArgs& a, std::ostream& out) {
    Scenario s = scenario_arg(a.scenario);
    std::filesystem::create_directories(a.dir);
    Eq1Enumerator e(s, a.coprime);
    std::size_t i = 0;
    while (auto item = e.next())
        out << write_numbered(a.dir, "eq1", i++, item->second) << "\n";
    return ok;
}

inline int cmd_generate_nsdd(const GenerateArgs& a, std::ostream& out) {
    Scenario s = scenario_arg(a.scenario);
    std::filesystem::create_directories(a.dir);
    std::size_t i = 0;
    for (const auto& spec : enumerate_nsdd_specs(s))
        out << write_numbered(a.dir, "nsdd", i++, nsdd_box(spec)) << "\n";
    return ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of extremal no-signaling boxes", "ensbox"};
    app.require_subcommand(1);

    std::string path, aux_path;
    EnumerateArgs en;
    Lo2Args lo;
    CommArgs cc;
    GenerateArgs gen;

    auto* validate_cmd = app.add_subcommand("validate", "Check positivity, normalization and no-signaling");
    validate_cmd->add_option("file", path, "Behavior file (text or JSON)")->required();

    auto* extremal_cmd = app.add_subcommand("extremal", "Decide whether a behavior is a vertex");
    extremal_cmd->add_option("file", path, "Behavior file")->required();
    extremal_cmd->add_option("-o,--perturbation", aux_path, "Write the perturbation direction here");

    auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate vertex classes of a scenario");
    enum_cmd->add_option("scenario", en.scenario, "X Y A B")->required()->expected(4);
    enum_cmd->add_option("--seed", en.seeds, "Known vertex to start from (repeatable)");
    enum_cmd->add_option("-o,--out", en.out_path, "Write the JSON vertex database here");
    enum_cmd->add_option("--max-rays", en.max_rays, "Ceiling on intermediate rays");
    enum_cmd->add_option("--max-classes", en.max_classes, "Ceiling on visited classes");

    auto* lo_cmd = app.add_subcommand("lo2", "Search for local-orthogonality violations");
    lo_cmd->add_option("file", lo.path, "Behavior file")->required();
    lo_cmd->add_option("-k,--copies", lo.k, "Number of copies")->check(CLI::Range(1, 4));
    lo_cmd->add_option("--max-graph-vertices", lo.max_graph_vertices, "Ceiling on graph size");
    lo_cmd->add_option("--max-nodes", lo.max_nodes, "Branch-and-bound node budget");
    lo_cmd->add_option("--json", lo.json_path, "Write the witness as JSON here");

    auto* comm_cmd = app.add_subcommand("commcheck", "Smallest message alphabet simulating a box");
    comm_cmd->add_option("file", cc.path, "Behavior file")->required();
    comm_cmd->add_option("--d-max", cc.d_max, "Largest alphabet tried")->check(CLI::Range(1, 64));
    comm_cmd->add_option("--max-strategies", cc.max_strategies, "Ceiling on strategy count");
    comm_cmd->add_option("--json", cc.json_path, "Write the report as JSON here");

    auto* dec_cmd = app.add_subcommand("decompose", "Write a behavior as a mixture of vertices");
    dec_cmd->add_option("file", path, "Behavior file")->required();
    dec_cmd->add_option("-o,--out", aux_path, "Write the JSON decomposition here");

    auto* gen_cmd = app.add_subcommand("generate", "Write candidate boxes and fixtures");
    gen_cmd->require_subcommand(1);
    auto* gen_fix = gen_cmd->add_subcommand("fixtures", "Shipped constant boxes");
    gen_fix->add_option("--dir", gen.dir, "Output directory");
    gen_fix->add_option("--name", gen.name, "Print one fixture to stdout instead");
    auto* gen_eq1 = gen_cmd->add_subcommand("eq1", "Block family with circulant interior");
    gen_eq1->add_option("scenario", gen.scenario, "X Y A B")->required()->expected(4);
    gen_eq1->add_flag("--coprime", gen.coprime, "Only shifts generating the cyclic group");
    gen_eq1->add_option("--dir", gen.dir, "Output directory");
    auto* gen_nsdd = gen_cmd->add_subcommand("nsdd", "Permutation family with 1/d entries");
    gen_nsdd->add_option("scenario", gen.scenario, "X Y A B")->required()->expected(4);
    gen_nsdd->add_option("--dir", gen.dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (validate_cmd->parsed())
            return cmd_validate(path, out);
        if (extremal_cmd->parsed())
            return cmd_extremal(path, aux_path, out);
        if (enum_cmd->parsed())
            return cmd_enumerate(en, out);
        if (lo_cmd->parsed())
            return cmd_lo2(lo, out);
        if (comm_cmd->parsed())
            return cmd_commcheck(cc, out);
        if (dec_cmd->parsed())
            return cmd_decompose(path, aux_path, out);
        if (gen_fix->parsed())
            return cmd_generate_fixtures(gen, out);
        if (gen_eq1->parsed())
            return cmd_generate_eq1(gen, out);
        if (gen_nsdd->parsed())
            return cmd_generate_nsdd(gen, out);
    } catch (const GuardExceeded& e) {
        err << "guard exceeded: " << e.what() << "\n";
        return guard;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}

} // namespace ensbox::cli
