#pragma once

// Vertex enumeration of the no-signaling polytope.
//
// The main routine walks the vertex graph one relabeling class at a time: at
// a class representative it enumerates the extreme rays of the tangent cone
// (double description on the tight positivity constraints), follows each ray
// to the neighboring vertex, and canonicalizes the neighbor. Every vertex of
// the polytope lies in a class reached this way because the vertex graph is
// connected and relabelings map edges to edges.
//
// full_polytope_vertices() runs double description on the whole polytope and
// serves as an independent check for small scenarios.

#include "behavior.hpp"
#include "boxgen.hpp"
#include "double_description.hpp"
#include "errors.hpp"
#include "extremality.hpp"
#include "ns_space.hpp"
#include "relabeling.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ensbox {

struct EnumerationOptions {
    DDOptions dd;
    /// Ceiling on the number of vertices materialized by orbit expansion.
    std::size_t max_vertices = 2'000'000;
    /// Ceiling on the number of relabeling classes visited.
    std::size_t max_classes = 100'000;
    CanonicalOptions canonical;
};

struct VertexClass {
    Behavior representative; ///< canonical form
    bool local = false;      ///< deterministic 0/1 box
    bool full_output = false;
    std::size_t degree = 0;  ///< number of edges at the vertex
};

struct VertexClassSummary {
    Scenario scenario;
    std::vector<VertexClass> classes; ///< sorted by representative table

    [[nodiscard]] std::size_t nonlocal_count() const {
        return static_cast<std::size_t>(std::count_if(
            classes.begin(), classes.end(), [](const VertexClass& c) { return !c.local; }));
    }
    [[nodiscard]] std::size_t nonlocal_full_output_count() const {
        return static_cast<std::size_t>(std::count_if(
            classes.begin(), classes.end(),
            [](const VertexClass& c) { return !c.local && c.full_output; }));
    }
};

inline bool is_deterministic(const Behavior& p) {
    for (const auto& v : p.values())
        if (v != 0 && v != 1)
            return false;
    return true;
}

/// Rows of the tangent cone at p in parametrization coordinates: the
/// positivity constraints tight at p, duplicates removed.
inline std::vector<IntRow> tangent_cone_rows(const NsParametrization& param, const Behavior& p) {
    std::set<IntRow> seen;
    std::vector<IntRow> rows;
    for (std::size_t e = 0; e < p.size(); ++e)
        if (p[e] == 0) {
            IntRow r(param.coeff[e].begin(), param.coeff[e].end());
            if (seen.insert(r).second)
                rows.push_back(std::move(r));
        }
    return rows;
}

/// All vertices adjacent to the vertex p, in ray order (duplicates removed).
inline std::vector<Behavior> vertex_neighbors(const NsParametrization& param, const Behavior& p,
                                              const DDOptions& opt = {}) {
    auto rays = cone_extreme_rays(tangent_cone_rows(param, p), param.dim, opt);
    std::vector<Behavior> out;
    std::set<std::vector<Rational>> seen;
    for (const auto& u : rays) {
        std::vector<Rational> dir(u.begin(), u.end());
        Table w(p.scenario(), param.direction(dir));
        std::optional<Rational> step;
        for (std::size_t e = 0; e < p.size(); ++e)
            if (w[e] < 0) {
                Rational t = p[e] / -w[e];
                if (!step || t < *step)
                    step = t;
            }
        if (!step)
            throw DomainError("vertex_neighbors: unbounded edge direction");
        Behavior q = p;
        for (std::size_t e = 0; e < p.size(); ++e)
            if (w[e] != 0)
                q[e] += *step * w[e];
        if (seen.insert(q.values()).second)
            out.push_back(std::move(q));
    }
    return out;
}

/// One representative per relabeling class of vertices, found by walking the
/// vertex graph from the seeds (and a deterministic box).
inline VertexClassSummary enumerate_vertex_classes(const Scenario& s,
                                                   const std::vector<Behavior>& seeds = {},
                                                   const EnumerationOptions& opt = {}) {
    NsParametrization param(s);
    std::map<std::vector<Rational>, std::size_t> index;
    std::vector<VertexClass> classes;
    std::deque<std::size_t> queue;
    auto visit = [&](const Behavior& v) {
        Behavior c = canonical_form(v, opt.canonical);
        auto [it, inserted] = index.emplace(c.values(), classes.size());
        if (!inserted)
            return;
        if (classes.size() >= opt.max_classes)
            throw GuardExceeded("vertex enumeration: more than " + std::to_string(opt.max_classes) +
                                " classes");
        VertexClass vc;
        vc.local = is_deterministic(c);
        vc.full_output = c.full_output();
        vc.representative = std::move(c);
        queue.push_back(classes.size());
        classes.push_back(std::move(vc));
    };
    for (const auto& seed : seeds) {
        if (seed.scenario() != s)
            throw DomainError("seed scenario (" + seed.scenario().to_string() +
                              ") differs from (" + s.to_string() + ")");
        if (!is_extremal(seed))
            throw DomainError("seed is not a vertex of the no-signaling polytope");
        visit(seed);
    }
    visit(deterministic_box(s, std::vector<int>(s.X, 0), std::vector<int>(s.Y, 0)));
    while (!queue.empty()) {
        std::size_t k = queue.front();
        queue.pop_front();
        Behavior rep = classes[k].representative;
        auto neighbors = vertex_neighbors(param, rep, opt.dd);
        classes[k].degree = neighbors.size();
        for (const auto& q : neighbors)
            visit(q);
    }
    std::sort(classes.begin(), classes.end(), [](const VertexClass& a, const VertexClass& b) {
        return a.representative.values() < b.representative.values();
    });
    return {s, std::move(classes)};
}

/// The full orbit of p under the relabeling group, sorted.
inline std::vector<Behavior> relabeling_orbit(const Behavior& p, std::size_t max_size = 2'000'000) {
    auto gens = relabeling_generators(p.scenario());
    std::set<std::vector<Rational>> seen{p.values()};
    std::vector<Behavior> frontier{p};
    while (!frontier.empty()) {
        std::vector<Behavior> next;
        for (const auto& q : frontier)
            for (const auto& g : gens) {
                Behavior r = apply_relabeling(q, g);
                if (seen.insert(r.values()).second) {
                    if (seen.size() > max_size)
                        throw GuardExceeded("orbit exceeds " + std::to_string(max_size) +
                                            " behaviors");
                    next.push_back(std::move(r));
                }
            }
        frontier = std::move(next);
    }
    std::vector<Behavior> out;
    out.reserve(seen.size());
    for (const auto& v : seen)
        out.emplace_back(p.scenario(), v);
    return out;
}

/// Complete vertex list of the NS polytope of s in lexicographic table order.
inline std::vector<Behavior> enumerate_vertices(const Scenario& s,
                                                const std::vector<Behavior>& seeds = {},
                                                const EnumerationOptions& opt = {}) {
    auto summary = enumerate_vertex_classes(s, seeds, opt);
    std::vector<Behavior> out;
    for (const auto& c : summary.classes) {
        auto orbit = relabeling_orbit(c.representative, opt.max_vertices);
        if (out.size() + orbit.size() > opt.max_vertices)
            throw GuardExceeded("vertex list exceeds " + std::to_string(opt.max_vertices) +
                                " behaviors");
        for (auto& v : orbit)
            out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every vertex by double description on the whole polytope, homogenized as
/// the cone {(c, t) : t * offset + coeff * c >= 0, t >= 0}. Only practical
/// for small scenarios; used as a cross-check.
inline std::vector<Behavior> full_polytope_vertices(const Scenario& s, const DDOptions& opt = {}) {
    NsParametrization param(s);
    const std::size_t d = param.dim + 1;
    std::vector<IntRow> rows;
    for (std::size_t e = 0; e < s.size(); ++e) {
        IntRow r(param.coeff[e].begin(), param.coeff[e].end());
        r.push_back(param.offset[e]);
        rows.push_back(std::move(r));
    }
    IntRow t(d, 0);
    t.back() = 1;
    rows.push_back(t);
    std::vector<Behavior> out;
    for (const auto& ray : cone_extreme_rays(rows, d, opt)) {
        if (ray.back() == 0)
            throw DomainError("full_polytope_vertices: unbounded direction");
        std::vector<Rational> c(param.dim);
        for (std::size_t k = 0; k < param.dim; ++k) {
            c[k] = Rational(ray[k], ray.back());
            c[k].canonicalize();
        }
        out.push_back(param.behavior(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace ensbox
