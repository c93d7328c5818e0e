#pragma once

// Extremality in the no-signaling polytope via the rank of the tight
// constraint system, and convex decomposition into vertices by repeated line
// search along kernel directions.

#include "behavior.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "ns_space.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ensbox {

enum class Extremality { Extremal, NonExtremal };

struct ExtremalityCertificate {
    Extremality verdict = Extremality::Extremal;
    /// Nonzero direction v with p +- eps v inside the polytope; primitive integer entries.
    std::optional<Table> perturbation;
    /// Largest steps keeping p + alpha v and p - beta v valid.
    Rational alpha, beta;

    [[nodiscard]] bool extremal() const { return verdict == Extremality::Extremal; }
};

/// Kernel of the NS equality system restricted to the support of p.
inline std::vector<std::vector<Rational>> support_kernel(const Behavior& p) {
    const Scenario& s = p.scenario();
    std::vector<std::size_t> support;
    std::vector<std::ptrdiff_t> column(s.size(), -1);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (p[i] != 0) {
            column[i] = static_cast<std::ptrdiff_t>(support.size());
            support.push_back(i);
        }
    auto rows = ns_equality_rows(s);
    RationalMatrix m(rows.size(), support.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto [idx, coef] : rows[r])
            if (column[idx] >= 0)
                m(r, column[idx]) += coef;
    auto kernel = kernel_basis(std::move(m));
    std::vector<std::vector<Rational>> out;
    out.reserve(kernel.size());
    for (auto& k : kernel) {
        std::vector<Rational> full(s.size());
        for (std::size_t c = 0; c < support.size(); ++c)
            full[support[c]] = k[c];
        out.push_back(primitive_direction(full));
    }
    return out;
}

/// Maximal steps (alpha, beta) with p + alpha v >= 0 and p - beta v >= 0.
/// v must vanish off the support of p and take both signs.
inline std::pair<Rational, Rational> line_search(const Table& p, const Table& v) {
    std::optional<Rational> alpha, beta;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (v[i] < 0) {
            Rational t = p[i] / -v[i];
            if (!alpha || t < *alpha)
                alpha = t;
        } else if (v[i] > 0) {
            Rational t = p[i] / v[i];
            if (!beta || t < *beta)
                beta = t;
        }
    }
    if (!alpha || !beta)
        throw DomainError("line search: direction does not change sign");
    return {*alpha, *beta};
}

inline ExtremalityCertificate extremality_certificate(const Behavior& p) {
    require_valid(p, "extremality_certificate");
    ExtremalityCertificate cert;
    auto kernel = support_kernel(p);
    if (kernel.empty())
        return cert;
    cert.verdict = Extremality::NonExtremal;
    Table v(p.scenario(), std::move(kernel.front()));
    auto [alpha, beta] = line_search(p, v);
    cert.alpha = alpha;
    cert.beta = beta;
    cert.perturbation = std::move(v);
    return cert;
}

inline bool is_extremal(const Behavior& p) { return extremality_certificate(p).extremal(); }

/// Checks a NonExtremal certificate from scratch: v nonzero, zero off the
/// support, homogeneous NS equations hold, and p + alpha v, p - beta v valid.
inline bool verify_perturbation(const Behavior& p, const ExtremalityCertificate& cert) {
    if (cert.extremal() || !cert.perturbation)
        return false;
    const Table& v = *cert.perturbation;
    if (v.scenario() != p.scenario())
        return false;
    bool nonzero = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0 && v[i] != 0)
            return false;
        nonzero = nonzero || v[i] != 0;
    }
    if (!nonzero || cert.alpha <= 0 || cert.beta <= 0)
        return false;
    for (const auto& row : ns_equality_rows(p.scenario())) {
        Rational sum = 0;
        for (auto [idx, coef] : row)
            sum += coef * v[idx];
        if (sum != 0)
            return false;
    }
    Behavior plus(p.scenario()), minus(p.scenario());
    for (std::size_t i = 0; i < p.size(); ++i) {
        plus[i] = p[i] + cert.alpha * v[i];
        minus[i] = p[i] - cert.beta * v[i];
    }
    return validate(plus).ok() && validate(minus).ok();
}

struct DecompositionTerm {
    Rational weight;
    Behavior vertex;
};

struct Decomposition {
    std::vector<DecompositionTerm> terms;
};

struct DecompositionOptions {
    std::size_t max_terms = 100'000;
};

/// Walks from p to a vertex of the smallest face containing p: repeatedly
/// moves along the first kernel direction until a new entry hits zero.
inline Behavior vertex_of_minimal_face(const Behavior& p) {
    Behavior q = p;
    while (true) {
        auto kernel = support_kernel(q);
        if (kernel.empty())
            return q;
        Table v(q.scenario(), std::move(kernel.front()));
        auto [alpha, beta] = line_search(q, v);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (v[i] != 0)
                q[i] += alpha * v[i];
    }
}

/// Throws DomainError unless every Decomposition invariant holds for p.
inline void verify_decomposition(const Behavior& p, const Decomposition& d) {
    if (d.terms.empty())
        throw DomainError("decomposition has no terms");
    Rational total = 0;
    Behavior sum(p.scenario());
    for (const auto& t : d.terms) {
        if (t.weight <= 0)
            throw DomainError("decomposition weight is not positive");
        if (t.vertex.scenario() != p.scenario())
            throw DomainError("decomposition vertex has wrong scenario");
        if (!is_extremal(t.vertex))
            throw DomainError("decomposition term is not extremal");
        total += t.weight;
        for (std::size_t i = 0; i < p.size(); ++i)
            sum[i] += t.weight * t.vertex[i];
    }
    if (total != 1)
        throw DomainError("decomposition weights sum to " + format_rational(total));
    if (!(sum == p))
        throw DomainError("decomposition does not reproduce the behavior");
}

/// Recursive line search. At a non-vertex p the direction is v = w - p for a
/// vertex w of the smallest face containing p, so the step p + alpha v lands
/// on w and the step p - beta v reaches a smaller face; the two pieces get
/// weights beta/(alpha+beta) and alpha/(alpha+beta). This yields at most
/// dim + 1 terms. Terms are merged by vertex, listed in lexicographic table
/// order, and verified before they are returned.
inline Decomposition decompose_into_vertices(const Behavior& p,
                                             const DecompositionOptions& opt = {}) {
    require_valid(p, "decompose_into_vertices");
    std::map<std::vector<Rational>, Rational> weighted;
    Behavior rest = p;
    Rational mass = 1; // weight of rest in p
    while (true) {
        Behavior w = vertex_of_minimal_face(rest);
        if (w == rest) {
            weighted[rest.values()] += mass;
            break;
        }
        Table v(rest.scenario());
        for (std::size_t i = 0; i < rest.size(); ++i)
            v[i] = w[i] - rest[i];
        auto [alpha, beta] = line_search(rest, v);
        Behavior minus(rest.scenario());
        for (std::size_t i = 0; i < rest.size(); ++i)
            minus[i] = rest[i] - beta * v[i];
        Rational total = alpha + beta;
        Behavior plus(rest.scenario());
        for (std::size_t i = 0; i < rest.size(); ++i)
            plus[i] = rest[i] + alpha * v[i];
        weighted[plus.values()] += mass * beta / total;
        if (weighted.size() > opt.max_terms)
            throw GuardExceeded("decomposition exceeds " + std::to_string(opt.max_terms) +
                                " terms");
        mass *= alpha / total;
        rest = std::move(minus);
    }
    Decomposition d;
    for (const auto& [vert, w] : weighted)
        d.terms.push_back({w, Behavior(p.scenario(), vert)});
    verify_decomposition(p, d);
    return d;
}

} // namespace ensbox
