#pragma once

// Exact membership of a behavior in the convex hull of a finite vertex list,
// critical visibility against white noise, and functional maximization.

#include "behavior.hpp"
#include "errors.hpp"
#include "simplex.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ensbox {

enum class Membership { Inside, Outside };

struct MembershipResult {
    Membership verdict = Membership::Inside;
    /// Convex weights over the vertex list (Inside).
    std::vector<Rational> weights;
    /// Separating functional with F.v <= bound for every vertex and F.b > bound (Outside).
    std::optional<BellFunctional> functional;
    Rational bound;

    [[nodiscard]] bool inside() const { return verdict == Membership::Inside; }
};

namespace detail {

inline void check_vertex_list(const Table& b, const std::vector<Behavior>& vertices,
                              const char* context) {
    if (vertices.empty())
        throw DomainError(std::string(context) + ": empty vertex list");
    for (const auto& v : vertices)
        if (v.scenario() != b.scenario())
            throw ShapeError(std::string(context) + ": vertex scenario (" +
                             v.scenario().to_string() + ") differs from (" +
                             b.scenario().to_string() + ")");
}

// Integer functional with the same direction as f; bound tightened to the
// maximum over the vertices.
inline std::pair<BellFunctional, Rational> tighten(const std::vector<Rational>& f,
                                                   const Scenario& s,
                                                   const std::vector<Behavior>& vertices) {
    BellFunctional g(s, primitive_direction(f));
    Rational bound = g.value(vertices.front());
    for (const auto& v : vertices) {
        Rational val = g.value(v);
        if (val > bound)
            bound = val;
    }
    return {std::move(g), std::move(bound)};
}

} // namespace detail

/// Direct check of a membership witness.
inline bool verify_membership(const Behavior& b, const std::vector<Behavior>& vertices,
                              const MembershipResult& r) {
    if (r.inside()) {
        if (r.weights.size() != vertices.size())
            return false;
        Rational total = 0;
        std::vector<Rational> sum(b.size());
        for (std::size_t j = 0; j < vertices.size(); ++j) {
            if (r.weights[j] < 0)
                return false;
            if (r.weights[j] == 0)
                continue;
            total += r.weights[j];
            for (std::size_t e = 0; e < b.size(); ++e)
                if (vertices[j][e] != 0)
                    sum[e] += r.weights[j] * vertices[j][e];
        }
        return total == 1 && sum == b.values();
    }
    if (!r.functional || r.functional->scenario() != b.scenario())
        return false;
    for (const auto& v : vertices)
        if (r.functional->value(v) > r.bound)
            return false;
    return r.functional->value(b) > r.bound;
}

/// Is b a convex combination of the vertices? Exact LP; the witness is
/// verified before returning.
inline MembershipResult membership(const Behavior& b, const std::vector<Behavior>& vertices,
                                   const LPOptions& opt = {}) {
    detail::check_vertex_list(b, vertices, "membership");
    const std::size_t n = b.size(), k = vertices.size();
    RationalMatrix a(n + 1, k);
    std::vector<Rational> rhs(n + 1), cost(k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t e = 0; e < n; ++e)
            a(e, j) = vertices[j][e];
        a(n, j) = 1;
    }
    for (std::size_t e = 0; e < n; ++e)
        rhs[e] = b[e];
    rhs[n] = 1;
    auto sol = solve_lp(a, rhs, cost, opt);
    MembershipResult r;
    if (sol.status == LPStatus::Optimal) {
        r.verdict = Membership::Inside;
        r.weights = std::move(sol.x);
    } else {
        // y.(v_j, 1) >= 0 and y.(b, 1) < 0; F = -y restricted to the table.
        r.verdict = Membership::Outside;
        std::vector<Rational> f(n);
        for (std::size_t e = 0; e < n; ++e)
            f[e] = -sol.dual[e];
        auto [g, bound] = detail::tighten(f, b.scenario(), vertices);
        r.functional = std::move(g);
        r.bound = std::move(bound);
    }
    if (!verify_membership(b, vertices, r))
        throw Error("membership: LP witness failed verification");
    return r;
}

struct VisibilityResult {
    Rational visibility;
    /// Convex weights reproducing visibility * b + (1 - visibility) * uniform.
    std::vector<Rational> weights;
    /// When visibility < 1: functional F and bound L with F.v <= L for all
    /// vertices and F.(t b + (1-t) u) > L for every t > visibility.
    std::optional<BellFunctional> functional;
    Rational bound;
};

/// Checks the weights (and, below 1, the optimality functional) directly.
inline bool verify_visibility(const Behavior& b, const std::vector<Behavior>& vertices,
                              const VisibilityResult& r) {
    if (r.visibility < 0 || r.visibility > 1)
        return false;
    Behavior u = uniform_box(b.scenario());
    Behavior target = mix({{r.visibility, b}, {1 - r.visibility, u}});
    MembershipResult inside;
    inside.weights = r.weights;
    if (!verify_membership(target, vertices, inside))
        return false;
    if (r.visibility == 1)
        return true;
    if (!r.functional)
        return false;
    for (const auto& v : vertices)
        if (r.functional->value(v) > r.bound)
            return false;
    // F(target) = L and F is strictly increasing along b - u.
    return r.functional->value(target) == r.bound &&
           r.functional->value(b) > r.functional->value(u);
}

/// Largest t in [0, 1] with t b + (1 - t) uniform in conv(vertices).
inline VisibilityResult critical_visibility_witness(const Behavior& b,
                                                    const std::vector<Behavior>& vertices,
                                                    const LPOptions& opt = {}) {
    detail::check_vertex_list(b, vertices, "critical_visibility");
    const Scenario& s = b.scenario();
    Behavior u = uniform_box(s);
    const std::size_t n = b.size(), k = vertices.size();
    // columns: lambda_1..lambda_k, t, slack;  rows: entries, sum, cap
    RationalMatrix a(n + 2, k + 2);
    std::vector<Rational> rhs(n + 2), cost(k + 2);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t e = 0; e < n; ++e)
            a(e, j) = vertices[j][e];
        a(n, j) = 1;
    }
    for (std::size_t e = 0; e < n; ++e) {
        a(e, k) = u[e] - b[e];
        rhs[e] = u[e];
    }
    rhs[n] = 1;
    a(n + 1, k) = 1;
    a(n + 1, k + 1) = 1;
    rhs[n + 1] = 1;
    cost[k] = 1;
    auto sol = solve_lp(a, rhs, cost, opt);
    if (sol.status == LPStatus::Infeasible)
        throw DomainError("critical_visibility: the uniform box is outside the vertex hull");
    if (sol.status != LPStatus::Optimal)
        throw Error("critical_visibility: LP unbounded");
    VisibilityResult r;
    r.visibility = sol.value;
    r.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
    if (r.visibility < 1) {
        // Dual y: y.(v_j,1,0) >= 0 and y.(u-b,0,1) >= 1 with y_cap = 0 at t < 1,
        // so F = -y_table separates.
        std::vector<Rational> f(n);
        for (std::size_t e = 0; e < n; ++e)
            f[e] = -sol.dual[e];
        auto [g, bound] = detail::tighten(f, s, vertices);
        r.functional = std::move(g);
        r.bound = std::move(bound);
    }
    if (!verify_visibility(b, vertices, r))
        throw Error("critical_visibility: LP witness failed verification");
    return r;
}

inline Rational critical_visibility(const Behavior& b, const std::vector<Behavior>& vertices,
                                    const LPOptions& opt = {}) {
    return critical_visibility_witness(b, vertices, opt).visibility;
}

/// Exact maximum of F over a finite list; ties go to the first maximizer.
inline std::pair<Rational, Behavior> maximize_functional(const BellFunctional& f,
                                                         const std::vector<Behavior>& vertices) {
    if (vertices.empty())
        throw DomainError("maximize_functional: empty vertex list");
    std::size_t arg = 0;
    Rational best = f.value(vertices[0]);
    for (std::size_t j = 1; j < vertices.size(); ++j) {
        Rational v = f.value(vertices[j]);
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    return {best, vertices[arg]};
}

} // namespace ensbox
