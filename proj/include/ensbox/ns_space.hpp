#pragma once

// Linear structure of the no-signaling polytope: the homogeneous equality
// system every perturbation must satisfy, and an integral affine
// parametrization (Collins-Gisin coordinates) used internally by the vertex
// enumeration.

#include "behavior.hpp"
#include "linalg.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace ensbox {

/// One homogeneous linear equation over table entries, as (index, coefficient).
using SparseRow = std::vector<std::pair<std::size_t, int>>;

/// Normalization and no-signaling equations in homogeneous form. A table v
/// satisfies all of them iff p + v keeps every normalization and marginal of p.
inline std::vector<SparseRow> ns_equality_rows(const Scenario& s) {
    std::vector<SparseRow> rows;
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y) {
            SparseRow r;
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    r.emplace_back(s.index(x, y, a, b), 1);
            rows.push_back(std::move(r));
        }
    for (int x = 0; x < s.X; ++x)
        for (int a = 0; a < s.A; ++a)
            for (int y = 1; y < s.Y; ++y) {
                SparseRow r;
                for (int b = 0; b < s.B; ++b) {
                    r.emplace_back(s.index(x, y, a, b), 1);
                    r.emplace_back(s.index(x, 0, a, b), -1);
                }
                rows.push_back(std::move(r));
            }
    for (int y = 0; y < s.Y; ++y)
        for (int b = 0; b < s.B; ++b)
            for (int x = 1; x < s.X; ++x) {
                SparseRow r;
                for (int a = 0; a < s.A; ++a) {
                    r.emplace_back(s.index(x, y, a, b), 1);
                    r.emplace_back(s.index(0, y, a, b), -1);
                }
                rows.push_back(std::move(r));
            }
    return rows;
}

/// Every NS table is p = offset + coeff * c for a unique c in Q^D, where D is
/// ns_dimension(s). Coordinates: Alice marginals p(a|x) for a < A-1, then Bob
/// marginals p(b|y) for b < B-1, then joint p(ab|xy) for a < A-1, b < B-1.
/// All offsets and coefficients are 0 or +-1.
struct NsParametrization {
    Scenario scenario;
    std::size_t dim = 0;
    std::vector<int> offset;              // per table entry
    std::vector<std::vector<int>> coeff;  // per table entry, length dim

    explicit NsParametrization(const Scenario& s) : scenario(s), dim(ns_dimension(s)) {
        offset.assign(s.size(), 0);
        coeff.assign(s.size(), std::vector<int>(dim, 0));
        for (int x = 0; x < s.X; ++x)
            for (int y = 0; y < s.Y; ++y)
                for (int a = 0; a < s.A; ++a)
                    for (int b = 0; b < s.B; ++b) {
                        auto e = s.index(x, y, a, b);
                        auto& c = coeff[e];
                        bool last_a = a == s.A - 1, last_b = b == s.B - 1;
                        if (!last_a && !last_b) {
                            c[joint(x, y, a, b)] = 1;
                        } else if (!last_a) {
                            c[alice(x, a)] = 1;
                            for (int bb = 0; bb + 1 < s.B; ++bb)
                                c[joint(x, y, a, bb)] = -1;
                        } else if (!last_b) {
                            c[bob(y, b)] = 1;
                            for (int aa = 0; aa + 1 < s.A; ++aa)
                                c[joint(x, y, aa, b)] = -1;
                        } else {
                            offset[e] = 1;
                            for (int aa = 0; aa + 1 < s.A; ++aa)
                                c[alice(x, aa)] = -1;
                            for (int bb = 0; bb + 1 < s.B; ++bb)
                                c[bob(y, bb)] = -1;
                            for (int aa = 0; aa + 1 < s.A; ++aa)
                                for (int bb = 0; bb + 1 < s.B; ++bb)
                                    c[joint(x, y, aa, bb)] = 1;
                        }
                    }
    }

    [[nodiscard]] std::size_t alice(int x, int a) const {
        return static_cast<std::size_t>(x) * (scenario.A - 1) + a;
    }
    [[nodiscard]] std::size_t bob(int y, int b) const {
        return static_cast<std::size_t>(scenario.X) * (scenario.A - 1) +
               static_cast<std::size_t>(y) * (scenario.B - 1) + b;
    }
    [[nodiscard]] std::size_t joint(int x, int y, int a, int b) const {
        std::size_t base = static_cast<std::size_t>(scenario.X) * (scenario.A - 1) +
                           static_cast<std::size_t>(scenario.Y) * (scenario.B - 1);
        return base + ((static_cast<std::size_t>(x) * scenario.Y + y) * (scenario.A - 1) + a) *
                          (scenario.B - 1) +
               b;
    }

    /// Coordinates of an NS table (no validity check beyond reading entries).
    [[nodiscard]] std::vector<Rational> coordinates(const Table& p) const {
        const Scenario& s = scenario;
        std::vector<Rational> c(dim);
        for (int x = 0; x < s.X; ++x)
            for (int a = 0; a + 1 < s.A; ++a) {
                Rational m = 0;
                for (int b = 0; b < s.B; ++b)
                    m += p(x, 0, a, b);
                c[alice(x, a)] = m;
            }
        for (int y = 0; y < s.Y; ++y)
            for (int b = 0; b + 1 < s.B; ++b) {
                Rational m = 0;
                for (int a = 0; a < s.A; ++a)
                    m += p(0, y, a, b);
                c[bob(y, b)] = m;
            }
        for (int x = 0; x < s.X; ++x)
            for (int y = 0; y < s.Y; ++y)
                for (int a = 0; a + 1 < s.A; ++a)
                    for (int b = 0; b + 1 < s.B; ++b)
                        c[joint(x, y, a, b)] = p(x, y, a, b);
        return c;
    }

    /// Linear part only: the table direction of a coordinate direction.
    [[nodiscard]] std::vector<Rational> direction(const std::vector<Rational>& u) const {
        std::vector<Rational> out(scenario.size());
        for (std::size_t e = 0; e < out.size(); ++e)
            for (std::size_t k = 0; k < dim; ++k)
                if (coeff[e][k] != 0 && u[k] != 0)
                    out[e] += coeff[e][k] * u[k];
        return out;
    }

    [[nodiscard]] Behavior behavior(const std::vector<Rational>& c) const {
        auto dir = direction(c);
        for (std::size_t e = 0; e < dir.size(); ++e)
            dir[e] += offset[e];
        return Behavior(scenario, std::move(dir));
    }
};

} // namespace ensbox
