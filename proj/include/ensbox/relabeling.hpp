#pragma once

// The relabeling group of a bipartite scenario and canonical forms of
// behaviors under it.
//
// A relabeling r acts on a table p as
//
//     (r p)(pi_x(a), rho_y(b) | sigma(x), tau(y)) = p(a, b | x, y)
//
// after an optional party swap (applied first, legal only when X = Y and
// A = B). Output permutations are indexed by the *source* input.

#include "behavior.hpp"
#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace ensbox {

using Permutation = std::vector<int>;

inline Permutation identity_permutation(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

inline Permutation inverse_permutation(const Permutation& p) {
    Permutation inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        inv[p[i]] = static_cast<int>(i);
    return inv;
}

/// (f o g)(i) = f(g(i))
inline Permutation compose_permutations(const Permutation& f, const Permutation& g) {
    Permutation out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = f[g[i]];
    return out;
}

inline bool is_permutation_of(const Permutation& p, int n) {
    if (p.size() != static_cast<std::size_t>(n))
        return false;
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v])
            return false;
        seen[v] = 1;
    }
    return true;
}

inline std::vector<Permutation> all_permutations(int n) {
    std::vector<Permutation> out;
    Permutation p = identity_permutation(n);
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

struct Relabeling {
    bool swap_parties = false;
    Permutation alice_input_perm;
    Permutation bob_input_perm;
    std::vector<Permutation> alice_output_perms;
    std::vector<Permutation> bob_output_perms;

    static Relabeling identity(const Scenario& s) {
        Relabeling r;
        r.alice_input_perm = identity_permutation(s.X);
        r.bob_input_perm = identity_permutation(s.Y);
        r.alice_output_perms.assign(s.X, identity_permutation(s.A));
        r.bob_output_perms.assign(s.Y, identity_permutation(s.B));
        return r;
    }

    /// Throws DomainError when r is not an element of the group of s.
    void check(const Scenario& s) const {
        if (swap_parties && !s.symmetric())
            throw DomainError("party swap requires X = Y and A = B, scenario is (" +
                              s.to_string() + ")");
        bool ok = is_permutation_of(alice_input_perm, s.X) &&
                  is_permutation_of(bob_input_perm, s.Y) &&
                  alice_output_perms.size() == static_cast<std::size_t>(s.X) &&
                  bob_output_perms.size() == static_cast<std::size_t>(s.Y);
        if (ok)
            for (const auto& p : alice_output_perms)
                ok = ok && is_permutation_of(p, s.A);
        if (ok)
            for (const auto& p : bob_output_perms)
                ok = ok && is_permutation_of(p, s.B);
        if (!ok)
            throw DomainError("relabeling does not fit scenario (" + s.to_string() + ")");
    }

    friend bool operator==(const Relabeling&, const Relabeling&) = default;
};

namespace detail {

// Exchanges the roles of the two parties in the permutation part.
inline Relabeling swap_roles(const Relabeling& r) {
    Relabeling out;
    out.swap_parties = r.swap_parties;
    out.alice_input_perm = r.bob_input_perm;
    out.bob_input_perm = r.alice_input_perm;
    out.alice_output_perms = r.bob_output_perms;
    out.bob_output_perms = r.alice_output_perms;
    return out;
}

// Permutation parts only: (f o g).
inline Relabeling compose_perm_parts(const Relabeling& f, const Relabeling& g) {
    Relabeling out;
    out.alice_input_perm = compose_permutations(f.alice_input_perm, g.alice_input_perm);
    out.bob_input_perm = compose_permutations(f.bob_input_perm, g.bob_input_perm);
    out.alice_output_perms.resize(g.alice_output_perms.size());
    for (std::size_t x = 0; x < g.alice_output_perms.size(); ++x)
        out.alice_output_perms[x] = compose_permutations(
            f.alice_output_perms[g.alice_input_perm[x]], g.alice_output_perms[x]);
    out.bob_output_perms.resize(g.bob_output_perms.size());
    for (std::size_t y = 0; y < g.bob_output_perms.size(); ++y)
        out.bob_output_perms[y] =
            compose_permutations(f.bob_output_perms[g.bob_input_perm[y]], g.bob_output_perms[y]);
    return out;
}

} // namespace detail

/// Applies `first`, then `second`.
inline Relabeling compose(const Relabeling& second, const Relabeling& first) {
    Relabeling g = second.swap_parties ? detail::swap_roles(first) : first;
    Relabeling out = detail::compose_perm_parts(second, g);
    out.swap_parties = first.swap_parties != second.swap_parties;
    return out;
}

inline Relabeling inverse(const Relabeling& r) {
    Relabeling inv;
    inv.alice_input_perm = inverse_permutation(r.alice_input_perm);
    inv.bob_input_perm = inverse_permutation(r.bob_input_perm);
    inv.alice_output_perms.resize(r.alice_output_perms.size());
    for (std::size_t x = 0; x < r.alice_output_perms.size(); ++x)
        inv.alice_output_perms[r.alice_input_perm[x]] = inverse_permutation(r.alice_output_perms[x]);
    inv.bob_output_perms.resize(r.bob_output_perms.size());
    for (std::size_t y = 0; y < r.bob_output_perms.size(); ++y)
        inv.bob_output_perms[r.bob_input_perm[y]] = inverse_permutation(r.bob_output_perms[y]);
    if (r.swap_parties) {
        inv = detail::swap_roles(inv);
        inv.swap_parties = true;
    }
    return inv;
}

template <class T>
std::vector<T> apply_relabeling_values(const Scenario& s, const std::vector<T>& values,
                                       const Relabeling& r) {
    r.check(s);
    std::vector<T> src;
    const std::vector<T>* in = &values;
    if (r.swap_parties) {
        src.resize(values.size());
        for (int x = 0; x < s.X; ++x)
            for (int y = 0; y < s.Y; ++y)
                for (int a = 0; a < s.A; ++a)
                    for (int b = 0; b < s.B; ++b)
                        src[s.index(y, x, b, a)] = values[s.index(x, y, a, b)];
        in = &src;
    }
    std::vector<T> out(values.size());
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    out[s.index(r.alice_input_perm[x], r.bob_input_perm[y],
                                r.alice_output_perms[x][a], r.bob_output_perms[y][b])] =
                        (*in)[s.index(x, y, a, b)];
    return out;
}

inline Behavior apply_relabeling(const Behavior& p, const Relabeling& r) {
    return Behavior(p.scenario(), apply_relabeling_values(p.scenario(), p.values(), r));
}

inline BellFunctional apply_relabeling(const BellFunctional& f, const Relabeling& r) {
    return BellFunctional(f.scenario(), apply_relabeling_values(f.scenario(), f.values(), r));
}

template <class Rng>
Relabeling random_relabeling(const Scenario& s, Rng& rng) {
    Relabeling r = Relabeling::identity(s);
    auto shuffle = [&](Permutation& p) { std::shuffle(p.begin(), p.end(), rng); };
    shuffle(r.alice_input_perm);
    shuffle(r.bob_input_perm);
    for (auto& p : r.alice_output_perms)
        shuffle(p);
    for (auto& p : r.bob_output_perms)
        shuffle(p);
    if (s.symmetric())
        r.swap_parties = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    return r;
}

/// Group generators: adjacent transpositions of inputs and of outputs of each
/// input, plus the party swap when legal.
inline std::vector<Relabeling> relabeling_generators(const Scenario& s) {
    std::vector<Relabeling> gens;
    auto base = Relabeling::identity(s);
    for (int i = 0; i + 1 < s.X; ++i) {
        auto r = base;
        std::swap(r.alice_input_perm[i], r.alice_input_perm[i + 1]);
        gens.push_back(r);
    }
    for (int i = 0; i + 1 < s.Y; ++i) {
        auto r = base;
        std::swap(r.bob_input_perm[i], r.bob_input_perm[i + 1]);
        gens.push_back(r);
    }
    // Output transpositions on input 0 suffice together with input permutations,
    // but all inputs are listed to keep orbit searches shallow.
    for (int x = 0; x < s.X; ++x)
        for (int i = 0; i + 1 < s.A; ++i) {
            auto r = base;
            std::swap(r.alice_output_perms[x][i], r.alice_output_perms[x][i + 1]);
            gens.push_back(r);
        }
    for (int y = 0; y < s.Y; ++y)
        for (int i = 0; i + 1 < s.B; ++i) {
            auto r = base;
            std::swap(r.bob_output_perms[y][i], r.bob_output_perms[y][i + 1]);
            gens.push_back(r);
        }
    if (s.symmetric()) {
        auto r = base;
        r.swap_parties = true;
        gens.push_back(r);
    }
    return gens;
}

inline std::uint64_t relabeling_group_order(const Scenario& s) {
    auto fact = [](int n) {
        std::uint64_t f = 1;
        for (int i = 2; i <= n; ++i)
            f *= static_cast<std::uint64_t>(i);
        return f;
    };
    std::uint64_t order = fact(s.X) * fact(s.Y);
    for (int x = 0; x < s.X; ++x)
        order *= fact(s.A);
    for (int y = 0; y < s.Y; ++y)
        order *= fact(s.B);
    return s.symmetric() ? 2 * order : order;
}

struct CanonicalOptions {
    /// Ceiling on simultaneously tied partial relabelings.
    std::size_t max_states = 4'000'000;
};

template <class T>
struct CanonicalResult {
    std::vector<T> table;
    Relabeling witness; ///< apply_relabeling(input, witness) == table
};

namespace detail {

struct PartialRelabeling {
    std::vector<int> x_src;                 // new x' -> old x
    std::vector<int> y_src;                 // new y' -> old y
    std::vector<const Permutation*> a_inv;  // per new x': new a' -> old a
    std::vector<const Permutation*> b_inv;  // per new y': new b' -> old b
};

// Lexicographic minimization over input/output permutations, one segment at a
// time. All partial relabelings that tie on the current prefix are kept, the
// rest are pruned.
template <class T>
CanonicalResult<T> canonical_without_swap(const Scenario& s, const std::vector<T>& p,
                                          const CanonicalOptions& opt) {
    const auto perms_a = all_permutations(s.A);
    const auto perms_b = all_permutations(s.B);
    const std::size_t block = static_cast<std::size_t>(s.A) * s.B;

    std::vector<T> result;
    result.reserve(p.size());
    std::vector<PartialRelabeling> states(1);
    std::vector<PartialRelabeling> next;
    std::vector<T> best, cand;

    auto consider = [&](PartialRelabeling&& st) {
        if (best.empty() || cand < best) {
            best = cand;
            next.clear();
            next.push_back(std::move(st));
        } else if (cand == best) {
            if (next.size() >= opt.max_states)
                throw GuardExceeded("canonical form: more than " + std::to_string(opt.max_states) +
                                    " tied partial relabelings");
            next.push_back(std::move(st));
        }
    };
    auto fill_block = [&](std::vector<T>& dst, std::size_t offset, int xo, int yo,
                          const Permutation& ai, const Permutation& bi) {
        for (int a = 0; a < s.A; ++a)
            for (int b = 0; b < s.B; ++b)
                dst[offset + a * s.B + b] = p[s.index(xo, yo, ai[a], bi[b])];
    };

    // First Alice input, one Bob input at a time.
    for (int j = 0; j < s.Y; ++j) {
        best.clear();
        next.clear();
        cand.assign(block, T{});
        for (const auto& st : states) {
            std::vector<char> used_y(s.Y, 0);
            for (int y : st.y_src)
                used_y[y] = 1;
            const int x_lo = j == 0 ? 0 : st.x_src[0];
            const int x_hi = j == 0 ? s.X : st.x_src[0] + 1;
            for (int xo = x_lo; xo < x_hi; ++xo)
                for (int yo = 0; yo < s.Y; ++yo) {
                    if (used_y[yo])
                        continue;
                    const std::size_t na = j == 0 ? perms_a.size() : 1;
                    for (std::size_t ia = 0; ia < na; ++ia) {
                        const Permutation* ai = j == 0 ? &perms_a[ia] : st.a_inv[0];
                        for (const auto& bi : perms_b) {
                            fill_block(cand, 0, xo, yo, *ai, bi);
                            if (!best.empty() && best < cand)
                                continue;
                            PartialRelabeling ext = st;
                            if (j == 0) {
                                ext.x_src.push_back(xo);
                                ext.a_inv.push_back(ai);
                            }
                            ext.y_src.push_back(yo);
                            ext.b_inv.push_back(&bi);
                            consider(std::move(ext));
                        }
                    }
                }
        }
        result.insert(result.end(), best.begin(), best.end());
        states.swap(next);
    }

    // Remaining Alice inputs, each contributing a whole row of blocks.
    const std::size_t segment = block * s.Y;
    for (int i = 1; i < s.X; ++i) {
        best.clear();
        next.clear();
        cand.assign(segment, T{});
        for (const auto& st : states) {
            std::vector<char> used_x(s.X, 0);
            for (int x : st.x_src)
                used_x[x] = 1;
            for (int xo = 0; xo < s.X; ++xo) {
                if (used_x[xo])
                    continue;
                for (const auto& ai : perms_a) {
                    // -1: already smaller than best, 0: tied so far, 1: larger
                    int order = best.empty() ? -1 : 0;
                    for (int j = 0; j < s.Y; ++j) {
                        fill_block(cand, j * block, xo, st.y_src[j], ai, *st.b_inv[j]);
                        if (order != 0)
                            continue;
                        auto lo = cand.begin() + j * block, hi = lo + block;
                        auto blo = best.begin() + j * block, bhi = blo + block;
                        if (std::lexicographical_compare(lo, hi, blo, bhi))
                            order = -1;
                        else if (std::lexicographical_compare(blo, bhi, lo, hi)) {
                            order = 1;
                            break;
                        }
                    }
                    if (order == 1)
                        continue;
                    PartialRelabeling ext = st;
                    ext.x_src.push_back(xo);
                    ext.a_inv.push_back(&ai);
                    consider(std::move(ext));
                }
            }
        }
        result.insert(result.end(), best.begin(), best.end());
        states.swap(next);
    }

    const PartialRelabeling& st = states.front();
    Relabeling r;
    r.alice_input_perm.assign(s.X, 0);
    r.bob_input_perm.assign(s.Y, 0);
    r.alice_output_perms.assign(s.X, Permutation(s.A));
    r.bob_output_perms.assign(s.Y, Permutation(s.B));
    for (int xn = 0; xn < s.X; ++xn) {
        int xo = st.x_src[xn];
        r.alice_input_perm[xo] = xn;
        for (int an = 0; an < s.A; ++an)
            r.alice_output_perms[xo][(*st.a_inv[xn])[an]] = an;
    }
    for (int yn = 0; yn < s.Y; ++yn) {
        int yo = st.y_src[yn];
        r.bob_input_perm[yo] = yn;
        for (int bn = 0; bn < s.B; ++bn)
            r.bob_output_perms[yo][(*st.b_inv[yn])[bn]] = bn;
    }
    return {std::move(result), std::move(r)};
}

} // namespace detail

/// Lexicographically least table (flat order) over the whole relabeling orbit.
template <class T>
CanonicalResult<T> canonical_values(const Scenario& s, const std::vector<T>& p,
                                    const CanonicalOptions& opt = {}) {
    auto direct = detail::canonical_without_swap(s, p, opt);
    if (!s.symmetric())
        return direct;
    std::vector<T> t(p.size());
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    t[s.index(y, x, b, a)] = p[s.index(x, y, a, b)];
    auto swapped = detail::canonical_without_swap(s, t, opt);
    if (swapped.table < direct.table) {
        swapped.witness.swap_parties = true;
        return swapped;
    }
    return direct;
}

namespace detail {

// Scales an exact table to int64 numerators over a common denominator.
inline std::optional<std::pair<std::vector<std::int64_t>, BigInt>>
to_scaled_integers(const std::vector<Rational>& values) {
    BigInt l = lcm_of_denominators(values);
    std::vector<std::int64_t> out;
    out.reserve(values.size());
    for (const auto& v : values) {
        BigInt n = v.get_num() * (l / v.get_den());
        if (!n.fits_slong_p())
            return std::nullopt;
        out.push_back(n.get_si());
    }
    return std::make_pair(std::move(out), l);
}

} // namespace detail

inline CanonicalResult<Rational> canonical_form_with_witness(const Behavior& p,
                                                             const CanonicalOptions& opt = {}) {
    const Scenario& s = p.scenario();
    if (auto scaled = detail::to_scaled_integers(p.values())) {
        auto res = canonical_values(s, scaled->first, opt);
        std::vector<Rational> table;
        table.reserve(res.table.size());
        for (auto n : res.table) {
            Rational q(BigInt(n), scaled->second);
            q.canonicalize();
            table.push_back(std::move(q));
        }
        return {std::move(table), std::move(res.witness)};
    }
    return canonical_values(s, p.values(), opt);
}

inline Behavior canonical_form(const Behavior& p, const CanonicalOptions& opt = {}) {
    return Behavior(p.scenario(), canonical_form_with_witness(p, opt).table);
}

struct BehaviorClass {
    Behavior representative;          ///< canonical form
    std::size_t count = 0;            ///< members of the input in this class
    std::vector<std::size_t> members; ///< indices into the input
};

/// Partitions the input by canonical form; classes are listed in order of
/// first appearance.
inline std::vector<BehaviorClass> classify(const std::vector<Behavior>& behaviors,
                                           const CanonicalOptions& opt = {}) {
    std::vector<BehaviorClass> classes;
    if (behaviors.empty())
        return classes;
    const Scenario& s = behaviors.front().scenario();
    std::map<std::vector<Rational>, std::size_t> index;
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
        if (behaviors[i].scenario() != s)
            throw ShapeError("classify: mixed scenarios (" + s.to_string() + ") and (" +
                             behaviors[i].scenario().to_string() + ")");
        Behavior c = canonical_form(behaviors[i], opt);
        auto [it, inserted] = index.emplace(c.values(), classes.size());
        if (inserted)
            classes.push_back({std::move(c), 0, {}});
        auto& cls = classes[it->second];
        ++cls.count;
        cls.members.push_back(i);
    }
    return classes;
}

} // namespace ensbox
