#pragma once

// Constructors for candidate extremal boxes and named correlations.

#include "behavior.hpp"
#include "errors.hpp"
#include "relabeling.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ensbox {

/// p(ab|xy) = 1 iff a = alice[x] and b = bob[y].
inline Behavior deterministic_box(const Scenario& s, const std::vector<int>& alice,
                                  const std::vector<int>& bob) {
    if (alice.size() != static_cast<std::size_t>(s.X) || bob.size() != static_cast<std::size_t>(s.Y))
        throw DomainError("deterministic box: output maps have wrong length");
    Behavior p(s);
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y) {
            if (alice[x] < 0 || alice[x] >= s.A || bob[y] < 0 || bob[y] >= s.B)
                throw DomainError("deterministic box: output out of range");
            p(x, y, alice[x], bob[y]) = 1;
        }
    return p;
}

/// All A^X * B^Y local deterministic boxes, Alice's map varying slowest.
inline std::vector<Behavior> local_deterministic_boxes(const Scenario& s,
                                                       std::size_t max_boxes = 1'000'000) {
    double count = std::pow(double(s.A), s.X) * std::pow(double(s.B), s.Y);
    if (count > double(max_boxes))
        throw GuardExceeded("local deterministic boxes: " + std::to_string(std::uint64_t(count)) +
                            " exceed the limit " + std::to_string(max_boxes));
    std::vector<Behavior> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> alice(s.X, 0);
    while (true) {
        std::vector<int> bob(s.Y, 0);
        while (true) {
            out.push_back(deterministic_box(s, alice, bob));
            int k = s.Y - 1;
            while (k >= 0 && ++bob[k] == s.B)
                bob[k--] = 0;
            if (k < 0)
                break;
        }
        int k = s.X - 1;
        while (k >= 0 && ++alice[k] == s.A)
            alice[k--] = 0;
        if (k < 0)
            break;
    }
    return out;
}

/// The PR box of (2,2,2,2): p(ab|xy) = 1/2 iff a xor b = x y.
inline Behavior pr_box() {
    Scenario s(2, 2, 2, 2);
    Behavior p(s);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                p(x, y, a, a ^ (x & y)) = frac(1, 2);
    return p;
}

// --- Full-output extremal boxes of (3,3,3,2) and (2,3,3,3) -------------------
// Rows are x*A + a, columns y*B + b.

/// Full-output vertex of (3,3,3,2) with weights in {1/4, 1/2}.
inline Behavior box1() {
    return behavior_from_block_matrix({3, 3, 3, 2},
                                      {{0, 1, 0, 1, 0, 1},
                                       {0, 1, 1, 0, 1, 0},
                                       {2, 0, 0, 2, 0, 2},
                                       {0, 2, 0, 2, 0, 2},
                                       {1, 0, 0, 1, 1, 0},
                                       {1, 0, 1, 0, 0, 1},
                                       {0, 1, 0, 1, 1, 0},
                                       {0, 1, 1, 0, 0, 1},
                                       {2, 0, 0, 2, 0, 2}},
                                      4);
}

/// Full-output vertex of (3,3,3,2) with all weights 1/3.
inline Behavior box2() {
    return behavior_from_block_matrix({3, 3, 3, 2},
                                      {{0, 1, 0, 1, 0, 1},
                                       {0, 1, 0, 1, 1, 0},
                                       {1, 0, 1, 0, 0, 1},
                                       {0, 1, 0, 1, 0, 1},
                                       {0, 1, 1, 0, 0, 1},
                                       {1, 0, 0, 1, 1, 0},
                                       {0, 1, 0, 1, 1, 0},
                                       {0, 1, 1, 0, 0, 1},
                                       {1, 0, 0, 1, 0, 1}},
                                      3);
}

/// Full-output vertex of (2,3,3,3) with 34 zeros.
inline Behavior box3() {
    return behavior_from_block_matrix({2, 3, 3, 3},
                                      {{0, 0, 2, 0, 0, 2, 0, 0, 2},
                                       {0, 1, 0, 0, 1, 0, 0, 1, 0},
                                       {1, 0, 0, 1, 0, 0, 1, 0, 0},
                                       {0, 0, 1, 0, 0, 1, 0, 1, 0},
                                       {0, 0, 1, 0, 1, 0, 1, 0, 0},
                                       {1, 1, 0, 1, 0, 1, 0, 0, 2}},
                                      4);
}

/// Full-output vertex of (2,3,3,3) with 35 zeros.
inline Behavior box4() {
    return behavior_from_block_matrix({2, 3, 3, 3},
                                      {{0, 0, 1, 0, 0, 1, 0, 0, 1},
                                       {0, 1, 0, 0, 1, 0, 0, 0, 1},
                                       {2, 0, 0, 2, 0, 0, 1, 1, 0},
                                       {0, 0, 1, 0, 1, 0, 0, 1, 0},
                                       {0, 1, 0, 0, 0, 1, 1, 0, 0},
                                       {2, 0, 0, 2, 0, 0, 0, 0, 2}},
                                      4);
}

/// Full-output vertex of (2,3,3,3) with 36 zeros.
inline Behavior box5() {
    return behavior_from_block_matrix({2, 3, 3, 3},
                                      {{0, 0, 1, 0, 0, 1, 0, 0, 1},
                                       {0, 1, 0, 0, 1, 0, 0, 1, 0},
                                       {1, 0, 0, 1, 0, 0, 1, 0, 0},
                                       {0, 0, 1, 0, 0, 1, 0, 1, 0},
                                       {0, 1, 0, 0, 1, 0, 1, 0, 0},
                                       {1, 0, 0, 1, 0, 0, 0, 0, 1}},
                                      3);
}

// --- Magic square ------------------------------------------------------------

namespace detail {

inline const std::vector<std::vector<int>>& magic_square_pattern() {
    static const std::vector<std::vector<int>> rows = {
        {1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0}, {1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1},
        {0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1}, {0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0},
        {1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1}, {1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0},
        {0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1},
        {1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1}, {1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0},
        {0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0}, {0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1}};
    return rows;
}

} // namespace detail

inline Scenario magic_square_scenario() { return {3, 3, 4, 4}; }

/// The magic-square correlations, every nonzero entry 1/8.
inline Behavior magic_square_behavior() {
    return behavior_from_block_matrix(magic_square_scenario(), detail::magic_square_pattern(), 8);
}

/// 0/1 Bell functional with the support pattern of the magic-square table.
inline BellFunctional magic_square_functional() {
    auto p = behavior_from_block_matrix(magic_square_scenario(), detail::magic_square_pattern(), 1);
    return BellFunctional(p.scenario(), p.values());
}

/// The two extremal boxes whose midpoint is the magic-square table.
inline std::pair<Behavior, Behavior> magic_square_p1_p2() {
    auto s = magic_square_scenario();
    auto p1 = behavior_from_block_matrix(s,
                                         {{1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0},
                                          {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                                          {0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1},
                                          {0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0},
                                          {1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0},
                                          {0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0},
                                          {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                                          {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1},
                                          {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0},
                                          {0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0},
                                          {0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0},
                                          {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
                                         4);
    auto p2 = behavior_from_block_matrix(s,
                                         {{0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0},
                                          {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1},
                                          {0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0},
                                          {0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0},
                                          {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1},
                                          {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0},
                                          {0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0},
                                          {0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0},
                                          {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1},
                                          {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
                                          {0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0},
                                          {0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0}},
                                         4);
    return {std::move(p1), std::move(p2)};
}

/// Rank-1 measurement vectors on C^4 realizing the magic-square table with
/// the maximally entangled two-ququart state.
struct QuantumRealization {
    using Vec = std::array<int, 4>;
    /// alice_vectors[x][a], bob_vectors[y][b]
    std::array<std::array<Vec, 4>, 3> alice_vectors;
    std::array<std::array<Vec, 4>, 3> bob_vectors;
};

inline QuantumRealization magic_square_measurements() {
    QuantumRealization q;
    q.alice_vectors = {{
        {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}},
        {{{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}}},
        {{{1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}}},
    }};
    q.bob_vectors = {{
        {{{1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, -1}}},
        {{{1, 0, 1, 0}, {1, 0, -1, 0}, {0, 1, 0, 1}, {0, 1, 0, -1}}},
        {{{1, 0, 0, -1}, {1, 0, 0, 1}, {0, 1, -1, 0}, {0, 1, 1, 0}}},
    }};
    return q;
}

/// Born rule for the maximally entangled state (1/2) sum_i |ii> and real
/// rank-1 projectors: p(ab|xy) = <a|b>^2 / (4 |a|^2 |b|^2).
inline Behavior quantum_realization(const QuantumRealization& q = magic_square_measurements()) {
    Behavior p(magic_square_scenario());
    auto dot = [](const QuantumRealization::Vec& u, const QuantumRealization::Vec& v) {
        long s = 0;
        for (int i = 0; i < 4; ++i)
            s += long(u[i]) * v[i];
        return s;
    };
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const auto& u = q.alice_vectors[x][a];
                    const auto& v = q.bob_vectors[y][b];
                    long ip = dot(u, v);
                    p(x, y, a, b) = frac(ip * ip, 4 * dot(u, u) * dot(v, v));
                }
    return p;
}

// --- Block family with circulant interior --------------------------------------

/// Candidate box on a scenario with A = B. Alice inputs x < g and Bob inputs
/// y < h form the nondeterministic block: S = (1/A) identity on its first row
/// and column, T_{x,y} = (1/A) cyclic shift by offsets[x-1][y-1] elsewhere.
/// Inputs x >= g answer 0 (K blocks, Bob uniform), inputs y >= h answer 0
/// (L blocks, Alice uniform), and the corner is deterministic (M blocks).
struct Eq1Spec {
    Scenario scenario;
    int g = 2;
    int h = 2;
    std::vector<std::vector<int>> offsets; ///< (g-1) x (h-1) shift offsets in [0, A)

    /// Throws DomainError when the spec is malformed. An all-zero interior is
    /// rejected: it collapses to a mixture of deterministic boxes.
    void check() const {
        const Scenario& s = scenario;
        if (s.A != s.B)
            throw DomainError("eq1 family needs A = B");
        if (g < 2 || g > s.X || h < 2 || h > s.Y)
            throw DomainError("eq1: g must lie in [2, X] and h in [2, Y]");
        if (offsets.size() != static_cast<std::size_t>(g - 1))
            throw DomainError("eq1: offsets must have g-1 rows");
        bool any = false;
        for (const auto& row : offsets) {
            if (row.size() != static_cast<std::size_t>(h - 1))
                throw DomainError("eq1: offsets must have h-1 columns");
            for (int o : row) {
                if (o < 0 || o >= s.A)
                    throw DomainError("eq1: offset out of [0, A)");
                any = any || o != 0;
            }
        }
        if (!any)
            throw DomainError("eq1: all circulant offsets are zero");
    }

    /// Every offset generates the cyclic group Z_A.
    [[nodiscard]] bool coprime() const {
        for (const auto& row : offsets)
            for (int o : row)
                if (std::gcd(o, scenario.A) != 1)
                    return false;
        return true;
    }
};

inline Behavior eq1_box(const Eq1Spec& spec) {
    spec.check();
    const Scenario& s = spec.scenario;
    const int n = s.A;
    const Rational unit = frac(1, n);
    Behavior p(s);
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y) {
            bool row_nd = x < spec.g, col_nd = y < spec.h;
            if (row_nd && col_nd) {
                int shift = (x == 0 || y == 0) ? 0 : spec.offsets[x - 1][y - 1];
                for (int a = 0; a < n; ++a)
                    p(x, y, a, (a + shift) % n) = unit;
            } else if (row_nd) {
                for (int a = 0; a < n; ++a)
                    p(x, y, a, 0) = unit; // L: first column
            } else if (col_nd) {
                for (int b = 0; b < n; ++b)
                    p(x, y, 0, b) = unit; // K: first row
            } else {
                p(x, y, 0, 0) = 1; // M
            }
        }
    return p;
}

/// Restartable, order-deterministic stream over every valid Eq1Spec of a
/// scenario: g, then h, then offsets as a base-A counter (last entry fastest).
class Eq1Enumerator {
  public:
    Eq1Enumerator(Scenario s, bool coprime_only) : scenario_(s), coprime_only_(coprime_only) {
        if (s.A != s.B)
            throw DomainError("eq1 enumeration needs A = B, scenario is (" + s.to_string() + ")");
        reset();
    }

    void reset() {
        g_ = 2;
        h_ = 2;
        digits_.assign(cells(), 0);
        started_ = false;
        done_ = false;
    }

    std::optional<std::pair<Eq1Spec, Behavior>> next() {
        while (advance()) {
            Eq1Spec spec{scenario_, g_, h_, {}};
            bool any = false, coprime = true;
            spec.offsets.assign(g_ - 1, std::vector<int>(h_ - 1));
            for (int i = 0; i < g_ - 1; ++i)
                for (int j = 0; j < h_ - 1; ++j) {
                    int o = digits_[i * (h_ - 1) + j];
                    spec.offsets[i][j] = o;
                    any = any || o != 0;
                    coprime = coprime && std::gcd(o, scenario_.A) == 1;
                }
            if (!any || (coprime_only_ && !coprime))
                continue;
            Behavior p = eq1_box(spec);
            return std::make_pair(std::move(spec), std::move(p));
        }
        return std::nullopt;
    }

  private:
    [[nodiscard]] std::size_t cells() const { return static_cast<std::size_t>(g_ - 1) * (h_ - 1); }

    bool advance() {
        if (done_)
            return false;
        if (!started_) {
            started_ = true;
            return true;
        }
        for (std::size_t k = digits_.size(); k-- > 0;) {
            if (++digits_[k] < scenario_.A)
                return true;
            digits_[k] = 0;
        }
        if (++h_ > scenario_.Y) {
            h_ = 2;
            if (++g_ > scenario_.X) {
                done_ = true;
                return false;
            }
        }
        digits_.assign(cells(), 0);
        return true;
    }

    Scenario scenario_;
    bool coprime_only_;
    int g_ = 2, h_ = 2;
    std::vector<int> digits_;
    bool started_ = false, done_ = false;
};

inline std::vector<std::pair<Eq1Spec, Behavior>> enumerate_eq1(const Scenario& s,
                                                               bool coprime_only) {
    Eq1Enumerator e(s, coprime_only);
    std::vector<std::pair<Eq1Spec, Behavior>> out;
    while (auto item = e.next())
        out.push_back(std::move(*item));
    return out;
}

// --- Permutation family with 1/d entries ----------------------------------------

inline int permutation_order(const Permutation& p) {
    Permutation cur = p;
    int order = 1;
    auto id = identity_permutation(static_cast<int>(p.size()));
    while (cur != id) {
        cur = compose_permutations(p, cur);
        ++order;
    }
    return order;
}

/// Does the group generated by the permutations act transitively on [d]?
inline bool acts_transitively(const std::vector<Permutation>& gens, int d) {
    std::vector<char> reached(d, 0);
    std::vector<int> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (const auto& g : gens)
            if (!reached[g[i]]) {
                reached[g[i]] = 1;
                stack.push_back(g[i]);
            }
    }
    for (char r : reached)
        if (!r)
            return false;
    return true;
}

/// Box on (X, Y, d, d) with identity blocks on the first row and column and a
/// permutation block perms[x-1][y-1] elsewhere, every nonzero entry 1/d.
/// perms[0][0] must have order exactly k, and the permutations together must
/// act transitively on the outputs (otherwise the table splits into boxes on
/// disjoint output sets).
struct NsddSpec {
    Scenario scenario;
    int k = 2;
    std::vector<std::vector<Permutation>> perms; ///< (X-1) x (Y-1)

    void check() const {
        const Scenario& s = scenario;
        if (s.A != s.B)
            throw DomainError("nsdd family needs A = B");
        if (perms.size() != static_cast<std::size_t>(s.X - 1))
            throw DomainError("nsdd: perms must have X-1 rows");
        std::vector<Permutation> gens;
        for (const auto& row : perms) {
            if (row.size() != static_cast<std::size_t>(s.Y - 1))
                throw DomainError("nsdd: perms must have Y-1 columns");
            for (const auto& p : row) {
                if (!is_permutation_of(p, s.A))
                    throw DomainError("nsdd: block is not a permutation of the outputs");
                gens.push_back(p);
            }
        }
        if (permutation_order(perms[0][0]) != k)
            throw DomainError("nsdd: distinguished block does not have order k = " +
                              std::to_string(k));
        if (!acts_transitively(gens, s.A))
            throw DomainError("nsdd: permutations do not act transitively on the outputs");
    }
};

inline Behavior nsdd_box(const NsddSpec& spec) {
    spec.check();
    const Scenario& s = spec.scenario;
    const int d = s.A;
    const Rational unit = frac(1, d);
    Behavior p(s);
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            for (int a = 0; a < d; ++a) {
                int b = (x == 0 || y == 0) ? a : spec.perms[x - 1][y - 1][a];
                p(x, y, a, b) = unit;
            }
    return p;
}

/// Every valid NsddSpec of a scenario (k taken from the first block).
inline std::vector<NsddSpec> enumerate_nsdd_specs(const Scenario& s,
                                                  std::size_t max_specs = 1'000'000) {
    if (s.A != s.B)
        throw DomainError("nsdd enumeration needs A = B");
    auto perms = all_permutations(s.A);
    std::size_t cells = static_cast<std::size_t>(s.X - 1) * (s.Y - 1);
    double total = std::pow(double(perms.size()), double(cells));
    if (total > double(max_specs))
        throw GuardExceeded("nsdd enumeration: too many specs");
    std::vector<NsddSpec> out;
    std::vector<std::size_t> idx(cells, 0);
    while (true) {
        NsddSpec spec{s, 0, {}};
        spec.perms.assign(s.X - 1, std::vector<Permutation>(s.Y - 1));
        std::vector<Permutation> gens;
        for (std::size_t c = 0; c < cells; ++c) {
            spec.perms[c / (s.Y - 1)][c % (s.Y - 1)] = perms[idx[c]];
            gens.push_back(perms[idx[c]]);
        }
        spec.k = permutation_order(spec.perms[0][0]);
        if (acts_transitively(gens, s.A))
            out.push_back(std::move(spec));
        std::size_t k = cells;
        while (k > 0 && ++idx[k - 1] == perms.size())
            idx[--k] = 0;
        if (k == 0)
            break;
    }
    return out;
}

/// Looks up a shipped constant by its stable name: pr, box1..box5, p_ms, p1, p2.
inline std::optional<Behavior> named_fixture(const std::string& name) {
    if (name == "pr")
        return pr_box();
    if (name == "box1")
        return box1();
    if (name == "box2")
        return box2();
    if (name == "box3")
        return box3();
    if (name == "box4")
        return box4();
    if (name == "box5")
        return box5();
    if (name == "p_ms")
        return magic_square_behavior();
    if (name == "p1")
        return magic_square_p1_p2().first;
    if (name == "p2")
        return magic_square_p1_p2().second;
    return std::nullopt;
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"pr",   "box1", "box2", "box3", "box4",
                                                   "box5", "p_ms", "p1",   "p2"};
    return names;
}

} // namespace ensbox
