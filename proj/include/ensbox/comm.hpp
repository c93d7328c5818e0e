#pragma once

// Classical simulation with one-way communication: deterministic strategies
// in which Alice sends Bob a message with d values, and the polytope they
// span (LHV+dit).

#include "behavior.hpp"
#include "errors.hpp"
#include "membership.hpp"
#include "relabeling.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ensbox {

struct CommStrategy {
    Scenario scenario;
    int d = 1;
    std::vector<int> alice_out;          ///< [x] -> a
    std::vector<int> message;            ///< [x] -> m in [0, d)
    std::vector<std::vector<int>> bob_out; ///< [y][m] -> b

    void check() const {
        const Scenario& s = scenario;
        if (d < 1)
            throw DomainError("strategy alphabet must be at least 1");
        bool ok = alice_out.size() == static_cast<std::size_t>(s.X) &&
                  message.size() == static_cast<std::size_t>(s.X) &&
                  bob_out.size() == static_cast<std::size_t>(s.Y);
        for (int x = 0; ok && x < s.X; ++x)
            ok = alice_out[x] >= 0 && alice_out[x] < s.A && message[x] >= 0 && message[x] < d;
        for (int y = 0; ok && y < s.Y; ++y) {
            ok = bob_out[y].size() == static_cast<std::size_t>(d);
            for (int m = 0; ok && m < d; ++m)
                ok = bob_out[y][m] >= 0 && bob_out[y][m] < s.B;
        }
        if (!ok)
            throw DomainError("strategy maps are not total and range-valid for (" + s.to_string() +
                              ")");
    }
};

/// p(ab|xy) = 1 iff a = alice_out(x) and b = bob_out(y, message(x)). The
/// table is normalized but may signal from Alice to Bob.
inline Behavior strategy_behavior(const CommStrategy& c) {
    c.check();
    const Scenario& s = c.scenario;
    Behavior p(s);
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            p(x, y, c.alice_out[x], c.bob_out[y][c.message[x]]) = 1;
    return p;
}

struct CommOptions {
    /// Ceiling on the number of distinct strategy behaviors.
    std::size_t max_strategies = 2'000'000;
    /// Ceiling on Alice's (output map, message map) pairs in lhvd_value.
    std::size_t max_alice_strategies = 50'000'000;
    LPOptions lp;
};

namespace detail {

// Number of maps from n labelled slots to k options taking at most d distinct
// values: sum over j <= d of S(n, j) k (k-1) ... (k-j+1).
inline double tuples_with_few_values(int n, double k, int d) {
    std::vector<std::vector<double>> st(n + 1, std::vector<double>(n + 1, 0));
    st[0][0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j)
            st[i][j] = j * st[i - 1][j] + st[i - 1][j - 1];
    double total = 0;
    for (int j = 1; j <= std::min(n, d); ++j) {
        double falling = 1;
        for (int t = 0; t < j; ++t)
            falling *= (k - t);
        total += st[n][j] * falling;
    }
    return total;
}

} // namespace detail

/// Number of distinct behaviors of LHV+dit strategies.
inline double strategy_behavior_count(const Scenario& s, int d) {
    double bob_functions = std::pow(double(s.B), s.Y);
    return std::pow(double(s.A), s.X) * detail::tuples_with_few_values(s.X, bob_functions, d);
}

/// One strategy per distinct behavior. A behavior fixes Alice's outputs and,
/// for each x, the function y -> b Bob applies; at most d of these functions
/// differ. Messages number the distinct functions in order of first use;
/// unused messages make Bob answer 0. Alice's output map varies slowest.
inline std::vector<CommStrategy> enumerate_strategies(const Scenario& s, int d,
                                                      const CommOptions& opt = {}) {
    if (d < 1)
        throw DomainError("strategy alphabet must be at least 1");
    double count = strategy_behavior_count(s, d);
    if (count > double(opt.max_strategies))
        throw GuardExceeded("LHV+" + std::to_string(d) + " strategies for (" + s.to_string() +
                            "): " + std::to_string(std::uint64_t(count)) + " above the limit " +
                            std::to_string(opt.max_strategies));
    const std::uint64_t nfun = static_cast<std::uint64_t>(std::pow(double(s.B), s.Y));
    auto function = [&](std::uint64_t code) {
        std::vector<int> f(s.Y);
        for (int y = s.Y - 1; y >= 0; --y) {
            f[y] = static_cast<int>(code % s.B);
            code /= s.B;
        }
        return f;
    };
    std::vector<CommStrategy> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> alice(s.X, 0);
    while (true) {
        std::vector<std::uint64_t> fx(s.X, 0);
        while (true) {
            std::vector<std::uint64_t> distinct;
            std::vector<int> msg(s.X);
            for (int x = 0; x < s.X; ++x) {
                auto it = std::find(distinct.begin(), distinct.end(), fx[x]);
                msg[x] = static_cast<int>(it - distinct.begin());
                if (it == distinct.end())
                    distinct.push_back(fx[x]);
            }
            if (distinct.size() <= static_cast<std::size_t>(d)) {
                CommStrategy c{s, d, alice, msg, std::vector<std::vector<int>>(s.Y, std::vector<int>(d, 0))};
                for (std::size_t m = 0; m < distinct.size(); ++m) {
                    auto f = function(distinct[m]);
                    for (int y = 0; y < s.Y; ++y)
                        c.bob_out[y][m] = f[y];
                }
                out.push_back(std::move(c));
            }
            int x = s.X - 1;
            while (x >= 0 && ++fx[x] == nfun)
                fx[x--] = 0;
            if (x < 0)
                break;
        }
        int x = s.X - 1;
        while (x >= 0 && ++alice[x] == s.A)
            alice[x--] = 0;
        if (x < 0)
            break;
    }
    return out;
}

/// Vertex list of the LHV+dit polytope.
inline std::vector<Behavior> strategy_behaviors(const Scenario& s, int d,
                                                const CommOptions& opt = {}) {
    std::vector<Behavior> out;
    for (const auto& c : enumerate_strategies(s, d, opt))
        out.push_back(strategy_behavior(c));
    return out;
}

/// Exact maximum of F over all LHV+dit strategies. For each Alice output map
/// and message map, Bob's best answer to (y, m) is chosen independently,
/// which is exact because the objective separates over Bob's table entries.
inline Rational lhvd_value(const BellFunctional& f, const Scenario& s, int d,
                           const CommOptions& opt = {}) {
    if (f.scenario() != s)
        throw ShapeError("functional scenario (" + f.scenario().to_string() +
                         ") does not match (" + s.to_string() + ")");
    if (d < 1)
        throw DomainError("strategy alphabet must be at least 1");
    double count = std::pow(double(s.A), s.X) * std::pow(double(d), s.X);
    if (count > double(opt.max_alice_strategies))
        throw GuardExceeded("lhvd_value: " + std::to_string(std::uint64_t(count)) +
                            " Alice strategies above the limit");
    auto scaled = detail::to_scaled_integers(f.values());
    if (!scaled)
        throw Overflow("functional coefficients do not fit 64-bit integers");
    const auto& w = scaled->first;
    const std::size_t bsz = static_cast<std::size_t>(s.B);
    std::vector<int> alice(s.X, 0), msg(s.X, 0);
    std::optional<std::int64_t> best;
    std::vector<std::int64_t> acc(static_cast<std::size_t>(s.Y) * d * bsz);
    std::vector<char> used(d);
    while (true) {
        std::fill(msg.begin(), msg.end(), 0);
        while (true) {
            std::fill(acc.begin(), acc.end(), 0);
            std::fill(used.begin(), used.end(), 0);
            for (int x = 0; x < s.X; ++x) {
                used[msg[x]] = 1;
                for (int y = 0; y < s.Y; ++y)
                    for (int b = 0; b < s.B; ++b)
                        acc[(static_cast<std::size_t>(y) * d + msg[x]) * bsz + b] +=
                            w[s.index(x, y, alice[x], b)];
            }
            std::int64_t total = 0;
            for (int y = 0; y < s.Y; ++y)
                for (int m = 0; m < d; ++m) {
                    if (!used[m])
                        continue;
                    const std::int64_t* row = &acc[(static_cast<std::size_t>(y) * d + m) * bsz];
                    total += *std::max_element(row, row + bsz);
                }
            if (!best || total > *best)
                best = total;
            int x = s.X - 1;
            while (x >= 0 && ++msg[x] == d)
                msg[x--] = 0;
            if (x < 0)
                break;
        }
        int x = s.X - 1;
        while (x >= 0 && ++alice[x] == s.A)
            alice[x--] = 0;
        if (x < 0)
            break;
    }
    Rational v{BigInt(static_cast<long>(*best)), scaled->second};
    v.canonicalize();
    return v;
}

/// The (m, m, 2, 2) box with p(ab|xy) = 1/2 iff a xor b = [x = y != 0].
inline Behavior diagonal_box(int m) {
    if (m < 2)
        throw DomainError("diagonal_box needs m >= 2");
    Behavior p(Scenario(m, m, 2, 2));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int a = 0; a < 2; ++a)
                p(x, y, a, a ^ int(x == y && x != 0)) = frac(1, 2);
    return p;
}

/// F = 4 diagonal_box(m) - 1: +1 where a + b = [x = y != 0] mod 2, else -1.
inline BellFunctional build_F(int m) {
    if (m < 2)
        throw DomainError("build_F needs m >= 2");
    BellFunctional f(Scenario(m, m, 2, 2));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    f(x, y, a, b) = ((a + b) % 2 == int(x == y && x != 0)) ? 1 : -1;
    return f;
}

/// Closed-form LHV+dit bound of F(m) for d <= m.
inline long F_bound(int m, int d) { return long(m) * m - 2L * (m - d); }

struct MinDitResult {
    /// Smallest d with b in LHV+dit, if found within the cap.
    std::optional<int> min_dit;
    /// Membership results for d = 1, 2, ... in order.
    std::vector<MembershipResult> per_d;

    /// The separating functional for d = min_dit - 1 (absent when min_dit is 1).
    [[nodiscard]] const MembershipResult* last_outside() const {
        for (auto it = per_d.rbegin(); it != per_d.rend(); ++it)
            if (!it->inside())
                return &*it;
        return nullptr;
    }
};

inline MinDitResult min_dit(const Behavior& b, int d_max, const CommOptions& opt = {}) {
    require_valid(b, "min_dit");
    MinDitResult r;
    for (int d = 1; d <= d_max; ++d) {
        auto res = membership(b, strategy_behaviors(b.scenario(), d, opt), opt.lp);
        bool inside = res.inside();
        r.per_d.push_back(std::move(res));
        if (inside) {
            r.min_dit = d;
            break;
        }
    }
    return r;
}

inline VisibilityResult comm_visibility_witness(const Behavior& b, int d,
                                                const CommOptions& opt = {}) {
    require_valid(b, "comm_visibility");
    return critical_visibility_witness(b, strategy_behaviors(b.scenario(), d, opt), opt.lp);
}

inline Rational comm_visibility(const Behavior& b, int d, const CommOptions& opt = {}) {
    return comm_visibility_witness(b, d, opt).visibility;
}

} // namespace ensbox
