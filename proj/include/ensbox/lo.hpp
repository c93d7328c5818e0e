#pragma once

// Local orthogonality: exclusivity graphs of k independent copies of a
// behavior, violation search and exact maximum-weight cliques.
//
// Event strings list outputs then inputs, copy by copy:
//     "a1 b1 a2 b2|x1 y1 x2 y2"   (without spaces, one digit each)

#include "behavior.hpp"
#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ensbox {

struct CopyEvent {
    int a = 0, b = 0, x = 0, y = 0;
    friend auto operator<=>(const CopyEvent&, const CopyEvent&) = default;
};

struct JointEvent {
    std::vector<CopyEvent> copies;
    Rational weight; ///< product of p(a b|x y) over the copies

    [[nodiscard]] std::size_t k() const { return copies.size(); }
};

/// Two events are locally orthogonal when, in some copy, one party has the
/// same input and a different output.
inline bool locally_orthogonal(const JointEvent& e, const JointEvent& f) {
    for (std::size_t c = 0; c < e.copies.size() && c < f.copies.size(); ++c) {
        const auto& u = e.copies[c];
        const auto& v = f.copies[c];
        if ((u.x == v.x && u.a != v.a) || (u.y == v.y && u.b != v.b))
            return true;
    }
    return false;
}

inline Rational event_weight(const Behavior& p, const JointEvent& e) {
    Rational w = 1;
    for (const auto& c : e.copies)
        w *= p(c.x, c.y, c.a, c.b);
    return w;
}

struct LOOptions {
    /// Largest copy count accepted without raising the limit explicitly.
    int max_copies = 2;
    std::size_t max_graph_vertices = 20'000;
    /// Branch-and-bound node budget; past it the search stops and reports
    /// the best clique found without an optimality proof.
    std::uint64_t max_search_nodes = 200'000'000;
};

class ExclusivityGraph {
  public:
    ExclusivityGraph() = default;
    ExclusivityGraph(Scenario s, int k, std::vector<JointEvent> vertices)
        : scenario_(s), k_(k), vertices_(std::move(vertices)) {
        const std::size_t n = vertices_.size();
        words_ = (n + 63) / 64;
        adj_.assign(n * words_, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (locally_orthogonal(vertices_[i], vertices_[j])) {
                    adj_[i * words_ + j / 64] |= std::uint64_t(1) << (j % 64);
                    adj_[j * words_ + i / 64] |= std::uint64_t(1) << (i % 64);
                }
    }

    [[nodiscard]] const Scenario& scenario() const { return scenario_; }
    [[nodiscard]] int copies() const { return k_; }
    [[nodiscard]] std::size_t size() const { return vertices_.size(); }
    [[nodiscard]] const std::vector<JointEvent>& vertices() const { return vertices_; }
    [[nodiscard]] const JointEvent& vertex(std::size_t i) const { return vertices_[i]; }
    [[nodiscard]] bool adjacent(std::size_t i, std::size_t j) const {
        return (adj_[i * words_ + j / 64] >> (j % 64)) & 1;
    }
    [[nodiscard]] const std::uint64_t* row(std::size_t i) const { return &adj_[i * words_]; }
    [[nodiscard]] std::size_t words() const { return words_; }

    /// Index of the vertex with these copies, if the event has positive weight.
    [[nodiscard]] std::optional<std::size_t> find(const std::vector<CopyEvent>& copies) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), copies,
                                   [&](const JointEvent& e, const std::vector<CopyEvent>& c) {
                                       return key(e.copies) < key(c);
                                   });
        if (it != vertices_.end() && it->copies == copies)
            return static_cast<std::size_t>(it - vertices_.begin());
        return std::nullopt;
    }

  private:
    // Vertices are ordered by the flat indices of their copies.
    [[nodiscard]] std::vector<std::size_t> key(const std::vector<CopyEvent>& c) const {
        std::vector<std::size_t> out;
        out.reserve(c.size());
        for (const auto& e : c)
            out.push_back(scenario_.index(e.x, e.y, e.a, e.b));
        return out;
    }

    Scenario scenario_;
    int k_ = 1;
    std::vector<JointEvent> vertices_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> adj_;
};

/// Graph on all positive-weight events of k copies of p, ordered by the flat
/// indices of the copies (first copy slowest).
inline ExclusivityGraph build_exclusivity_graph(const Behavior& p, int k,
                                                const LOOptions& opt = {}) {
    require_valid(p, "build_exclusivity_graph");
    if (k < 1)
        throw DomainError("copy count must be at least 1");
    if (k > opt.max_copies)
        throw GuardExceeded("copy count " + std::to_string(k) + " above the limit " +
                            std::to_string(opt.max_copies));
    const Scenario& s = p.scenario();
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0)
            support.push_back(i);
    double count = 1;
    for (int c = 0; c < k; ++c)
        count *= double(support.size());
    if (count > double(opt.max_graph_vertices))
        throw GuardExceeded("exclusivity graph would have " + std::to_string(std::uint64_t(count)) +
                            " vertices, above the limit " +
                            std::to_string(opt.max_graph_vertices));
    std::vector<JointEvent> vertices;
    std::vector<std::size_t> pos(k, 0);
    while (true) {
        JointEvent e;
        e.weight = 1;
        for (int c = 0; c < k; ++c) {
            auto u = unflatten(s, support[pos[c]]);
            e.copies.push_back({u.a, u.b, u.x, u.y});
            e.weight *= p[support[pos[c]]];
        }
        vertices.push_back(std::move(e));
        int c = k - 1;
        while (c >= 0 && ++pos[c] == support.size())
            pos[c--] = 0;
        if (c < 0)
            break;
    }
    return ExclusivityGraph(s, k, std::move(vertices));
}

struct CliqueWitness {
    std::vector<JointEvent> events;
    std::vector<std::size_t> indices; ///< graph vertex indices, increasing
    Rational total_weight;

    [[nodiscard]] bool violates() const { return total_weight > 1; }
};

/// Checks that the events are pairwise locally orthogonal vertices of g and
/// sums their weights. Throws DomainError naming the first offending pair.
inline CliqueWitness verify_clique(const ExclusivityGraph& g, const std::vector<JointEvent>& events);

struct CliqueSearchResult {
    /// Lexicographically least (by vertex index) clique of maximum weight.
    CliqueWitness best;
    Rational max_weight;
    /// False when the node budget ran out; best is then only a lower bound.
    bool proven_optimal = true;
    std::uint64_t nodes = 0;

    /// The witness when it violates LO (total weight > 1).
    [[nodiscard]] std::optional<CliqueWitness> violation() const {
        if (best.violates())
            return best;
        return std::nullopt;
    }
};

namespace detail {

class CliqueSearch {
  public:
    using Set = std::vector<std::uint64_t>;

    CliqueSearch(const ExclusivityGraph& g, const LOOptions& opt) : g_(g), opt_(opt) {
        std::vector<Rational> ws;
        for (const auto& v : g.vertices())
            ws.push_back(v.weight);
        BigInt l = lcm_of_denominators(ws);
        scale_ = l;
        for (const auto& w : ws) {
            BigInt n = w.get_num() * (l / w.get_den());
            if (!n.fits_slong_p())
                throw Overflow("clique weights do not fit 64-bit integers");
            weight_.push_back(n.get_si());
        }
        // Heaviest first, ties by index: the coloring order of phase 1.
        by_weight_.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            by_weight_[i] = i;
        std::stable_sort(by_weight_.begin(), by_weight_.end(),
                         [&](std::size_t a, std::size_t b) { return weight_[a] > weight_[b]; });
    }

    // Scaled weight strictly above the threshold 1.
    [[nodiscard]] std::int64_t above_one() const {
        if (!scale_.fits_slong_p() || scale_.get_si() == INT64_MAX)
            throw Overflow("clique weights do not fit 64-bit integers");
        return scale_.get_si() + 1;
    }

    [[nodiscard]] bool aborted() const { return aborted_; }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

    CliqueWitness witness(const std::vector<std::size_t>& indices) const {
        CliqueWitness w;
        w.indices = indices;
        w.total_weight = 0;
        for (auto i : indices) {
            w.events.push_back(g_.vertex(i));
            w.total_weight += g_.vertex(i).weight;
        }
        return w;
    }

    CliqueSearchResult run() {
        const Set everything = all();

        // Phase 1: maximum weight.
        maximize(everything, 0);
        std::int64_t target = best_weight_;
        std::vector<std::size_t> fallback = best_;

        // Phase 2: lexicographically least clique reaching that weight.
        best_.clear();
        if (!aborted_ && target > 0) {
            current_.clear();
            found_ = false;
            least(everything, 0, target);
            if (!found_ && !aborted_)
                throw Error("clique search: phase 2 missed the phase 1 optimum");
        }
        if (aborted_ || best_.empty())
            best_ = fallback;

        CliqueSearchResult r;
        r.proven_optimal = !aborted_;
        r.nodes = nodes_;
        r.best = witness(best_);
        r.max_weight = r.best.total_weight;
        return r;
    }

  private:
    [[nodiscard]] Set all() const {
        Set s(g_.words(), 0);
        for (std::size_t i = 0; i < g_.size(); ++i)
            s[i / 64] |= std::uint64_t(1) << (i % 64);
        return s;
    }

    bool tick() {
        if (++nodes_ > opt_.max_search_nodes)
            aborted_ = true;
        return !aborted_;
    }

    [[nodiscard]] bool contains(const Set& s, std::size_t v) const {
        return (s[v / 64] >> (v % 64)) & 1;
    }

    // Sequential greedy coloring of cand in by_weight_ order. Fills order
    // with the vertices class by class and bound[i] with the sum of the
    // heaviest weights of classes up to the class of order[i].
    void color(const Set& cand, std::vector<std::size_t>& order,
               std::vector<std::int64_t>& bound) const {
        order.clear();
        bound.clear();
        std::vector<std::size_t> left;
        for (auto v : by_weight_)
            if (contains(cand, v))
                left.push_back(v);
        std::int64_t total = 0;
        std::vector<std::size_t> klass, rest;
        while (!left.empty()) {
            klass.clear();
            rest.clear();
            for (auto v : left) {
                bool free = true;
                for (auto u : klass)
                    if (g_.adjacent(u, v)) {
                        free = false;
                        break;
                    }
                (free ? klass : rest).push_back(v);
            }
            // klass is nonempty; its first member is the heaviest.
            total += weight_[klass.front()];
            for (auto v : klass) {
                order.push_back(v);
                bound.push_back(total);
            }
            left.swap(rest);
        }
    }

    void maximize(const Set& cand, std::int64_t weight) {
        if (!tick())
            return;
        if (weight > best_weight_) {
            best_weight_ = weight;
            best_ = current_;
        }
        std::vector<std::size_t> order;
        std::vector<std::int64_t> bound;
        color(cand, order, bound);
        Set remaining = cand;
        Set next(cand.size());
        for (std::size_t i = order.size(); i-- > 0;) {
            if (weight + bound[i] <= best_weight_)
                return;
            std::size_t v = order[i];
            const std::uint64_t* row = g_.row(v);
            for (std::size_t j = 0; j < next.size(); ++j)
                next[j] = remaining[j] & row[j];
            current_.push_back(v);
            maximize(next, weight + weight_[v]);
            current_.pop_back();
            if (aborted_)
                return;
            remaining[v / 64] &= ~(std::uint64_t(1) << (v % 64));
        }
    }

    // Like maximize, but stops at the first clique reaching target.
    void reach(const Set& cand, std::int64_t weight, std::int64_t target) {
        if (!tick())
            return;
        if (weight >= target) {
            best_ = current_;
            found_ = true;
            return;
        }
        std::vector<std::size_t> order;
        std::vector<std::int64_t> bound;
        color(cand, order, bound);
        Set remaining = cand;
        Set next(cand.size());
        for (std::size_t i = order.size(); i-- > 0;) {
            if (weight + bound[i] < target)
                return;
            std::size_t v = order[i];
            const std::uint64_t* row = g_.row(v);
            for (std::size_t j = 0; j < next.size(); ++j)
                next[j] = remaining[j] & row[j];
            current_.push_back(v);
            reach(next, weight + weight_[v], target);
            current_.pop_back();
            if (found_ || aborted_)
                return;
            remaining[v / 64] &= ~(std::uint64_t(1) << (v % 64));
        }
    }

  public:
    // First clique reaching target in the coloring order, sorted by index.
    std::optional<std::vector<std::size_t>> heavy_first(std::int64_t target) {
        current_.clear();
        best_.clear();
        found_ = false;
        reach(all(), 0, target);
        if (found_) {
            std::sort(best_.begin(), best_.end());
            return best_;
        }
        return std::nullopt;
    }

  private:
    [[nodiscard]] std::int64_t color_bound(const Set& cand) const {
        std::vector<std::size_t> order;
        std::vector<std::int64_t> bound;
        color(cand, order, bound);
        return bound.empty() ? 0 : bound.back();
    }

    // Depth-first in increasing vertex index; the first clique of weight
    // >= target found this way is the lexicographically least one.
    void least(const Set& cand, std::int64_t weight, std::int64_t target) {
        if (!tick())
            return;
        if (weight >= target) {
            best_ = current_;
            found_ = true;
            return;
        }
        if (weight + color_bound(cand) < target)
            return;
        Set remaining = cand;
        Set next(cand.size());
        for (std::size_t k = 0; k < remaining.size(); ++k)
            while (remaining[k]) {
                std::size_t v = k * 64 + static_cast<std::size_t>(std::countr_zero(remaining[k]));
                remaining[k] &= remaining[k] - 1;
                const std::uint64_t* row = g_.row(v);
                for (std::size_t j = 0; j < next.size(); ++j)
                    next[j] = remaining[j] & row[j];
                current_.push_back(v);
                least(next, weight + weight_[v], target);
                current_.pop_back();
                if (found_ || aborted_)
                    return;
                if (weight + color_bound(remaining) < target)
                    return;
            }
    }

    const ExclusivityGraph& g_;
    LOOptions opt_;
    BigInt scale_;
    std::vector<std::int64_t> weight_;
    std::vector<std::size_t> by_weight_;
    std::vector<std::size_t> current_, best_;
    std::int64_t best_weight_ = 0;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    bool found_ = false;
};

} // namespace detail

/// Exact maximum-weight clique. Phase 1 finds the optimum by branch and bound
/// with weighted coloring bounds; phase 2 returns the lexicographically least
/// clique (by vertex index) reaching it, so the answer does not depend on the
/// search order.
inline CliqueSearchResult max_weight_clique(const ExclusivityGraph& g, const LOOptions& opt = {}) {
    return detail::CliqueSearch(g, opt).run();
}

struct ViolationSearchResult {
    /// A clique of weight > 1, indices increasing.
    std::optional<CliqueWitness> witness;
    /// Exact maximum clique weight, filled in when there is no witness.
    std::optional<Rational> max_weight;
    /// False when the node budget ran out before the search settled.
    bool complete = true;
    std::uint64_t nodes = 0;
};

/// Looks for an LO violation: a clique of total weight > 1. Branches heaviest
/// color class first and stops at the first hit, so the witness depends only
/// on the graph's vertex order. When no violation exists the exact maximum
/// weight is reported instead.
inline ViolationSearchResult find_violating_clique(const ExclusivityGraph& g,
                                                   const LOOptions& opt = {}) {
    ViolationSearchResult r;
    detail::CliqueSearch search(g, opt);
    auto hit = search.heavy_first(search.above_one());
    if (hit) {
        r.witness = search.witness(*hit);
        r.nodes = search.nodes();
        return r;
    }
    if (search.aborted()) {
        r.complete = false;
        r.nodes = search.nodes();
        return r;
    }
    auto best = max_weight_clique(g, opt);
    r.complete = best.proven_optimal;
    r.nodes = search.nodes() + best.nodes;
    if (best.proven_optimal)
        r.max_weight = best.max_weight;
    return r;
}

// --- Event strings ---------------------------------------------------------------

inline std::string format_event(const JointEvent& e) {
    std::string out;
    for (const auto& c : e.copies) {
        out += static_cast<char>('0' + c.a);
        out += static_cast<char>('0' + c.b);
    }
    out += '|';
    for (const auto& c : e.copies) {
        out += static_cast<char>('0' + c.x);
        out += static_cast<char>('0' + c.y);
    }
    return out;
}

/// Parses "a1 b1 ... ak bk|x1 y1 ... xk yk" (digits only). The weight is left
/// at zero; see event_weight().
inline JointEvent parse_event(const std::string& s, const Scenario& sc, int k) {
    if (k < 1)
        throw ParseError("copy count must be at least 1");
    const std::size_t half = static_cast<std::size_t>(2 * k);
    if (s.size() != 2 * half + 1 || s[half] != '|')
        throw ParseError("event \"" + s + "\" is not of the form " + std::string(half, 'd') + "|" +
                         std::string(half, 'd'));
    auto digit = [&](std::size_t pos, int bound, const char* what) {
        char ch = s[pos];
        if (ch < '0' || ch > '9')
            throw ParseError("event \"" + s + "\": '" + std::string(1, ch) + "' is not a digit");
        int v = ch - '0';
        if (v >= bound)
            throw ParseError("event \"" + s + "\": " + what + " = " + std::to_string(v) +
                             " out of range");
        return v;
    };
    JointEvent e;
    for (int c = 0; c < k; ++c) {
        CopyEvent ce;
        ce.a = digit(2 * c, sc.A, "a");
        ce.b = digit(2 * c + 1, sc.B, "b");
        ce.x = digit(half + 1 + 2 * c, sc.X, "x");
        ce.y = digit(half + 2 + 2 * c, sc.Y, "y");
        e.copies.push_back(ce);
    }
    return e;
}

inline CliqueWitness verify_clique(const ExclusivityGraph& g, const std::vector<JointEvent>& events) {
    CliqueWitness w;
    w.total_weight = 0;
    for (const auto& e : events) {
        if (e.k() != static_cast<std::size_t>(g.copies()))
            throw DomainError("event " + format_event(e) + " has the wrong copy count");
        auto idx = g.find(e.copies);
        if (!idx)
            throw DomainError("event " + format_event(e) + " has zero probability");
        w.indices.push_back(*idx);
    }
    for (std::size_t i = 0; i < w.indices.size(); ++i)
        for (std::size_t j = i + 1; j < w.indices.size(); ++j)
            if (w.indices[i] == w.indices[j] || !g.adjacent(w.indices[i], w.indices[j]))
                throw DomainError("events " + format_event(events[i]) + " and " +
                                  format_event(events[j]) + " are not locally orthogonal");
    for (auto i : w.indices) {
        w.events.push_back(g.vertex(i));
        w.total_weight += g.vertex(i).weight;
    }
    return w;
}

// --- Weight-class profile for supports with weights 1/4, 1/16, 1/8 ---------------

struct CliqueProfile {
    int x = 0; ///< events of weight 1/4
    int y = 0; ///< events of weight 1/16
    int z = 0; ///< events of weight 1/8

    /// x/4 + y/16 + z/8 > 1, in integer form.
    [[nodiscard]] bool violation() const { return 4 * x + y + 2 * z > 16; }
};

inline CliqueProfile clique_condition_profile(const CliqueWitness& clique) {
    CliqueProfile p;
    for (const auto& e : clique.events) {
        if (e.weight == frac(1, 4))
            ++p.x;
        else if (e.weight == frac(1, 16))
            ++p.y;
        else if (e.weight == frac(1, 8))
            ++p.z;
        else
            throw DomainError("event " + format_event(e) + " has weight " +
                              format_rational(e.weight) + ", not 1/4, 1/16 or 1/8");
    }
    return p;
}

inline CliqueProfile clique_condition_profile(const ExclusivityGraph& g,
                                              const CliqueWitness& clique) {
    return clique_condition_profile(verify_clique(g, clique.events));
}

} // namespace ensbox
