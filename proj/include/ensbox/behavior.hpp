#pragma once

// Scenarios, behaviors and Bell functionals.
//
// Every table in the library uses one flat layout:
//
//     index(x, y, a, b) = ((x * Y + y) * A + a) * B + b
//
// so the (x, y) blocks are contiguous and, inside a block, Bob's output runs
// fastest. Serialization, canonical forms and event ordering all rely on it.

#include "errors.hpp"
#include "rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ensbox {

struct Scenario {
    int X = 2; ///< Alice inputs
    int Y = 2; ///< Bob inputs
    int A = 2; ///< Alice outputs
    int B = 2; ///< Bob outputs

    Scenario() = default;
    Scenario(int x, int y, int a, int b) : X(x), Y(y), A(a), B(b) {
        if (X < 2 || Y < 2 || A < 2 || B < 2)
            throw DomainError("scenario cardinalities must all be >= 2, got (" + to_string() + ")");
    }

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(X) * Y * A * B;
    }
    [[nodiscard]] std::size_t index(int x, int y, int a, int b) const {
        return ((static_cast<std::size_t>(x) * Y + y) * A + a) * B + b;
    }
    /// Scenario with the parties exchanged.
    [[nodiscard]] Scenario transposed() const { return {Y, X, B, A}; }
    [[nodiscard]] bool symmetric() const { return X == Y && A == B; }

    [[nodiscard]] std::string to_string() const {
        return std::to_string(X) + "," + std::to_string(Y) + "," + std::to_string(A) + "," +
               std::to_string(B);
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
    friend auto operator<=>(const Scenario&, const Scenario&) = default;
};

/// Flat index decomposed into its four coordinates.
struct EntryIndex {
    int x, y, a, b;
};

inline EntryIndex unflatten(const Scenario& s, std::size_t i) {
    EntryIndex e{};
    e.b = static_cast<int>(i % s.B);
    i /= s.B;
    e.a = static_cast<int>(i % s.A);
    i /= s.A;
    e.y = static_cast<int>(i % s.Y);
    e.x = static_cast<int>(i / s.Y);
    return e;
}

/// Affine dimension of the no-signaling polytope.
inline std::size_t ns_dimension(const Scenario& s) {
    return static_cast<std::size_t>(s.X) * s.Y * (s.A - 1) * (s.B - 1) +
           static_cast<std::size_t>(s.X) * (s.A - 1) + static_cast<std::size_t>(s.Y) * (s.B - 1);
}

/// A dense exact table over a scenario. Used both for behaviors p(ab|xy)
/// and for coefficient arrays of Bell functionals.
class Table {
  public:
    Table() = default;
    explicit Table(Scenario s) : scenario_(s), values_(s.size()) {}
    Table(Scenario s, std::vector<Rational> values) : scenario_(s), values_(std::move(values)) {
        if (values_.size() != scenario_.size())
            throw ShapeError("table has " + std::to_string(values_.size()) +
                             " entries, scenario (" + scenario_.to_string() + ") needs " +
                             std::to_string(scenario_.size()));
    }

    [[nodiscard]] const Scenario& scenario() const { return scenario_; }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }
    [[nodiscard]] std::vector<Rational>& values() { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    const Rational& operator[](std::size_t i) const { return values_[i]; }
    Rational& operator[](std::size_t i) { return values_[i]; }
    const Rational& operator()(int x, int y, int a, int b) const {
        return values_[scenario_.index(x, y, a, b)];
    }
    Rational& operator()(int x, int y, int a, int b) { return values_[scenario_.index(x, y, a, b)]; }

    friend bool operator==(const Table& l, const Table& r) {
        return l.scenario_ == r.scenario_ && l.values_ == r.values_;
    }
    friend bool operator<(const Table& l, const Table& r) {
        if (l.scenario_ != r.scenario_)
            return l.scenario_ < r.scenario_;
        return l.values_ < r.values_;
    }

  protected:
    Scenario scenario_;
    std::vector<Rational> values_;
};

/// Conditional probability table p(ab|xy). Construction only checks the
/// shape; use validate() for the polytope constraints.
class Behavior : public Table {
  public:
    using Table::Table;

    [[nodiscard]] std::size_t zero_count() const {
        std::size_t n = 0;
        for (const auto& v : values_)
            n += (v == 0);
        return n;
    }

    /// p(a|x), read from the y = 0 column.
    [[nodiscard]] Rational alice_marginal(int x, int a) const {
        Rational sum = 0;
        for (int b = 0; b < scenario_.B; ++b)
            sum += (*this)(x, 0, a, b);
        return sum;
    }
    /// p(b|y), read from the x = 0 row.
    [[nodiscard]] Rational bob_marginal(int y, int b) const {
        Rational sum = 0;
        for (int a = 0; a < scenario_.A; ++a)
            sum += (*this)(0, y, a, b);
        return sum;
    }
    /// All single-party marginals strictly positive.
    [[nodiscard]] bool full_output() const {
        for (int x = 0; x < scenario_.X; ++x)
            for (int a = 0; a < scenario_.A; ++a)
                if (alice_marginal(x, a) == 0)
                    return false;
        for (int y = 0; y < scenario_.Y; ++y)
            for (int b = 0; b < scenario_.B; ++b)
                if (bob_marginal(y, b) == 0)
                    return false;
        return true;
    }
};

/// Linear functional on tables of a scenario.
class BellFunctional : public Table {
  public:
    using Table::Table;

    [[nodiscard]] Rational value(const Table& t) const {
        if (t.scenario() != scenario_)
            throw ShapeError("functional scenario (" + scenario_.to_string() +
                             ") does not match table scenario (" + t.scenario().to_string() + ")");
        Rational sum = 0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] != 0 && t[i] != 0)
                sum += values_[i] * t[i];
        return sum;
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks positivity, normalization and no-signaling exactly, naming every
/// violated constraint.
inline ValidationReport validate(const Behavior& p) {
    const Scenario& s = p.scenario();
    if (p.size() != s.size())
        throw ShapeError("behavior table does not match its scenario");
    ValidationReport report;
    auto tag = [](int x, int y, int a, int b) {
        return "(a=" + std::to_string(a) + ",b=" + std::to_string(b) + "|x=" + std::to_string(x) +
               ",y=" + std::to_string(y) + ")";
    };
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    if (p(x, y, a, b) < 0)
                        report.violations.push_back("positivity p" + tag(x, y, a, b) + " = " +
                                                    format_rational(p(x, y, a, b)));
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y) {
            Rational sum = 0;
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    sum += p(x, y, a, b);
            if (sum != 1)
                report.violations.push_back("normalization (x=" + std::to_string(x) + ",y=" +
                                            std::to_string(y) + ") sums to " +
                                            format_rational(sum));
        }
    for (int x = 0; x < s.X; ++x)
        for (int a = 0; a < s.A; ++a) {
            auto marginal = [&](int y) {
                Rational m = 0;
                for (int b = 0; b < s.B; ++b)
                    m += p(x, y, a, b);
                return m;
            };
            Rational ref = marginal(0);
            for (int y = 1; y < s.Y; ++y)
                if (marginal(y) != ref)
                    report.violations.push_back(
                        "no-signaling Bob->Alice p(a=" + std::to_string(a) + "|x=" +
                        std::to_string(x) + ") differs between y=0 and y=" + std::to_string(y));
        }
    for (int y = 0; y < s.Y; ++y)
        for (int b = 0; b < s.B; ++b) {
            auto marginal = [&](int x) {
                Rational m = 0;
                for (int a = 0; a < s.A; ++a)
                    m += p(x, y, a, b);
                return m;
            };
            Rational ref = marginal(0);
            for (int x = 1; x < s.X; ++x)
                if (marginal(x) != ref)
                    report.violations.push_back(
                        "no-signaling Alice->Bob p(b=" + std::to_string(b) + "|y=" +
                        std::to_string(y) + ") differs between x=0 and x=" + std::to_string(x));
        }
    return report;
}

/// Throws DomainError unless validate(p) is ok.
inline void require_valid(const Behavior& p, const std::string& context) {
    auto report = validate(p);
    if (!report.ok())
        throw DomainError(context + ": invalid behavior: " + report.violations.front());
}

inline Behavior uniform_box(const Scenario& s) {
    return Behavior(s, std::vector<Rational>(s.size(), frac(1, s.A * s.B)));
}

/// Scenario becomes (Y, X, B, A) and p'(ba|yx) = p(ab|xy).
inline Behavior transpose_parties(const Behavior& p) {
    const Scenario& s = p.scenario();
    Scenario t = s.transposed();
    Behavior out(t);
    for (int x = 0; x < s.X; ++x)
        for (int y = 0; y < s.Y; ++y)
            for (int a = 0; a < s.A; ++a)
                for (int b = 0; b < s.B; ++b)
                    out(y, x, b, a) = p(x, y, a, b);
    return out;
}

inline BellFunctional transpose_parties(const BellFunctional& f) {
    Behavior tmp(f.scenario(), f.values());
    auto t = transpose_parties(tmp);
    return BellFunctional(t.scenario(), t.values());
}

/// Convex combination sum_i w_i p_i (weights are not checked).
inline Behavior mix(const std::vector<std::pair<Rational, Behavior>>& terms) {
    if (terms.empty())
        throw DomainError("mix of zero behaviors");
    const Scenario& s = terms.front().second.scenario();
    Behavior out(s);
    for (const auto& [w, p] : terms) {
        if (p.scenario() != s)
            throw ShapeError("mix over different scenarios");
        for (std::size_t i = 0; i < s.size(); ++i)
            out[i] += w * p[i];
    }
    return out;
}

/// Builds a behavior from a row-major block matrix as printed in the
/// literature: row x*A + a, column y*B + b, every entry scaled by 1/denominator.
inline Behavior behavior_from_block_matrix(const Scenario& s,
                                           const std::vector<std::vector<int>>& rows,
                                           int denominator) {
    if (rows.size() != static_cast<std::size_t>(s.X * s.A))
        throw ShapeError("block matrix has wrong row count");
    Behavior p(s);
    for (int x = 0; x < s.X; ++x)
        for (int a = 0; a < s.A; ++a) {
            const auto& row = rows[x * s.A + a];
            if (row.size() != static_cast<std::size_t>(s.Y * s.B))
                throw ShapeError("block matrix has wrong column count");
            for (int y = 0; y < s.Y; ++y)
                for (int b = 0; b < s.B; ++b)
                    p(x, y, a, b) = frac(row[y * s.B + b], denominator);
        }
    return p;
}

} // namespace ensbox
