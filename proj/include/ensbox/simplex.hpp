#pragma once

// Exact rational simplex: maximize c.x subject to A x = b, x >= 0.
// Dense tableau, two phases with artificial variables, Bland's rule.
// Along with the primal solution it returns a dual vector y certifying the
// answer: for Optimal, y.A_j >= c_j for every column and y.b = value; for
// Infeasible, y.A_j >= 0 for every column and y.b < 0 (a Farkas certificate).

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ensbox {

struct LPOptions {
    /// Ceiling on rows * (columns + rows) of the tableau.
    std::size_t max_tableau_entries = 60'000'000;
    std::size_t max_pivots = 2'000'000;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> x;
    Rational value;
    std::vector<Rational> dual;
};

namespace detail {

class Tableau {
  public:
    Tableau(const RationalMatrix& a, const std::vector<Rational>& b, const LPOptions& opt)
        : m_(a.rows), n_(a.cols), opt_(opt) {
        if (m_ * (n_ + m_ + 1) > opt.max_tableau_entries)
            throw GuardExceeded("LP tableau of " + std::to_string(m_) + " x " +
                                std::to_string(n_ + m_) + " exceeds the size limit");
        sign_.assign(m_, 1);
        rows_.assign(m_, std::vector<Rational>(n_ + m_ + 1));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = b[i] < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j)
                if (a(i, j) != 0)
                    rows_[i][j] = sign_[i] * a(i, j);
            rows_[i][n_ + i] = 1;
            rows_[i][n_ + m_] = sign_[i] * b[i];
            basis_[i] = n_ + i;
        }
    }

    // Runs the simplex method on `cost` (length n + m), letting only columns
    // below `allowed` enter. Returns false when unbounded.
    bool optimize(const std::vector<Rational>& cost, std::size_t allowed) {
        std::vector<Rational> reduced = reduced_costs(cost);
        while (true) {
            std::size_t enter = allowed;
            for (std::size_t j = 0; j < allowed; ++j)
                if (reduced[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter == allowed)
                return true;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= 0)
                    continue;
                Rational ratio = rows_[i][n_ + m_] / rows_[i][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_)
                return false;
            pivot(leave, enter, &reduced);
        }
    }

    [[nodiscard]] Rational objective(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (cost[basis_[i]] != 0)
                v += cost[basis_[i]] * rows_[i][n_ + m_];
        return v;
    }

    // y = D * (c_B^T B^{-1}); B^{-1} sits in the artificial columns.
    [[nodiscard]] std::vector<Rational> dual(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            Rational s = 0;
            for (std::size_t k = 0; k < m_; ++k)
                if (cost[basis_[k]] != 0 && rows_[k][n_ + i] != 0)
                    s += cost[basis_[k]] * rows_[k][n_ + i];
            y[i] = sign_[i] * s;
        }
        return y;
    }

    // Pivots basic artificials out wherever a structural column allows it.
    // Rows where none does are redundant and keep their artificial at zero.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_)
                continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (rows_[i][j] != 0) {
                    pivot(i, j, nullptr);
                    break;
                }
        }
    }

    [[nodiscard]] std::vector<Rational> primal() const {
        std::vector<Rational> x(n_);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_)
                x[basis_[i]] = rows_[i][n_ + m_];
        return x;
    }

  private:
    std::vector<Rational> reduced_costs(const std::vector<Rational>& cost) const {
        std::vector<Rational> r(cost.begin(), cost.end());
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational& cb = cost[basis_[i]];
            if (cb == 0)
                continue;
            for (std::size_t j = 0; j < n_ + m_; ++j)
                if (rows_[i][j] != 0)
                    r[j] -= cb * rows_[i][j];
        }
        return r;
    }

    void pivot(std::size_t r, std::size_t c, std::vector<Rational>* reduced) {
        if (++pivots_ > opt_.max_pivots)
            throw GuardExceeded("LP exceeded " + std::to_string(opt_.max_pivots) + " pivots");
        auto& prow = rows_[r];
        Rational inv = 1 / prow[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= n_ + m_; ++j)
            if (prow[j] != 0) {
                prow[j] *= inv;
                nz.push_back(j);
            }
        Rational f;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][c] == 0)
                continue;
            f = rows_[i][c];
            for (auto j : nz)
                rows_[i][j] -= f * prow[j];
        }
        if (reduced && (*reduced)[c] != 0) {
            f = (*reduced)[c];
            for (auto j : nz)
                if (j < n_ + m_)
                    (*reduced)[j] -= f * prow[j];
        }
        basis_[r] = c;
    }

    std::size_t m_, n_;
    LPOptions opt_;
    std::vector<int> sign_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
};

} // namespace detail

inline LPSolution solve_lp(const RationalMatrix& a, const std::vector<Rational>& b,
                           const std::vector<Rational>& c, const LPOptions& opt = {}) {
    if (b.size() != a.rows || c.size() != a.cols)
        throw ShapeError("solve_lp: dimensions of A, b and c disagree");
    const std::size_t m = a.rows, n = a.cols;
    detail::Tableau t(a, b, opt);

    std::vector<Rational> phase1(n + m);
    for (std::size_t i = 0; i < m; ++i)
        phase1[n + i] = -1;
    t.optimize(phase1, n);
    LPSolution sol;
    if (t.objective(phase1) < 0) {
        sol.status = LPStatus::Infeasible;
        sol.dual = t.dual(phase1);
        return sol;
    }
    t.expel_artificials();
    std::vector<Rational> phase2(n + m);
    for (std::size_t j = 0; j < n; ++j)
        phase2[j] = c[j];
    if (!t.optimize(phase2, n)) {
        sol.status = LPStatus::Unbounded;
        sol.x = t.primal();
        return sol;
    }
    sol.status = LPStatus::Optimal;
    sol.x = t.primal();
    sol.value = t.objective(phase2);
    sol.dual = t.dual(phase2);
    return sol;
}

} // namespace ensbox
