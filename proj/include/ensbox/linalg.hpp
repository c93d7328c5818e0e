#pragma once

#include "rational.hpp"

#include <cstddef>
#include <vector>

namespace ensbox {

/// Dense row-major matrix over Q.
struct RationalMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> data;

    RationalMatrix() = default;
    RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    Rational factor;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m(sel, col) == 0)
            ++sel;
        if (sel == m.rows)
            continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m(sel, j), m(row, j));
        Rational inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols; ++j)
            if (m(row, j) != 0)
                m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m(i, col) == 0)
                continue;
            factor = m(i, col);
            for (std::size_t j = col; j < m.cols; ++j)
                if (m(row, j) != 0)
                    m(i, j) -= factor * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RationalMatrix m) { return rref(m).size(); }

/// Basis of {v : M v = 0}. Vector k sets the k-th free column to 1 and the
/// other free columns to 0, so the basis is deterministic.
inline std::vector<std::vector<Rational>> kernel_basis(RationalMatrix m) {
    auto pivots = rref(m);
    std::vector<char> is_pivot(m.cols, 0);
    for (auto c : pivots)
        is_pivot[c] = 1;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> v(m.cols);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction (gcd of entries 1).
inline std::vector<Rational> primitive_direction(const std::vector<Rational>& v) {
    BigInt l = lcm_of_denominators(v);
    BigInt g = 0;
    std::vector<BigInt> ints;
    ints.reserve(v.size());
    for (const auto& q : v) {
        ints.push_back(q.get_num() * (l / q.get_den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
    }
    std::vector<Rational> out;
    out.reserve(v.size());
    for (auto& n : ints)
        out.emplace_back(g == 0 ? BigInt(0) : BigInt(n / g));
    return out;
}

} // namespace ensbox
