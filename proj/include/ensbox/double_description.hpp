#pragma once

// Double description method for pointed polyhedral cones {y : M y >= 0}
// with integer M. Rays are kept as primitive integer vectors; arithmetic runs
// on checked 64-bit integers and restarts with GMP integers on overflow.

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

namespace ensbox {

struct DDOptions {
    /// Ceiling on the number of rays alive at any iteration.
    std::size_t max_rays = 2'000'000;
};

using IntRow = std::vector<long>;

namespace detail {

struct IntOverflow {};

inline std::int64_t dd_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw IntOverflow{};
    return r;
}
inline std::int64_t dd_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw IntOverflow{};
    return r;
}
inline std::int64_t dd_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw IntOverflow{};
    return r;
}
inline std::int64_t dd_gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline int dd_sign(std::int64_t a) { return (a > 0) - (a < 0); }
inline BigInt to_big(std::int64_t a) { return BigInt(static_cast<long>(a)); }

inline BigInt dd_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt dd_add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt dd_sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt dd_gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}
inline int dd_sign(const BigInt& a) { return sgn(a); }
inline BigInt to_big(const BigInt& a) { return a; }

template <std::size_t W>
struct Bits {
    std::array<std::uint64_t, W> w{};

    void set(std::size_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    [[nodiscard]] bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    [[nodiscard]] std::size_t count() const {
        std::size_t n = 0;
        for (auto x : w)
            n += std::popcount(x);
        return n;
    }
    [[nodiscard]] bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < W; ++i)
            if (w[i] & ~o.w[i])
                return false;
        return true;
    }
    friend Bits operator&(const Bits& a, const Bits& b) {
        Bits r;
        for (std::size_t i = 0; i < W; ++i)
            r.w[i] = a.w[i] & b.w[i];
        return r;
    }
    friend bool operator==(const Bits&, const Bits&) = default;
};

template <class Int, std::size_t W>
class DDSolver {
  public:
    DDSolver(const std::vector<IntRow>& m, std::size_t dim, const DDOptions& opt)
        : rows_(m), d_(dim), opt_(opt) {}

    std::vector<std::vector<BigInt>> run() {
        initialize();
        while (!remaining_.empty()) {
            std::size_t pick = choose_row();
            std::size_t row = remaining_[pick];
            remaining_.erase(remaining_.begin() + static_cast<std::ptrdiff_t>(pick));
            add_row(row);
        }
        std::vector<std::vector<BigInt>> out;
        out.reserve(rays_.size());
        for (const auto& r : rays_) {
            std::vector<BigInt> v;
            v.reserve(d_);
            for (const auto& x : r)
                v.push_back(to_big(x));
            out.push_back(std::move(v));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    Int dot(const IntRow& h, const std::vector<Int>& r) const {
        Int s = 0;
        for (std::size_t j = 0; j < d_; ++j)
            if (h[j] != 0)
                s = dd_add(s, dd_mul(Int(h[j]), r[j]));
        return s;
    }

    void normalize(std::vector<Int>& r) const {
        Int g = 0;
        for (const auto& x : r)
            g = dd_gcd(g, x);
        if (g > 1)
            for (auto& x : r)
                x /= g;
    }

    // Simplicial start: d linearly independent rows, rays = columns of the
    // inverse scaled to integers.
    void initialize() {
        const std::size_t m = rows_.size();
        std::vector<std::size_t> basis;
        {
            std::vector<std::vector<Rational>> echelon; // reduced rows found so far
            std::vector<std::size_t> pivots;
            for (std::size_t i = 0; i < m && basis.size() < d_; ++i) {
                std::vector<Rational> v(rows_[i].begin(), rows_[i].end());
                for (std::size_t k = 0; k < echelon.size(); ++k)
                    if (v[pivots[k]] != 0) {
                        Rational f = v[pivots[k]];
                        for (std::size_t j = 0; j < d_; ++j)
                            if (echelon[k][j] != 0)
                                v[j] -= f * echelon[k][j];
                    }
                std::size_t p = 0;
                while (p < d_ && v[p] == 0)
                    ++p;
                if (p == d_)
                    continue;
                Rational inv = 1 / v[p];
                for (auto& x : v)
                    x *= inv;
                echelon.push_back(std::move(v));
                pivots.push_back(p);
                basis.push_back(i);
            }
        }
        if (basis.size() < d_)
            throw DomainError("double description: cone is not pointed (rank " +
                              std::to_string(basis.size()) + " < " + std::to_string(d_) + ")");
        // Invert the basis submatrix: solve B r_k = e_k.
        RationalMatrix aug(d_, 2 * d_);
        for (std::size_t i = 0; i < d_; ++i) {
            for (std::size_t j = 0; j < d_; ++j)
                aug(i, j) = rows_[basis[i]][j];
            aug(i, d_ + i) = 1;
        }
        rref(aug);
        std::vector<char> in_basis(m, 0);
        for (auto b : basis)
            in_basis[b] = 1;
        for (std::size_t k = 0; k < d_; ++k) {
            std::vector<Rational> col(d_);
            for (std::size_t i = 0; i < d_; ++i)
                col[i] = aug(i, d_ + k);
            auto prim = primitive_direction(col);
            std::vector<Int> r;
            r.reserve(d_);
            for (const auto& q : prim) {
                BigInt n = q.get_num();
                if constexpr (std::is_same_v<Int, BigInt>) {
                    r.push_back(n);
                } else {
                    if (!n.fits_slong_p())
                        throw IntOverflow{};
                    r.push_back(n.get_si());
                }
            }
            rays_.push_back(std::move(r));
        }
        for (std::size_t k = 0; k < d_; ++k) {
            Bits<W> z;
            for (std::size_t i = 0; i < d_; ++i)
                if (i != k)
                    z.set(basis[i]);
            zeros_.push_back(z);
        }
        for (std::size_t i = 0; i < m; ++i)
            if (!in_basis[i])
                remaining_.push_back(i);
    }

    // Next constraint: the one creating the fewest candidate pairs.
    std::size_t choose_row() const {
        std::size_t best = 0;
        std::uint64_t best_cost = ~std::uint64_t(0);
        for (std::size_t k = 0; k < remaining_.size(); ++k) {
            const auto& h = rows_[remaining_[k]];
            std::uint64_t pos = 0, neg = 0;
            for (const auto& r : rays_) {
                int s = dd_sign(dot(h, r));
                pos += s > 0;
                neg += s < 0;
            }
            std::uint64_t cost = pos * neg;
            if (cost < best_cost) {
                best_cost = cost;
                best = k;
            }
        }
        return best;
    }

    void add_row(std::size_t row) {
        const auto& h = rows_[row];
        const std::size_t n = rays_.size();
        std::vector<Int> val(n);
        std::vector<std::size_t> pos, neg, zer;
        for (std::size_t i = 0; i < n; ++i) {
            val[i] = dot(h, rays_[i]);
            int s = dd_sign(val[i]);
            (s > 0 ? pos : s < 0 ? neg : zer).push_back(i);
        }
        if (neg.empty()) {
            for (auto i : zer)
                zeros_[i].set(row);
            return;
        }
        std::vector<std::vector<Int>> new_rays;
        std::vector<Bits<W>> new_zeros;
        const std::size_t need = d_ >= 2 ? d_ - 2 : 0;
        for (auto p : pos)
            for (auto q : neg) {
                Bits<W> common = zeros_[p] & zeros_[q];
                if (common.count() < need)
                    continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < n && adjacent; ++r)
                    if (r != p && r != q && common.subset_of(zeros_[r]))
                        adjacent = false;
                if (!adjacent)
                    continue;
                std::vector<Int> v(d_);
                for (std::size_t j = 0; j < d_; ++j)
                    v[j] = dd_sub(dd_mul(val[p], rays_[q][j]), dd_mul(val[q], rays_[p][j]));
                normalize(v);
                common.set(row);
                new_rays.push_back(std::move(v));
                new_zeros.push_back(common);
                if (pos.size() + zer.size() + new_rays.size() > opt_.max_rays)
                    throw GuardExceeded("double description: more than " +
                                        std::to_string(opt_.max_rays) + " rays");
            }
        std::vector<std::vector<Int>> rays;
        std::vector<Bits<W>> zeros;
        rays.reserve(pos.size() + zer.size() + new_rays.size());
        for (auto i : pos) {
            rays.push_back(std::move(rays_[i]));
            zeros.push_back(zeros_[i]);
        }
        for (auto i : zer) {
            rays.push_back(std::move(rays_[i]));
            zeros.push_back(zeros_[i]);
            zeros.back().set(row);
        }
        for (std::size_t k = 0; k < new_rays.size(); ++k) {
            rays.push_back(std::move(new_rays[k]));
            zeros.push_back(new_zeros[k]);
        }
        rays_ = std::move(rays);
        zeros_ = std::move(zeros);
    }

    const std::vector<IntRow>& rows_;
    std::size_t d_;
    DDOptions opt_;
    std::vector<std::vector<Int>> rays_;
    std::vector<Bits<W>> zeros_;
    std::vector<std::size_t> remaining_;
};

template <std::size_t W>
std::vector<std::vector<BigInt>> cone_rays_words(const std::vector<IntRow>& m, std::size_t d,
                                                 const DDOptions& opt) {
    try {
        return DDSolver<std::int64_t, W>(m, d, opt).run();
    } catch (const IntOverflow&) {
        return DDSolver<BigInt, W>(m, d, opt).run();
    }
}

} // namespace detail

/// Extreme rays of the pointed cone {y in Q^d : M y >= 0}, as primitive
/// integer vectors in lexicographic order. Throws DomainError when the cone
/// is not pointed (rank M < d) and GuardExceeded past opt.max_rays.
inline std::vector<std::vector<BigInt>> cone_extreme_rays(const std::vector<IntRow>& m,
                                                          std::size_t d,
                                                          const DDOptions& opt = {}) {
    for (const auto& r : m)
        if (r.size() != d)
            throw ShapeError("double description: row length differs from dimension");
    if (d == 0)
        return {};
    if (m.size() <= 64)
        return detail::cone_rays_words<1>(m, d, opt);
    if (m.size() <= 128)
        return detail::cone_rays_words<2>(m, d, opt);
    if (m.size() <= 256)
        return detail::cone_rays_words<4>(m, d, opt);
    if (m.size() <= 512)
        return detail::cone_rays_words<8>(m, d, opt);
    throw GuardExceeded("double description: more than 512 constraints");
}

} // namespace ensbox
