#pragma once

#include "errors.hpp"

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace ensbox {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "num/den", "num" or "-num/den". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
    if (text.empty())
        throw ParseError("empty rational");
    std::size_t slash = std::string_view::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '/') {
            if (slash != std::string_view::npos)
                throw ParseError("bad rational '" + std::string(text) + "'");
            slash = i;
        } else if (c == '-' || c == '+') {
            if (i != 0)
                throw ParseError("bad rational '" + std::string(text) + "'");
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("bad rational '" + std::string(text) + "'");
        }
    }
    auto digits_ok = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        return !s.empty();
    };
    std::string num(text.substr(0, slash));
    if (!digits_ok(num))
        throw ParseError("bad rational '" + std::string(text) + "'");
    if (num.front() == '+')
        num.erase(0, 1);
    Rational q;
    if (slash == std::string_view::npos) {
        q = Rational(BigInt(num), 1);
    } else {
        std::string den(text.substr(slash + 1));
        if (den.empty() || den.front() == '-' || den.front() == '+')
            throw ParseError("bad rational '" + std::string(text) + "'");
        BigInt d(den);
        if (d == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        q = Rational(BigInt(num), d);
    }
    q.canonicalize();
    return q;
}

/// num/den in lowest terms. mpq_class(num, den) alone does not canonicalize.
inline Rational frac(long num, long den) {
    if (den == 0)
        throw DomainError("zero denominator");
    Rational q{BigInt(num), BigInt(den)};
    q.canonicalize();
    return q;
}

/// Canonical text form: "0", "1", "-3/4".
inline std::string format_rational(const Rational& q) { return q.get_str(); }

inline BigInt lcm_of_denominators(const std::vector<Rational>& values) {
    BigInt l = 1;
    for (const auto& v : values)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

} // namespace ensbox
