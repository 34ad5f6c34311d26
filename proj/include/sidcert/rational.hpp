#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sidcert {

using Rational = mpq_class;
using BigInt = mpz_class;

// Canonicalized fraction; mpq_class's two-argument constructor does not
// reduce on its own.
inline Rational rat(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Binomial coefficient with the convention C(n, k) = 0 for k > n.
inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

inline BigInt factorial(unsigned long n) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

inline Rational pow_rational(const Rational& base, unsigned long e) {
    Rational out(1);
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return out;
}

// Integer power v^e for possibly negative exponents, as a rational.
inline Rational pow_int(long v, long e) {
    if (v <= 0) throw std::invalid_argument("pow_int: base must be positive");
    Rational p(1);
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_ui_pow_ui(p.get_num_mpz_t(), static_cast<unsigned long>(v), a);
    if (e < 0) return Rational(1) / p;
    return p;
}

// Strict "p" or "p/q" with q > 0; reduced on parse.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad rational literal: " + s);
    bool slash_seen = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (slash_seen || j == i || j + 1 == s.size())
                throw std::invalid_argument("bad rational literal: " + s);
            slash_seen = true;
            continue;
        }
        if (s[j] < '0' || s[j] > '9')
            throw std::invalid_argument("bad rational literal: " + s);
    }
    Rational q(s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Lowest terms, "p" or "p/q" with q > 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

// log of a positive rational, accurate also for huge numerators/denominators.
inline double log_rational(const Rational& q) {
    if (sgn(q) <= 0) throw std::invalid_argument("log_rational: non-positive argument");
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    constexpr double ln2 = 0.6931471805599453;
    return std::log(mn) - std::log(md) + ln2 * static_cast<double>(en - ed);
}

// SplitMix64; used to derive independent per-task seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace sidcert
