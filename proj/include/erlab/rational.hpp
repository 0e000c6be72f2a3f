#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace erlab {

using Rational = mpq_class;
using BigCount = mpz_class;

// n/d in lowest terms; mpq_class(n, d) alone does not canonicalize.
inline Rational frac(long n, long d)
{
    if (d == 0) throw std::domain_error("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q", and plain decimals such as "0.89" or "-1e-3".
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Rational q(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
            if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
            q.canonicalize();
            return q;
        }
        std::string mant = s;
        long exp10 = 0;
        auto e = s.find_first_of("eE");
        if (e != std::string::npos) {
            mant = s.substr(0, e);
            exp10 = std::stol(s.substr(e + 1));
        }
        auto dot = mant.find('.');
        if (dot != std::string::npos) {
            exp10 -= static_cast<long>(mant.size() - dot - 1);
            mant.erase(dot, 1);
        }
        if (mant.empty() || mant == "-" || mant == "+") throw std::invalid_argument("bad number");
        if (mant.front() == '+') mant.erase(mant.begin());
        Rational q{mpz_class(mant)};
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        if (exp10 < 0) q /= p10;
        else q *= p10;
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

inline std::string to_string(const Rational& q)
{
    return q.get_str();
}

inline std::string to_string(const BigCount& z)
{
    return z.get_str();
}

inline BigCount ipow(const BigCount& base, unsigned long e)
{
    BigCount r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational qpow(const Rational& base, long e)
{
    Rational r;
    mpz_class n, d;
    unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), ue);
    if (e >= 0) r = Rational(n, d);
    else {
        if (n == 0) throw std::domain_error("zero to a negative power");
        r = Rational(d, n);
    }
    r.canonicalize();
    return r;
}

// 2^e for any integer e, exactly.
inline Rational pow2(long e)
{
    mpz_class one = 1;
    mpz_class p;
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
    if (e >= 0) return Rational(p);
    return Rational(one, p);
}

inline BigCount binom(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    BigCount r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline long binom_small(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    return binom(n, k).get_si();
}

} // namespace erlab
