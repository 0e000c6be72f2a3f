#pragma once

#include "erlab/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace erlab {

// c0 + sum_p coeffs[p] * log2(p) over odd primes p; canonical (no zero coefficients).
class LogLinear {
public:
    LogLinear() = default;
    LogLinear(const Rational& c) : c0_(c) {}
    LogLinear(long c) : c0_(c) {}

    static LogLinear log2_of(const Rational& x);
    static LogLinear log2_of(long x) { return log2_of(Rational(x)); }

    const Rational& constant() const { return c0_; }
    const std::map<unsigned long, Rational>& coeffs() const { return coeffs_; }
    Rational coeff(unsigned long p) const
    {
        auto it = coeffs_.find(p);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }
    bool is_rational() const { return coeffs_.empty(); }

    LogLinear& operator+=(const LogLinear& o)
    {
        c0_ += o.c0_;
        for (const auto& [p, c] : o.coeffs_) add_term(p, c);
        return *this;
    }
    LogLinear& operator-=(const LogLinear& o)
    {
        c0_ -= o.c0_;
        for (const auto& [p, c] : o.coeffs_) add_term(p, -c);
        return *this;
    }
    LogLinear& operator*=(const Rational& r)
    {
        if (r == 0) {
            c0_ = 0;
            coeffs_.clear();
            return *this;
        }
        c0_ *= r;
        for (auto& [p, c] : coeffs_) c *= r;
        return *this;
    }
    LogLinear& operator/=(const Rational& r)
    {
        if (r == 0) throw std::domain_error("division by zero");
        return *this *= Rational(1) / r;
    }
    friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
    friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
    friend LogLinear operator-(LogLinear a)
    {
        a *= Rational(-1);
        return a;
    }
    friend LogLinear operator*(LogLinear a, const Rational& r) { return a *= r; }
    friend LogLinear operator*(const Rational& r, LogLinear a) { return a *= r; }
    friend LogLinear operator/(LogLinear a, const Rational& r) { return a /= r; }

    friend bool operator==(const LogLinear& a, const LogLinear& b)
    {
        return a.c0_ == b.c0_ && a.coeffs_ == b.coeffs_;
    }

    double to_double() const
    {
        double v = c0_.get_d();
        for (const auto& [p, c] : coeffs_) v += c.get_d() * std::log2(static_cast<double>(p));
        return v;
    }

    std::string str() const;

private:
    void add_term(unsigned long p, const Rational& c)
    {
        if (c == 0) return;
        auto& slot = coeffs_[p];
        slot += c;
        if (slot == 0) coeffs_.erase(p);
    }
    Rational c0_ = 0;
    std::map<unsigned long, Rational> coeffs_;
};

namespace detail {

inline std::map<unsigned long, long> factor_ul(unsigned long n)
{
    std::map<unsigned long, long> out;
    for (unsigned long p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    if (n > 1) ++out[n];
    return out;
}

} // namespace detail

inline LogLinear LogLinear::log2_of(const Rational& x)
{
    if (x <= 0) throw std::domain_error("log2 of a non-positive number");
    if (!x.get_num().fits_ulong_p() || !x.get_den().fits_ulong_p())
        throw std::domain_error("log2 argument too large to factor");
    LogLinear r;
    for (auto [p, e] : detail::factor_ul(x.get_num().get_ui())) {
        if (p == 2) r.c0_ += e;
        else r.add_term(p, Rational(e));
    }
    for (auto [p, e] : detail::factor_ul(x.get_den().get_ui())) {
        if (p == 2) r.c0_ -= e;
        else r.add_term(p, Rational(-e));
    }
    return r;
}

inline std::string LogLinear::str() const
{
    std::string out;
    if (c0_ != 0 || coeffs_.empty()) out = c0_.get_str();
    for (const auto& [p, c] : coeffs_) {
        Rational a = abs(c);
        std::string term = (a == 1 ? std::string() : a.get_str() + "*") + "log2(" + std::to_string(p) + ")";
        if (out.empty()) out = (c < 0 ? "-" : "") + term;
        else out += (c < 0 ? "-" : "+") + term;
    }
    return out;
}

namespace detail {

class MpfrInterval {
public:
    explicit MpfrInterval(mpfr_prec_t prec)
    {
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
    }
    ~MpfrInterval()
    {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
    MpfrInterval(const MpfrInterval&) = delete;
    MpfrInterval& operator=(const MpfrInterval&) = delete;
    mpfr_t lo, hi;
};

// Sign of x by interval evaluation at the given binary precision: -1, 0 (undecided), +1.
inline int interval_sign(const LogLinear& x, mpfr_prec_t prec)
{
    MpfrInterval acc(prec);
    mpfr_set_q(acc.lo, x.constant().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(acc.hi, x.constant().get_mpq_t(), MPFR_RNDU);
    mpfr_t lg_lo, lg_hi, t;
    mpfr_inits2(prec, lg_lo, lg_hi, t, static_cast<mpfr_ptr>(nullptr));
    for (const auto& [p, c] : x.coeffs()) {
        mpfr_set_ui(t, p, MPFR_RNDN); // exact for p < 2^prec
        mpfr_log2(lg_lo, t, MPFR_RNDD);
        mpfr_log2(lg_hi, t, MPFR_RNDU);
        if (c > 0) {
            mpfr_mul_q(t, lg_lo, c.get_mpq_t(), MPFR_RNDD);
            mpfr_add(acc.lo, acc.lo, t, MPFR_RNDD);
            mpfr_mul_q(t, lg_hi, c.get_mpq_t(), MPFR_RNDU);
            mpfr_add(acc.hi, acc.hi, t, MPFR_RNDU);
        } else {
            mpfr_mul_q(t, lg_hi, c.get_mpq_t(), MPFR_RNDD);
            mpfr_add(acc.lo, acc.lo, t, MPFR_RNDD);
            mpfr_mul_q(t, lg_lo, c.get_mpq_t(), MPFR_RNDU);
            mpfr_add(acc.hi, acc.hi, t, MPFR_RNDU);
        }
    }
    mpfr_clears(lg_lo, lg_hi, t, static_cast<mpfr_ptr>(nullptr));
    if (mpfr_sgn(acc.lo) > 0) return 1;
    if (mpfr_sgn(acc.hi) < 0) return -1;
    return 0;
}

inline mpfr_prec_t digits_to_bits(int digits)
{
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

} // namespace detail

class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Logarithms of distinct primes are rationally independent, so x = 0 iff its canonical form is 0.
inline int loglin_sign(const LogLinear& x)
{
    if (x.is_rational()) return sgn(x.constant());
    for (int digits : {50, 200}) {
        int s = detail::interval_sign(x, detail::digits_to_bits(digits));
        if (s) return s;
    }
    throw PrecisionExhausted("log-linear sign undecided at 200 digits: " + x.str());
}

// Returns -1, 0, +1 for x <, =, > y.
inline int loglin_compare(const LogLinear& x, const LogLinear& y)
{
    return loglin_sign(x - y);
}

// Grammar: expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
// factor := ['-'] (number | 'log2(' expr ')' | '(' expr ')'). Products allow at most one log factor.
class LogLinearParser {
public:
    explicit LogLinearParser(std::string_view text) : s_(text) {}

    LogLinear parse()
    {
        LogLinear v = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) const
    {
        throw std::invalid_argument("log-linear literal '" + std::string(s_) + "': " + why);
    }
    LogLinear expr()
    {
        LogLinear v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    LogLinear term()
    {
        LogLinear v = factor();
        for (;;) {
            if (eat('*')) {
                LogLinear w = factor();
                if (v.is_rational()) v = w * v.constant();
                else if (w.is_rational()) v *= w.constant();
                else fail("product of two logarithms");
            } else if (eat('/')) {
                LogLinear w = factor();
                if (!w.is_rational()) fail("division by a logarithm");
                if (w.constant() == 0) fail("division by zero");
                v /= w.constant();
            } else return v;
        }
    }
    LogLinear factor()
    {
        skip();
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        if (s_.compare(pos_, 5, "log2(") == 0) {
            pos_ += 5;
            LogLinear arg = expr();
            if (!eat(')')) fail("missing ')'");
            if (!arg.is_rational()) fail("log2 of a non-rational");
            return LogLinear::log2_of(arg.constant());
        }
        if (eat('(')) {
            LogLinear v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (start == pos_) fail("expected a number");
        return LogLinear(parse_rational(s_.substr(start, pos_ - start)));
    }

    std::string_view s_;
    size_t pos_ = 0;
};

inline LogLinear parse_loglinear(std::string_view text)
{
    return LogLinearParser(text).parse();
}

} // namespace erlab
