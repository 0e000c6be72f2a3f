#pragma once

#include "erlab/colouring_count.hpp"
#include "erlab/loglinear.hpp"
#include "erlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

enum class ConstraintTag { basic, universal, existential, conjectured };

inline const char* tag_name(ConstraintTag t)
{
    switch (t) {
    case ConstraintTag::basic: return "basic";
    case ConstraintTag::universal: return "universal";
    case ConstraintTag::existential: return "existential";
    case ConstraintTag::conjectured: return "conjectured";
    }
    return "?";
}

// a[0] multiplies d_2, ..., a[s-2] multiplies d_s; sense is <=.
struct LinearConstraint {
    std::vector<Rational> a;
    Rational b;
    ConstraintTag tag = ConstraintTag::universal;
    std::string name;

    int s() const { return static_cast<int>(a.size()) + 1; }
    Rational coeff(int t) const { return a.at(static_cast<size_t>(t - 2)); }
    bool satisfied_by(const std::vector<Rational>& d) const
    {
        if (d.size() != a.size()) throw std::invalid_argument("density vector length differs from constraint");
        Rational lhs = 0;
        for (size_t i = 0; i < a.size(); ++i) lhs += a[i] * d[i];
        return lhs <= b;
    }
    std::string str() const
    {
        std::string out;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            Rational mag = abs(a[i]);
            std::string c = mag == 1 ? "" : mag.get_str();
            std::string term = c + "d" + std::to_string(i + 2);
            if (out.empty()) out = (a[i] < 0 ? "-" : "") + term;
            else out += (a[i] < 0 ? " - " : " + ") + term;
        }
        if (out.empty()) out = "0";
        return out + " <= " + b.get_str();
    }
};

inline void check_s(int s)
{
    if (s < 2 || s > 16) throw std::invalid_argument("s must be in 2..16");
}

// sum_t t*d_t <= rhs
inline LinearConstraint weighted_sum_constraint(int s, const Rational& rhs, ConstraintTag tag, std::string name)
{
    check_s(s);
    LinearConstraint c;
    for (int t = 2; t <= s; ++t) c.a.emplace_back(t);
    c.b = rhs;
    c.tag = tag;
    c.name = std::move(name);
    return c;
}

inline LinearConstraint basic_constraint(const KVector& k)
{
    k.validate();
    Rational b = 0;
    for (int c = 0; c < k.s(); ++c) b += Rational(1) - frac(1, k[c] - 1);
    return weighted_sum_constraint(k.s(), b, ConstraintTag::basic, "basic");
}

// sum_t d_t <= 1: the pair weights 2*alpha_i*alpha_j sum to at most 1.
inline LinearConstraint total_density_constraint(int s)
{
    check_s(s);
    LinearConstraint c;
    c.a.assign(static_cast<size_t>(s - 1), Rational(1));
    c.b = 1;
    c.tag = ConstraintTag::universal;
    c.name = "total";
    return c;
}

inline LinearConstraint probe_constraint(int s, const Rational& rhs)
{
    return weighted_sum_constraint(s, rhs, ConstraintTag::universal, "probe<=" + rhs.get_str());
}

// i_f = C(s,2) - C(s-f,2): pairs of colours meeting a set of size f.
inline LinearConstraint pair_union_constraint(int s, const Rational& cap)
{
    check_s(s);
    LinearConstraint c;
    for (int f = 2; f <= s; ++f) c.a.emplace_back(binom_small(s, 2) - binom_small(s - f, 2));
    c.b = Rational(binom_small(s, 2)) * cap;
    c.tag = ConstraintTag::universal;
    c.name = "pair_union(" + cap.get_str() + ")";
    return c;
}

inline LinearConstraint conjectured_ks_constraint(int s, int k)
{
    check_s(s);
    if (k < 3) throw std::invalid_argument("k must be at least 3");
    LinearConstraint c;
    for (int f = 2; f <= s; ++f) {
        long sum = 0;
        for (int a = 1; a <= f; ++a) sum += s - a;
        c.a.emplace_back(sum);
    }
    Rational km1 = k - 1;
    c.b = Rational(binom_small(s, 2)) * (km1 * km1 - 1) / (km1 * km1);
    c.tag = ConstraintTag::conjectured;
    c.name = "conjectured(" + std::to_string(k) + ";" + std::to_string(s) + ")";
    return c;
}

struct Certificate {
    std::vector<LinearConstraint> constraints;
    std::vector<LogLinear> multipliers;
    std::optional<LogLinear> claimed_bound;
};

struct CertificateCheck {
    bool valid = false;
    LogLinear bound;
    std::vector<LogLinear> slack; // slack[f-2]
    std::vector<int> zero_slack;  // values of f with slack exactly 0
    std::vector<int> negative;    // values of f violating coverage
    bool claimed_matches = true;
};

inline CertificateCheck verify_certificate(const Certificate& cert, int s)
{
    check_s(s);
    if (cert.constraints.size() != cert.multipliers.size())
        throw std::invalid_argument("certificate: constraint and multiplier counts differ");
    for (size_t j = 0; j < cert.multipliers.size(); ++j) {
        if (loglin_sign(cert.multipliers[j]) < 0)
            throw std::invalid_argument("certificate: negative multiplier " + cert.multipliers[j].str());
        if (cert.constraints[j].s() != s) throw std::invalid_argument("certificate: constraint has wrong length");
    }
    CertificateCheck out;
    for (size_t j = 0; j < cert.constraints.size(); ++j) out.bound += cert.multipliers[j] * cert.constraints[j].b;
    out.valid = true;
    for (int f = 2; f <= s; ++f) {
        LogLinear cov = -LogLinear::log2_of(f);
        for (size_t j = 0; j < cert.constraints.size(); ++j) cov += cert.multipliers[j] * cert.constraints[j].coeff(f);
        int sg = loglin_sign(cov);
        if (sg == 0) out.zero_slack.push_back(f);
        if (sg < 0) {
            out.negative.push_back(f);
            out.valid = false;
        }
        out.slack.push_back(cov);
    }
    if (cert.claimed_bound) out.claimed_matches = *cert.claimed_bound == out.bound;
    return out;
}

struct ExistentialError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The probe cannot hold at any optimum whose value reaches candidate, so its reverse is valid there.
inline LinearConstraint derive_existential_constraint(const std::vector<LinearConstraint>& system,
                                                      const LogLinear& candidate, const LinearConstraint& probe,
                                                      const Certificate& cert)
{
    int s = probe.s();
    auto same = [](const LinearConstraint& x, const LinearConstraint& y) { return x.a == y.a && x.b == y.b; };
    for (const auto& c : cert.constraints) {
        bool known = same(c, probe) ||
                     std::any_of(system.begin(), system.end(), [&](const LinearConstraint& y) { return same(c, y); });
        if (!known) throw ExistentialError("certificate uses a constraint outside the system: " + c.str());
    }
    auto chk = verify_certificate(cert, s);
    if (!chk.valid) throw ExistentialError("certificate does not cover log f for every f");
    if (loglin_compare(chk.bound, candidate) >= 0)
        throw ExistentialError("certificate bound " + chk.bound.str() + " is not below " + candidate.str());
    LinearConstraint out;
    for (const auto& x : probe.a) out.a.push_back(-x);
    out.b = -probe.b;
    out.tag = ConstraintTag::existential;
    out.name = "reverse(" + probe.name + ")";
    return out;
}

// Multipliers for two constraints making the slack zero at f1 and f2 (Cramer's rule).
inline std::optional<std::pair<LogLinear, LogLinear>> tight_multipliers(const LinearConstraint& c1,
                                                                        const LinearConstraint& c2, int f1, int f2)
{
    Rational a11 = c1.coeff(f1), a12 = c2.coeff(f1), a21 = c1.coeff(f2), a22 = c2.coeff(f2);
    Rational det = a11 * a22 - a12 * a21;
    if (det == 0) return std::nullopt;
    LogLinear r1 = LogLinear::log2_of(f1), r2 = LogLinear::log2_of(f2);
    LogLinear y1 = (r1 * a22 - r2 * a12) / det;
    LogLinear y2 = (r2 * a11 - r1 * a21) / det;
    return std::make_pair(y1, y2);
}

inline bool rb_bridge_check(const Rational& sum_lower, const Rational& per_colour_cap, int pair_count,
                            const Rational& pair_bound_b)
{
    return sum_lower - Rational(pair_count - 2) * per_colour_cap >= pair_bound_b;
}

// ---- floating LP ----

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    std::vector<double> d;     // d_2..d_s
    double value = 0;
    std::vector<double> farkas; // when infeasible: y >= 0, yA >= 0, yb < 0
    int pivots = 0;
};

namespace detail {

// max c.x s.t. A x <= b, x >= 0; dense two-phase tableau, Bland's rule.
struct Simplex {
    static constexpr double eps = 1e-11;
    int m, n, ncol;
    std::vector<std::vector<double>> t; // m rows, ncol + 1 columns (last = rhs)
    std::vector<int> basis;
    std::vector<bool> artificial;
    int pivots = 0;

    Simplex(const std::vector<std::vector<double>>& A, const std::vector<double>& b)
        : m(static_cast<int>(A.size())), n(A.empty() ? 0 : static_cast<int>(A[0].size()))
    {
        int nart = 0;
        for (double bi : b)
            if (bi < 0) ++nart;
        ncol = n + m + nart;
        t.assign(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(ncol) + 1, 0.0));
        artificial.assign(static_cast<size_t>(ncol), false);
        basis.resize(static_cast<size_t>(m));
        int next_art = n + m;
        for (int i = 0; i < m; ++i) {
            double sg = b[i] < 0 ? -1 : 1;
            for (int j = 0; j < n; ++j) t[i][j] = sg * A[i][j];
            t[i][n + i] = sg;
            t[i][ncol] = sg * b[i];
            if (b[i] < 0) {
                t[i][next_art] = 1;
                artificial[next_art] = true;
                basis[i] = next_art++;
            } else basis[i] = n + i;
        }
    }

    void pivot(int r, int c)
    {
        ++pivots;
        double p = t[r][c];
        for (auto& x : t[r]) x /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r || t[i][c] == 0) continue;
            double f = t[i][c];
            for (int j = 0; j <= ncol; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    // Returns false when unbounded.
    bool optimize(const std::vector<double>& cost, bool allow_artificial)
    {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < ncol && enter < 0; ++j) {
                if (artificial[j] && !allow_artificial) continue;
                if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
                double rc = cost[j];
                for (int i = 0; i < m; ++i) rc -= cost[basis[i]] * t[i][j];
                if (rc > eps) enter = j;
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = 0;
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= eps) continue;
                double ratio = t[i][ncol] / t[i][enter];
                if (leave < 0 || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    double objective(const std::vector<double>& cost) const
    {
        double v = 0;
        for (int i = 0; i < m; ++i) v += cost[basis[i]] * t[i][ncol];
        return v;
    }
};

inline LpResult simplex_max(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b)
{
    Simplex sx(A, b);
    LpResult res;
    std::vector<double> phase1(static_cast<size_t>(sx.ncol), 0.0);
    bool any_art = false;
    for (int j = 0; j < sx.ncol; ++j)
        if (sx.artificial[j]) {
            phase1[j] = -1;
            any_art = true;
        }
    if (any_art) {
        sx.optimize(phase1, true);
        if (sx.objective(phase1) < -1e-9) {
            res.status = LpStatus::infeasible;
            res.pivots = sx.pivots;
            return res;
        }
        for (int i = 0; i < sx.m; ++i) {
            if (!sx.artificial[sx.basis[i]]) continue;
            for (int j = 0; j < sx.ncol; ++j)
                if (!sx.artificial[j] && std::abs(sx.t[i][j]) > Simplex::eps) {
                    sx.pivot(i, j);
                    break;
                }
        }
    }
    std::vector<double> cost(static_cast<size_t>(sx.ncol), 0.0);
    for (size_t j = 0; j < c.size(); ++j) cost[j] = c[j];
    if (!sx.optimize(cost, false)) {
        res.status = LpStatus::unbounded;
        res.pivots = sx.pivots;
        return res;
    }
    res.d.assign(c.size(), 0.0);
    for (int i = 0; i < sx.m; ++i)
        if (sx.basis[i] < sx.n) res.d[sx.basis[i]] = sx.t[i][sx.ncol];
    res.value = sx.objective(cost);
    res.pivots = sx.pivots;
    return res;
}

} // namespace detail

inline LpResult solve_lp_float(const std::vector<LinearConstraint>& system, int s)
{
    check_s(s);
    int n = s - 1;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& c : system) {
        if (c.s() != s) throw std::invalid_argument("constraint " + c.name + " has the wrong length");
        std::vector<double> row;
        for (const auto& x : c.a) row.push_back(x.get_d());
        A.push_back(row);
        b.push_back(c.b.get_d());
    }
    for (int t = 0; t < n; ++t) {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        row[t] = 1;
        A.push_back(row);
        b.push_back(1);
    }
    std::vector<double> cost;
    for (int t = 2; t <= s; ++t) cost.push_back(std::log2(static_cast<double>(t)));
    LpResult res = detail::simplex_max(cost, A, b);
    if (res.status == LpStatus::infeasible) {
        // Farkas direction: max -y.b s.t. A^T y >= 0, sum y <= 1, y >= 0.
        size_t m = A.size();
        std::vector<std::vector<double>> F;
        std::vector<double> fb;
        for (int j = 0; j < n; ++j) {
            std::vector<double> row(m);
            for (size_t i = 0; i < m; ++i) row[i] = -A[i][j];
            F.push_back(row);
            fb.push_back(0);
        }
        F.emplace_back(m, 1.0);
        fb.push_back(1);
        std::vector<double> fc(m);
        for (size_t i = 0; i < m; ++i) fc[i] = -b[i];
        auto fr = detail::simplex_max(fc, F, fb);
        res.farkas = fr.d; // entries past system.size() belong to the rows d_t <= 1
    }
    return res;
}

} // namespace erlab
