#pragma once

#include "erlab/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace erlab {

struct RBParams {
    Rational a, b;
    void validate() const
    {
        if (!(a > 0 && a < 1 && b > 0 && b < 1)) throw std::invalid_argument("RB parameters must lie in (0,1)");
    }
};

// 40 p(x,y) = -y^2 - 2y(2x-1) - 5(4a-3)
inline Rational p_poly(const Rational& x, const Rational& y, const Rational& a)
{
    return (-y * y - 2 * y * (2 * x - 1) - 5 * (4 * a - 3)) / 40;
}

// 40 q(x,y) = -y^2 - 2y(5x-1) + 5(-x^2+2x+3-4b)
inline Rational q_poly(const Rational& x, const Rational& y, const Rational& b)
{
    return (-y * y - 2 * y * (5 * x - 1) + 5 * (-x * x + 2 * x + 3 - 4 * b)) / 40;
}

// Term-by-term forms, before collecting.
inline Rational p_poly_expanded(const Rational& x, const Rational& y, const Rational& a)
{
    Rational z = 1 - x - y;
    return Rational(4, 5) * y * y / 2 + Rational(4, 5) * z * y + Rational(3, 4) * (1 - y) * (1 - y) / 2 +
           Rational(7, 10) * x * y - a / 2;
}

inline Rational q_poly_expanded(const Rational& x, const Rational& y, const Rational& b)
{
    Rational z = 1 - x - y;
    return x * x / 2 + Rational(3, 4) * z * z / 2 + x * z + Rational(4, 5) * y * y / 2 + Rational(4, 5) * y * (1 - y) -
           b / 2;
}

inline Rational p_poly_factored(const Rational& x, const Rational& y, const Rational& a)
{
    return -(y / 40) * (4 * x + y - 2) - (a - Rational(3, 4)) / 2;
}

inline double p_poly_d(double x, double y, double a) { return (-y * y - 2 * y * (2 * x - 1) - 5 * (4 * a - 3)) / 40; }
inline double q_poly_d(double x, double y, double b)
{
    return (-y * y - 2 * y * (5 * x - 1) + 5 * (-x * x + 2 * x + 3 - 4 * b)) / 40;
}

// Discriminants in y of 40p and 40q.
inline Rational disc_p(const Rational& x, const Rational& a) { return 4 * (2 * x - 1) * (2 * x - 1) - 20 * (4 * a - 3); }
inline Rational disc_q(const Rational& x, const Rational& b) { return 80 * (x * x + Rational(4, 5) - b); }

struct RegionWitness {
    Rational x, y, p, q;
};

struct RegionReport {
    bool disjoint = false;
    bool analytic_certified = false;
    std::string strategy; // "split-3/10", "split-1/2" or "none"
    std::vector<std::string> analytic_log;
    long grid_points = 0;
    std::optional<RegionWitness> witness;
};

namespace detail {

// Upper end of an interval for the largest root of 40q at x, or empty when disc < 0.
inline std::optional<double> largest_root_upper(const Rational& x, const Rational& b)
{
    Rational inside = x * x + Rational(4, 5) - b;
    if (inside < 0) return std::nullopt;
    mpfr_t r, t;
    mpfr_inits2(256, r, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_q(t, inside.get_mpq_t(), MPFR_RNDU);
    mpfr_mul_ui(t, t, 20, MPFR_RNDU); // (2 sqrt5)^2 = 20
    mpfr_sqrt(r, t, MPFR_RNDU);
    Rational base = -5 * x + 1;
    mpfr_set_q(t, base.get_mpq_t(), MPFR_RNDU);
    mpfr_add(r, r, t, MPFR_RNDU);
    double out = mpfr_get_d(r, MPFR_RNDU);
    mpfr_clears(r, t, static_cast<mpfr_ptr>(nullptr));
    return out;
}

inline bool analytic_split_low(const RBParams& pr, std::vector<std::string>& log)
{
    const Rational xs(3, 10);
    // P: p decreases in x for y >= 0, and 40p at x = 3/10 has no real root with negative leading term.
    Rational dp = disc_p(xs, pr.a);
    log.push_back("disc(p) at x=3/10 is " + dp.get_str());
    if (dp >= 0) return false;
    // Q: for x < 3/10, disc(q) = 80(x^2 + 4/5 - b) < 80(9/100 + 4/5 - b) <= 0.
    Rational slack = pr.b - Rational(4, 5) - xs * xs;
    log.push_back("b - 4/5 - (3/10)^2 = " + slack.get_str());
    if (slack < 0) return false;
    log.push_back("P lies in x < 3/10 and Q in x >= 3/10");
    return true;
}

inline bool analytic_split_half(const RBParams& pr, std::vector<std::string>& log)
{
    // P: with a = 3/4, 40p = -y(y + 4x - 2), so y > 0 and p >= 0 force x <= 1/2 - y/4 < 1/2.
    if (pr.a != Rational(3, 4)) {
        log.push_back("a != 3/4, split at 1/2 not applicable");
        return false;
    }
    // Q on [0,1/2]: a real root needs x^2 >= b - 4/5. If 5x - 1 <= 0 that needs b - 4/5 <= 1/25;
    // otherwise y_x >= 0 iff g(x) = 5x^2 - 10x + 20b - 15 <= 0, and g decreases on [0,1].
    Rational low = pr.b - Rational(4, 5) - Rational(1, 25);
    Rational g_half = 20 * pr.b - Rational(75, 4);
    log.push_back("b - 4/5 - 1/25 = " + low.get_str() + ", g(1/2) = " + g_half.get_str());
    if (low <= 0 || g_half <= 0) return false;
    auto yx = largest_root_upper(Rational(1, 2), pr.b);
    if (yx) {
        log.push_back("largest root at x=1/2 is at most " + std::to_string(*yx));
        if (*yx >= 0) return false;
    }
    log.push_back("P lies in x < 1/2 (y > 0) and Q in x > 1/2");
    return true;
}

} // namespace detail

inline RegionReport region_disjointness_check(const RBParams& pr, const Rational& step)
{
    pr.validate();
    if (step <= 0 || step > Rational(1, 100)) throw std::invalid_argument("grid step must be in (0, 1/100]");
    Rational inv = 1 / step;
    if (inv.get_den() != 1 || !inv.get_num().fits_slong_p())
        throw std::invalid_argument("grid step must be 1/N for an integer N");
    RegionReport rep;
    if (detail::analytic_split_low(pr, rep.analytic_log)) {
        rep.analytic_certified = true;
        rep.strategy = "split-3/10";
    } else if (detail::analytic_split_half(pr, rep.analytic_log)) {
        rep.analytic_certified = true;
        rep.strategy = "split-1/2";
    } else rep.strategy = "none";

    // Grid in integers: scale 40p and 40q by N^2 and the parameter denominators.
    long N = inv.get_num().get_si();
    if (N > 100000) throw std::invalid_argument("grid too fine");
    long an = pr.a.get_num().get_si(), ad = pr.a.get_den().get_si();
    long bn = pr.b.get_num().get_si(), bd = pr.b.get_den().get_si();
    __int128 N2 = static_cast<__int128>(N) * N;
    for (long i = 0; i <= N && !rep.witness; ++i) {
        for (long j = 1; j <= N; ++j) {
            ++rep.grid_points;
            __int128 P = static_cast<__int128>(ad) * (-j * j - 2 * j * (2 * i - N)) - 5 * (4 * an - 3 * ad) * N2;
            if (P < 0) continue;
            __int128 Q = static_cast<__int128>(bd) * (-j * j - 2 * j * (5 * i - N) + 5 * (-i * i + 2 * i * N + 3 * N * N)) -
                         20 * bn * N2;
            if (Q < 0) continue;
            Rational x = frac(i, N), y = frac(j, N);
            rep.witness = RegionWitness{x, y, p_poly(x, y, pr.a), q_poly(x, y, pr.b)};
            break;
        }
    }
    rep.disjoint = rep.analytic_certified && !rep.witness;
    return rep;
}

// ---- stochastic search for dense triangle-free pairs ----

struct PairGraph {
    int n = 0;
    std::vector<std::array<std::uint64_t, 2>> adj;
    explicit PairGraph(int n) : n(n), adj(static_cast<size_t>(n), {0, 0}) {}
    PairGraph() = default;
    bool has(int u, int v) const { return (adj[u][v >> 6] >> (v & 63)) & 1u; }
    void flip(int u, int v)
    {
        adj[u][v >> 6] ^= std::uint64_t{1} << (v & 63);
        adj[v][u >> 6] ^= std::uint64_t{1} << (u & 63);
    }
    bool common_nbr(int u, int v) const
    {
        return (adj[u][0] & adj[v][0]) || (adj[u][1] & adj[v][1]);
    }
    long edges() const
    {
        long e = 0;
        for (const auto& a : adj) e += std::popcount(a[0]) + std::popcount(a[1]);
        return e / 2;
    }
    bool triangle_free() const
    {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (has(u, v) && common_nbr(u, v)) return false;
        return true;
    }
};

struct SearchOptions {
    int restarts = 8;
    int threads = 1;
    bool check_every_move = false; // full triangle-freeness check after each move
};

struct SearchResult {
    double best_union_density = 0;
    long best_union_edges = 0;
    PairGraph best_r, best_b;
    int best_restart = -1;
    std::vector<double> restart_densities;
    long moves = 0;
};

class InfeasibleTarget : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline void seed_bipartite(PairGraph& r, PairGraph& b)
{
    int h = r.n / 2;
    for (int u = 0; u < h; ++u)
        for (int v = h; v < r.n; ++v) {
            r.flip(u, v);
            b.flip(u, v);
        }
}

// Complete bipartite graphs on two crossing bisections: |R u B| is about 3/4 of all pairs.
inline void seed_crossing(PairGraph& r, PairGraph& b)
{
    int h = r.n / 2;
    for (int u = 0; u < r.n; ++u)
        for (int v = u + 1; v < r.n; ++v) {
            if ((u < h) != (v < h)) r.flip(u, v);
            if ((u % 2) != (v % 2)) b.flip(u, v);
        }
}

// Blow-up of K_5 with red and blue the two 5-cycles.
inline void seed_pentagon(PairGraph& r, PairGraph& b)
{
    int n = r.n;
    auto part = [n](int v) { return static_cast<int>(static_cast<long>(v) * 5 / n); };
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int d = (part(v) - part(u) + 5) % 5;
            if (d == 1 || d == 4) b.flip(u, v);
            else if (d == 2 || d == 3) r.flip(u, v);
        }
}

class PairSearch {
public:
    PairSearch(int n, long target, std::uint64_t seed, bool check) : n_(n), target_(target), rng_(seed), check_(check)
    {
        g_[0] = PairGraph(n);
        g_[1] = PairGraph(n);
    }

    void seed(int kind)
    {
        g_[0] = PairGraph(n_);
        g_[1] = PairGraph(n_);
        if (kind == 1) seed_pentagon(g_[0], g_[1]);
        else if (kind == 2) seed_crossing(g_[0], g_[1]);
        else seed_bipartite(g_[0], g_[1]);
        recount();
    }
    long total() const { return e_[0] + e_[1]; }
    long union_edges() const { return uni_; }
    const PairGraph& graph(int c) const { return g_[c]; }

    // Forced additions until the edge-sum target holds; false if it stalls.
    bool repair(long attempts)
    {
        for (long t = 0; t < attempts && total() < target_; ++t) {
            int u = pick(), v = pick(), c = static_cast<int>(rng_() & 1u);
            if (u != v) try_add(c, u, v);
        }
        if (total() < target_) greedy_fill();
        return total() >= target_;
    }

    void run(long iters, long& moves)
    {
        best_ = uni_;
        best_g_[0] = g_[0];
        best_g_[1] = g_[1];
        std::uniform_real_distribution<double> U(0, 1);
        for (long it = 0; it < iters; ++it) {
            double temp = 1.5 * (1.0 - static_cast<double>(it) / static_cast<double>(iters)) + 0.02;
            auto saved0 = g_[0], saved1 = g_[1];
            long su = uni_, se0 = e_[0], se1 = e_[1];
            int kind = static_cast<int>(rng_() % 4);
            int c = static_cast<int>(rng_() & 1u);
            bool changed = false;
            if (kind == 0) changed = random_add(c);
            else if (kind == 1) changed = random_remove(c);
            else if (kind == 3) changed = relocate(c);
            else {
                changed = random_remove(c);
                if (changed) random_add(c);
            }
            ++moves;
            if (!changed) continue;
            if (total() < target_ && !repair(4L * n_)) {
                restore(saved0, saved1, su, se0, se1);
                continue;
            }
            if (check_ && !(g_[0].triangle_free() && g_[1].triangle_free()))
                throw std::logic_error("search state lost triangle-freeness");
            long delta = uni_ - su;
            if (delta < 0 && U(rng_) >= std::exp(static_cast<double>(delta) / temp)) {
                restore(saved0, saved1, su, se0, se1);
                continue;
            }
            if (uni_ > best_ && total() >= target_) {
                best_ = uni_;
                best_g_[0] = g_[0];
                best_g_[1] = g_[1];
            }
        }
    }

    long best() const { return best_; }
    const PairGraph& best_graph(int c) const { return best_g_[c]; }

private:
    int pick() { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n_)); }

    void recount()
    {
        e_[0] = g_[0].edges();
        e_[1] = g_[1].edges();
        uni_ = 0;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (g_[0].has(u, v) || g_[1].has(u, v)) ++uni_;
    }

    bool try_add(int c, int u, int v)
    {
        if (g_[c].has(u, v) || g_[c].common_nbr(u, v)) return false;
        g_[c].flip(u, v);
        ++e_[c];
        if (!g_[1 - c].has(u, v)) ++uni_;
        return true;
    }

    void remove(int c, int u, int v)
    {
        g_[c].flip(u, v);
        --e_[c];
        if (!g_[1 - c].has(u, v)) --uni_;
    }

    bool random_add(int c)
    {
        for (int t = 0; t < 8; ++t) {
            int u = pick(), v = pick();
            if (u != v && try_add(c, u, v)) return true;
        }
        return false;
    }

    bool random_remove(int c)
    {
        for (int t = 0; t < 8; ++t) {
            int u = pick(), v = pick();
            if (u != v && g_[c].has(u, v)) {
                remove(c, u, v);
                return true;
            }
        }
        return false;
    }

    // Drop every c-edge at one vertex, then re-add greedily in random order.
    bool relocate(int c)
    {
        int x = pick();
        for (int v = 0; v < n_; ++v)
            if (v != x && g_[c].has(x, v)) remove(c, x, v);
        std::vector<int> order(static_cast<size_t>(n_));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);
        for (int v : order)
            if (v != x) try_add(c, x, v);
        return true;
    }

    void greedy_fill()
    {
        for (int c = 0; c < 2 && total() < target_; ++c)
            for (int u = 0; u < n_ && total() < target_; ++u)
                for (int v = u + 1; v < n_ && total() < target_; ++v) try_add(c, u, v);
    }

    void restore(const PairGraph& a, const PairGraph& b, long su, long se0, long se1)
    {
        g_[0] = a;
        g_[1] = b;
        uni_ = su;
        e_[0] = se0;
        e_[1] = se1;
    }

    int n_;
    long target_;
    std::mt19937_64 rng_;
    bool check_;
    PairGraph g_[2], best_g_[2];
    long e_[2] = {0, 0};
    long uni_ = 0, best_ = 0;
};

} // namespace detail

// Maximizes |R u B| over triangle-free R, B on [n] with |R| + |B| >= b_target * n^2 / 2.
inline SearchResult search_triangle_free_pair(int n, const Rational& b_target, long iters, std::uint64_t seed,
                                              const SearchOptions& opt = {})
{
    if (n < 2 || n > 128) throw std::invalid_argument("n must be in 2..128");
    if (b_target <= 0) throw std::invalid_argument("b_target must be positive");
    Rational tq = b_target * n * n / 2;
    mpz_class tz;
    mpz_cdiv_q(tz.get_mpz_t(), tq.get_num().get_mpz_t(), tq.get_den().get_mpz_t());
    long target = tz.get_si();
    int R = std::max(1, opt.restarts);
    std::vector<long> best(static_cast<size_t>(R), -1);
    std::vector<PairGraph> br(static_cast<size_t>(R)), bb(static_cast<size_t>(R));
    std::vector<long> moves(static_cast<size_t>(R), 0);
    std::vector<std::string> errors(static_cast<size_t>(R));
    auto work = [&](int i) {
        detail::PairSearch s(n, target, detail::splitmix64(seed + static_cast<std::uint64_t>(i)), opt.check_every_move);
        s.seed(i % 3);
        if (!s.repair(16L * n * n)) {
            s.seed(0);
            if (!s.repair(16L * n * n)) {
                errors[i] = "no triangle-free pair reaches the edge target";
                return;
            }
        }
        s.run(iters, moves[i]);
        best[i] = s.best();
        br[i] = s.best_graph(0);
        bb[i] = s.best_graph(1);
    };
    int threads = std::max(1, std::min(opt.threads, R));
    if (threads == 1)
        for (int i = 0; i < R; ++i) work(i);
    else {
        for (int base = 0; base < R; base += threads) {
            std::vector<std::thread> pool;
            for (int i = base; i < std::min(R, base + threads); ++i) pool.emplace_back(work, i);
            for (auto& t : pool) t.join();
        }
    }
    SearchResult res;
    for (int i = 0; i < R; ++i) {
        if (!errors[i].empty()) throw InfeasibleTarget(errors[i]);
        res.moves += moves[i];
        double dens = 2.0 * static_cast<double>(best[i]) / (static_cast<double>(n) * n);
        res.restart_densities.push_back(dens);
        if (best[i] > res.best_union_edges || res.best_restart < 0) {
            res.best_union_edges = best[i];
            res.best_union_density = dens;
            res.best_r = br[i];
            res.best_b = bb[i];
            res.best_restart = i;
        }
    }
    if (!res.best_r.triangle_free() || !res.best_b.triangle_free())
        throw std::logic_error("best pair is not triangle-free");
    return res;
}

} // namespace erlab
