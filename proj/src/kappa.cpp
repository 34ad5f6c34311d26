#include "sidcert/kappa.hpp"

#include <algorithm>
#include <stdexcept>

#include "sidcert/errors.hpp"

namespace sidcert {

const BigInt& KappaPolynomial::coefficient(int m) const {
    static const BigInt zero(0);
    if (m < 1 || m > max_degree()) return zero;
    return kappa[m - 1];
}

Rational eval_poly(const KappaPolynomial& p, const Rational& x) {
    // P(x) = x*(k1 + x*(k2 + ... )) by Horner from the top coefficient
    Rational acc(0);
    for (int i = p.max_degree() - 1; i >= 0; --i) acc = acc * x + Rational(p.kappa[i]);
    return acc * x;
}

namespace {

// Reorders edges so each new edge overlaps the already-covered vertex set as
// much as possible; finalizes vertices early, which drives the DFS pruning.
std::vector<int> chain_edge_order(const Hypergraph& h) {
    int e = h.edge_count();
    std::vector<int> order;
    std::vector<char> used(e, 0), covered(h.n, 0);
    for (int step = 0; step < e; ++step) {
        int best = -1, best_overlap = -1;
        for (int i = 0; i < e; ++i) {
            if (used[i]) continue;
            int ov = 0;
            for (int v : h.edges[i]) ov += covered[v];
            if (ov > best_overlap) {
                best_overlap = ov;
                best = i;
            }
        }
        used[best] = 1;
        order.push_back(best);
        for (int v : h.edges[best]) covered[v] = 1;
    }
    return order;
}

struct CensusContext {
    const Hypergraph* h;
    std::vector<int> order;                      // edge processing order
    std::vector<std::vector<int>> finalized_at;  // vertices finalized after step i
    std::vector<BigInt> counts;                  // by number of included edges
};

void census_dfs(CensusContext& ctx, int step, int included, std::vector<int>& deg) {
    if (step == static_cast<int>(ctx.order.size())) {
        ++ctx.counts[included];
        return;
    }
    const auto& edge = ctx.h->edges[ctx.order[step]];
    for (int take = 0; take <= 1; ++take) {
        if (take)
            for (int v : edge) ++deg[v];
        bool ok = true;
        for (int v : ctx.finalized_at[step])
            if (deg[v] == 1) { ok = false; break; }
        if (ok) census_dfs(ctx, step + 1, included + take, deg);
        if (take)
            for (int v : edge) --deg[v];
    }
}

std::vector<BigInt> census_counts(const Hypergraph& h) {
    if (h.edge_count() > 34)
        throw ResourceError("kappa enumeration budget exceeded: e(H) = " +
                            std::to_string(h.edge_count()) + " > 34");
    CensusContext ctx;
    ctx.h = &h;
    ctx.order = chain_edge_order(h);
    ctx.finalized_at.assign(h.edge_count(), {});
    std::vector<int> last_step(h.n, -1);
    for (int s = 0; s < h.edge_count(); ++s)
        for (int v : h.edges[ctx.order[s]]) last_step[v] = s;
    for (int v = 0; v < h.n; ++v)
        if (last_step[v] >= 0) ctx.finalized_at[last_step[v]].push_back(v);
    ctx.counts.assign(h.edge_count() + 1, BigInt(0));
    std::vector<int> deg(h.n, 0);
    census_dfs(ctx, 0, 0, deg);
    return ctx.counts;
}

}  // namespace

BigInt kappa_bruteforce(const Hypergraph& h, int m) {
    if (m <= 0 || m > h.edge_count())
        throw std::invalid_argument("kappa_bruteforce: m out of range");
    return census_counts(h)[m];
}

KappaPolynomial kappa_poly_bruteforce(const Hypergraph& h) {
    auto counts = census_counts(h);
    KappaPolynomial p;
    p.kappa.assign(counts.begin() + 1, counts.end());
    return p;
}

KappaPolynomial kappa_closed_c3k(int k) {
    if (k < 2) throw std::invalid_argument("kappa_closed_c3k needs k >= 2");
    KappaPolynomial p;
    p.kappa.assign(3 * k, BigInt(0));
    for (int i = 0; i <= k; ++i) {
        Rational c = Rational(3 * k, k + 2 * i) * Rational(binomial(k + 2 * i, 3 * i));
        c.canonicalize();
        if (c.get_den() != 1) throw std::logic_error("kappa_closed_c3k: non-integer coefficient");
        p.kappa[2 * k + i - 1] = c.get_num();
    }
    return p;
}

KappaPolynomial kappa_closed_c3k_minus_e(int k) {
    if (k < 2) throw std::invalid_argument("kappa_closed_c3k_minus_e needs k >= 2");
    KappaPolynomial p;
    p.kappa.assign(3 * k - 1, BigInt(0));
    for (int i = 0; i <= k - 1; ++i)
        p.kappa[2 * k + i - 1] = binomial(k + 2 * i - 1, 3 * i);
    return p;
}

KappaPolynomial kappa_closed_c2r(int r) {
    if (r < 3) throw std::invalid_argument("kappa_closed_c2r needs r >= 3");
    KappaPolynomial p;
    p.kappa.assign(2 * r, BigInt(0));
    for (int i = 4; i <= 2 * r; ++i)
        p.kappa[i - 1] = binomial(2 * r, i) - BigInt(2 * r) * (i - 2) * binomial(r, i - 1);
    return p;
}

BigInt count_bad_subsets(int r, int m) {
    if (r < 3) throw std::invalid_argument("count_bad_subsets needs r >= 3");
    if (m < 4 || m > 2 * r) throw std::invalid_argument("count_bad_subsets: m out of range");
    int n = 2 * r;
    BigInt bad(0);
    std::vector<int> pick(m);
    for (int i = 0; i < m; ++i) pick[i] = i;
    while (true) {
        bool has_bad = false;
        for (int i = 0; i < m && !has_bad; ++i) {
            int nxt = pick[(i + 1) % m], prv = pick[(i + m - 1) % m];
            int diff = ((nxt - prv) % n + n) % n;
            if (diff < 2 || diff > r) has_bad = true;
        }
        if (has_bad) ++bad;
        int i = m - 1;
        while (i >= 0 && pick[i] == n - m + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    return bad;
}

namespace {

using Poly = std::vector<BigInt>;  // index = number of included edges

void poly_add(Poly& into, const Poly& from) {
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

Poly poly_shift(const Poly& p) {
    Poly out(p.size(), BigInt(0));
    for (std::size_t i = 0; i + 1 < p.size(); ++i) out[i + 1] = p[i];
    return out;
}

bool poly_zero(const Poly& p) {
    return std::all_of(p.begin(), p.end(), [](const BigInt& c) { return c == 0; });
}

}  // namespace

KappaPolynomial kappa_tight_cycle_dp(int ell, int r, const std::set<int>& skip_edges) {
    if (r < 2) throw std::invalid_argument("kappa_tight_cycle_dp: r must be at least 2");
    if (ell <= r) throw std::invalid_argument("kappa_tight_cycle_dp: ell must exceed r");
    if (r > 8 || ell > 64)
        throw ResourceError("kappa_tight_cycle_dp budget exceeded: limited to r <= 8, ell <= 64");
    for (int s : skip_edges)
        if (s < 0 || s >= ell) throw std::invalid_argument("skip edge index out of range");

    int w = r - 1;                 // window width in edge decisions
    int nstates = 1 << w;          // state = inclusion bits of edges i-w..i-1
    int plen = ell + 1;
    auto skipped = [&](int i) { return skip_edges.count(i) > 0; };

    Poly total(plen, BigInt(0));
    // Seed = decisions of edges 0..w-1; DP walks edges w..ell-1, checking
    // vertex i as edge i's decision completes its incident window.
    for (int seed = 0; seed < nstates; ++seed) {
        bool valid_seed = true;
        for (int j = 0; j < w; ++j)
            if (skipped(j) && ((seed >> j) & 1)) { valid_seed = false; break; }
        if (!valid_seed) continue;

        std::vector<Poly> dp(nstates, Poly(plen, BigInt(0)));
        // state bit j (LSB) = decision of edge i-w+j; seed bit j = edge j
        int seed_state = 0;
        int seed_ones = 0;
        for (int j = 0; j < w; ++j)
            if ((seed >> j) & 1) {
                seed_state |= 1 << j;
                ++seed_ones;
            }
        dp[seed_state][seed_ones] = 1;

        for (int i = w; i < ell; ++i) {
            std::vector<Poly> next(nstates, Poly(plen, BigInt(0)));
            for (int s = 0; s < nstates; ++s) {
                if (poly_zero(dp[s])) continue;
                for (int b = 0; b <= (skipped(i) ? 0 : 1); ++b) {
                    // vertex i is covered by edges i-w..i
                    int degree = __builtin_popcount(s) + b;
                    if (degree == 1) continue;
                    int ns = (s >> 1) | (b << (w - 1));
                    if (b)
                        poly_add(next[ns], poly_shift(dp[s]));
                    else
                        poly_add(next[ns], dp[s]);
                }
            }
            dp.swap(next);
        }

        // Close the cycle: vertices 0..w-1 mix the final window and the seed.
        for (int s = 0; s < nstates; ++s) {
            if (poly_zero(dp[s])) continue;
            bool ok = true;
            for (int v = 0; v < w && ok; ++v) {
                int degree = 0;
                for (int p = v; p < w; ++p) degree += (s >> p) & 1;    // edges ell-w+v..ell-1
                for (int p = 0; p <= v; ++p) degree += (seed >> p) & 1;  // edges 0..v
                if (degree == 1) ok = false;
            }
            if (ok) poly_add(total, dp[s]);
        }
    }

    KappaPolynomial p;
    int available = ell - static_cast<int>(skip_edges.size());
    p.kappa.assign(total.begin() + 1, total.begin() + 1 + available);
    return p;
}

std::optional<NegativityCertificate> find_negative_point(const KappaPolynomial& p,
                                                         const std::vector<Rational>& probes,
                                                         int grid_n) {
    if (grid_n < 1) throw std::invalid_argument("find_negative_point: grid_n >= 1 required");
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Rational& x = probes[i];
        if (x < Rational(-1) || x > Rational(0)) continue;
        Rational v = eval_poly(p, x);
        if (v < 0) return NegativityCertificate{x, v, "probe:" + to_string(x)};
    }
    for (int j = 1; j <= grid_n; ++j) {
        Rational x(-j, grid_n);
        x.canonicalize();
        Rational v = eval_poly(p, x);
        if (v < 0)
            return NegativityCertificate{x, v,
                                         "grid:" + std::to_string(j) + "/" + std::to_string(grid_n)};
    }
    return std::nullopt;
}

std::vector<Rational> probe_catalogue(int k, int r, bool minus_edge) {
    std::vector<Rational> probes;
    auto add = [&](Rational q) {
        q.canonicalize();
        for (const auto& p : probes)
            if (p == q) return;
        probes.push_back(q);
    };
    if (r == 3) {
        add(Rational(-2, 3));
        long kk = k;
        if (minus_edge)
            add(Rational(-300, 7 * (kk * kk * kk - kk)));
        else
            add(Rational(-30, kk * kk * kk + kk * kk));
    } else if (k == 2 && !minus_edge) {
        if (r <= 15)
            add(Rational(-2, r));
        else
            add(Rational(-1, r));
    }
    return probes;
}

}  // namespace sidcert
