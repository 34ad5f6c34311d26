#include "sidcert/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sidcert/errors.hpp"

namespace sidcert {

namespace {

// ---------------------------------------------------------------------------
// Min-fill elimination order on the primal graph of the edge scopes.
// Returns the order and the largest cluster (variable + live neighbours).
// ---------------------------------------------------------------------------

struct EliminationPlan {
    std::vector<int> order;
    int max_cluster = 0;
};

EliminationPlan min_fill_order(int nv, const std::vector<std::vector<int>>& scopes) {
    if (nv > 64) throw ResourceError("variable elimination limited to 64 vertices");
    std::vector<std::uint64_t> adj(nv, 0);
    for (const auto& s : scopes)
        for (int a : s)
            for (int b : s)
                if (a != b) adj[a] |= 1ull << b;
    std::uint64_t alive = nv == 64 ? ~0ull : ((1ull << nv) - 1);
    EliminationPlan plan;
    for (int step = 0; step < nv; ++step) {
        int best = -1, best_fill = -1, best_deg = -1;
        for (int v = 0; v < nv; ++v) {
            if (!((alive >> v) & 1)) continue;
            std::uint64_t nb = adj[v] & alive;
            int deg = __builtin_popcountll(nb);
            int fill = 0;
            for (int a = 0; a < nv; ++a) {
                if (!((nb >> a) & 1)) continue;
                std::uint64_t missing = nb & ~adj[a] & ~(1ull << a);
                fill += __builtin_popcountll(missing);
            }
            fill /= 2;
            if (best < 0 || fill < best_fill || (fill == best_fill && deg < best_deg)) {
                best = v;
                best_fill = fill;
                best_deg = deg;
            }
        }
        std::uint64_t nb = adj[best] & alive;
        plan.max_cluster = std::max(plan.max_cluster, __builtin_popcountll(nb) + 1);
        for (int a = 0; a < nv; ++a)
            if ((nb >> a) & 1) adj[a] |= nb & ~(1ull << a);
        alive &= ~(1ull << best);
        plan.order.push_back(best);
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Generic dense variable elimination over an atom space, scalar type T.
// Masses are multiplied in when their vertex is summed out.
// ---------------------------------------------------------------------------

template <typename T>
struct DenseFactor {
    std::vector<int> scope;  // sorted vertex ids
    std::vector<T> table;    // little-endian row-major over scope
};

template <typename T>
std::size_t table_index(const DenseFactor<T>& f, const std::vector<int>& assign, int atoms) {
    std::size_t idx = 0, stride = 1;
    for (int v : f.scope) {
        idx += static_cast<std::size_t>(assign[v]) * stride;
        stride *= atoms;
    }
    return idx;
}

double pow_entries(int atoms, int vars) {
    return std::pow(static_cast<double>(atoms), static_cast<double>(vars));
}

template <typename T, typename MassFn>
T eliminate_dense(int nv, int atoms, std::vector<DenseFactor<T>> factors, MassFn mass,
                  double entry_cap) {
    std::vector<std::vector<int>> scopes;
    for (const auto& f : factors) scopes.push_back(f.scope);
    auto plan = min_fill_order(nv, scopes);

    for (int v : plan.order) {
        std::vector<DenseFactor<T>> gathered, rest;
        for (auto& f : factors) {
            if (std::binary_search(f.scope.begin(), f.scope.end(), v))
                gathered.push_back(std::move(f));
            else
                rest.push_back(std::move(f));
        }
        factors = std::move(rest);

        std::set<int> union_scope_set;
        for (const auto& f : gathered)
            union_scope_set.insert(f.scope.begin(), f.scope.end());
        union_scope_set.insert(v);
        std::vector<int> union_scope(union_scope_set.begin(), union_scope_set.end());
        if (pow_entries(atoms, static_cast<int>(union_scope.size())) > entry_cap)
            throw ResourceError("variable elimination intermediate factor exceeds " +
                                std::to_string(static_cast<long long>(entry_cap)) + " entries");

        DenseFactor<T> out;
        for (int u : union_scope)
            if (u != v) out.scope.push_back(u);
        out.table.assign(static_cast<std::size_t>(
                             std::llround(pow_entries(atoms, static_cast<int>(out.scope.size())))),
                         T(0));

        std::vector<int> assign(nv, 0);
        std::vector<int> counter(union_scope.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < union_scope.size(); ++i) assign[union_scope[i]] = counter[i];
            T val = mass(assign[v]);
            for (const auto& f : gathered) {
                if (val == T(0)) break;
                val *= f.table[table_index(f, assign, atoms)];
            }
            if (val != T(0)) out.table[table_index(out, assign, atoms)] += val;
            std::size_t i = 0;
            while (i < counter.size() && counter[i] == atoms - 1) counter[i++] = 0;
            if (i == counter.size()) break;
            ++counter[i];
        }
        factors.push_back(std::move(out));
    }

    T result(1);
    for (const auto& f : factors) {
        if (!f.scope.empty()) throw std::logic_error("non-scalar factor after elimination");
        result *= f.table.at(0);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Exact strategies over a SymmetricKernel.
// ---------------------------------------------------------------------------

Rational brute_force_density(const Hypergraph& h, const SymmetricKernel& w, double op_cap) {
    int atoms = w.atom_count();
    if (pow_entries(atoms, h.n) > op_cap)
        throw ResourceError("brute-force density budget exceeded: " + std::to_string(atoms) + "^" +
                            std::to_string(h.n) + " assignments");
    std::vector<int> assign(h.n, 0);
    std::vector<int> tuple(h.r);
    Rational total(0);
    while (true) {
        Rational val(1);
        for (const auto& e : h.edges) {
            for (int i = 0; i < h.r; ++i) tuple[i] = assign[e[i]];
            val *= w.weight(tuple);
            if (val == 0) break;
        }
        if (val != 0) {
            for (int v = 0; v < h.n; ++v) val *= w.mass(assign[v]);
            total += val;
        }
        int i = 0;
        while (i < h.n && assign[i] == atoms - 1) assign[i++] = 0;
        if (i == h.n) break;
        ++assign[i];
    }
    return total;
}

Rational ve_density(const Hypergraph& h, const SymmetricKernel& w, double entry_cap) {
    int atoms = w.atom_count();
    std::vector<DenseFactor<Rational>> factors;
    for (const auto& e : h.edges) {
        DenseFactor<Rational> f;
        f.scope = e;  // already sorted and distinct
        std::size_t sz = 1;
        for (int i = 0; i < h.r; ++i) sz *= atoms;
        if (static_cast<double>(sz) > entry_cap)
            throw ResourceError("variable elimination edge factor exceeds budget");
        f.table.assign(sz, Rational(0));
        std::vector<int> counter(h.r, 0), tuple(h.r);
        while (true) {
            for (int i = 0; i < h.r; ++i) tuple[i] = counter[i];
            std::size_t idx = 0, stride = 1;
            for (int i = 0; i < h.r; ++i) {
                idx += static_cast<std::size_t>(counter[i]) * stride;
                stride *= atoms;
            }
            f.table[idx] = w.weight(tuple);
            int i = 0;
            while (i < h.r && counter[i] == atoms - 1) counter[i++] = 0;
            if (i == h.r) break;
            ++counter[i];
        }
        factors.push_back(std::move(f));
    }
    return eliminate_dense<Rational>(h.n, atoms, std::move(factors),
                                     [&](int a) { return w.mass(a); }, entry_cap);
}

std::vector<DenseFactor<double>> float_edge_factors(const Hypergraph& h, const SymmetricKernel& w,
                                                    double entry_cap) {
    int atoms = w.atom_count();
    std::vector<DenseFactor<double>> factors;
    for (const auto& e : h.edges) {
        DenseFactor<double> f;
        f.scope = e;
        std::size_t sz = 1;
        for (int i = 0; i < h.r; ++i) sz *= atoms;
        if (static_cast<double>(sz) > entry_cap)
            throw ResourceError("variable elimination edge factor exceeds budget");
        f.table.assign(sz, 0.0);
        std::vector<int> counter(h.r, 0), tuple(h.r);
        std::size_t idx = 0;
        while (true) {
            for (int i = 0; i < h.r; ++i) tuple[i] = counter[i];
            f.table[idx] = w.weight(tuple).get_d();
            ++idx;
            int i = 0;
            while (i < h.r && counter[i] == atoms - 1) counter[i++] = 0;
            if (i == h.r) break;
            ++counter[i];
        }
        factors.push_back(std::move(f));
    }
    return factors;
}

double band_work_estimate(int atoms, int r, int n) {
    return pow_entries(atoms, 2 * (r - 1)) * n * atoms;
}

Rational band_dp_density(const Hypergraph& h, const SymmetricKernel& w,
                         const std::vector<int>& window_starts, double work_cap) {
    int n = h.n, r = h.r, atoms = w.atom_count();
    int wwidth = r - 1;
    if (band_work_estimate(atoms, r, n) > work_cap)
        throw ResourceError("band DP state budget exceeded: " + std::to_string(atoms) + "^" +
                            std::to_string(2 * wwidth) + " seed/state pairs");
    std::vector<char> present(n, 0);
    for (int s : window_starts) present[s] = 1;

    std::size_t nstates = 1;
    for (int i = 0; i < wwidth; ++i) nstates *= atoms;

    std::vector<int> tuple(r);
    Rational total(0);
    std::vector<Rational> dp(nstates), next(nstates);
    for (std::size_t seed = 0; seed < nstates; ++seed) {
        std::fill(dp.begin(), dp.end(), Rational(0));
        // seed digits (little-endian) assign vertices 0..r-2
        Rational seed_mass(1);
        {
            std::size_t s = seed;
            for (int i = 0; i < wwidth; ++i) {
                seed_mass *= w.mass(static_cast<int>(s % atoms));
                s /= atoms;
            }
        }
        dp[seed] = seed_mass;

        for (int v = wwidth; v < n; ++v) {
            std::fill(next.begin(), next.end(), Rational(0));
            bool window_here = present[v - wwidth];
            for (std::size_t s = 0; s < nstates; ++s) {
                if (dp[s] == 0) continue;
                std::size_t digits = s;
                for (int i = 0; i < wwidth; ++i) {
                    tuple[i] = static_cast<int>(digits % atoms);
                    digits /= atoms;
                }
                for (int a = 0; a < atoms; ++a) {
                    Rational val = dp[s] * w.mass(a);
                    if (window_here) {
                        tuple[wwidth] = a;
                        val *= w.weight(tuple);
                        if (val == 0) continue;
                    }
                    std::size_t ns = s / atoms + static_cast<std::size_t>(a) * (nstates / atoms);
                    next[ns] += val;
                }
            }
            dp.swap(next);
        }

        // wrap-around windows combine the final state and the seed
        std::vector<int> seed_digits(wwidth), state_digits(wwidth);
        {
            std::size_t s = seed;
            for (int i = 0; i < wwidth; ++i) {
                seed_digits[i] = static_cast<int>(s % atoms);
                s /= atoms;
            }
        }
        for (std::size_t s = 0; s < nstates; ++s) {
            if (dp[s] == 0) continue;
            std::size_t digits = s;
            for (int i = 0; i < wwidth; ++i) {
                state_digits[i] = static_cast<int>(digits % atoms);
                digits /= atoms;
            }
            Rational val = dp[s];
            for (int t = 0; t < wwidth && val != 0; ++t) {
                if (!present[n - wwidth + t]) continue;
                int pos = 0;
                for (int p = t; p < wwidth; ++p) tuple[pos++] = state_digits[p];
                for (int p = 0; p <= t; ++p) tuple[pos++] = seed_digits[p];
                val *= w.weight(tuple);
            }
            total += val;
        }
    }
    return total;
}

}  // namespace

Rational t_density(const Hypergraph& h, const SymmetricKernel& w, Strategy strategy) {
    return t_density(h, w, strategy, DensityBudget{});
}

double t_density_float(const Hypergraph& h, const SymmetricKernel& w) {
    if (h.r != w.arity()) throw std::invalid_argument("kernel arity does not match uniformity");
    if (h.n == 0) return 1.0;
    std::vector<double> masses(w.atom_count());
    for (int i = 0; i < w.atom_count(); ++i) masses[i] = w.mass(i).get_d();
    auto factors = float_edge_factors(h, w, 1e7);
    return eliminate_dense<double>(h.n, w.atom_count(), std::move(factors),
                                   [&](int a) { return masses[a]; }, 1e7);
}

Rational t_density(const Hypergraph& h, const SymmetricKernel& w, Strategy strategy,
                   const DensityBudget& budget) {
    if (h.r != w.arity()) throw std::invalid_argument("kernel arity does not match uniformity");
    if (h.n == 0) return Rational(1);

    switch (strategy) {
        case Strategy::bruteforce:
            return brute_force_density(h, w, budget.bruteforce_ops);
        case Strategy::variable_elimination:
            return ve_density(h, w, budget.elimination_entries);
        case Strategy::band_dp: {
            auto starts = tight_cycle_window_starts(h);
            if (!starts)
                throw std::invalid_argument(
                    "band_dp strategy requires an edge subset of a tight cycle");
            return band_dp_density(h, w, *starts, budget.band_work);
        }
        case Strategy::automatic: {
            auto starts = tight_cycle_window_starts(h);
            if (starts && band_work_estimate(w.atom_count(), h.r, h.n) <= budget.band_work)
                return band_dp_density(h, w, *starts, budget.band_work);
            if (h.n <= 64) {
                std::vector<std::vector<int>> scopes;
                for (const auto& e : h.edges) scopes.push_back(e);
                auto plan = min_fill_order(h.n, scopes);
                if (pow_entries(w.atom_count(), plan.max_cluster) <= budget.elimination_entries)
                    return ve_density(h, w, budget.elimination_entries);
            }
            if (pow_entries(w.atom_count(), h.n) <= budget.bruteforce_ops)
                return brute_force_density(h, w, budget.bruteforce_ops);
            throw ResourceError("no density strategy fits the budget for v(H)=" +
                                std::to_string(h.n) + ", atoms=" +
                                std::to_string(w.atom_count()));
        }
    }
    throw std::logic_error("unknown strategy");
}

// ---------------------------------------------------------------------------
// Sampling and Monte-Carlo estimation.
// ---------------------------------------------------------------------------

Hypergraph sample_hypergraph(const SymmetricKernel& w, int n, std::uint64_t seed) {
    if (w.range() != KernelRange::nonnegative)
        throw std::invalid_argument("sampling requires a nonnegative kernel");
    if (w.max_abs_weight() > 1)
        throw std::invalid_argument("sampling requires all weights in [0,1]");
    if (n < w.arity()) throw std::invalid_argument("sample size below arity");
    int r = w.arity();
    Rng rng(seed);

    std::vector<double> cdf(w.atom_count());
    double acc = 0;
    for (int i = 0; i < w.atom_count(); ++i) {
        acc += w.mass(i).get_d();
        cdf[i] = acc;
    }
    std::vector<int> atom(n);
    for (int v = 0; v < n; ++v) {
        double u = rng.uniform01();
        int a = 0;
        while (a + 1 < w.atom_count() && u >= cdf[a]) ++a;
        atom[v] = a;
    }

    // weight lookup keyed by sorted atom multiset
    std::map<std::vector<int>, double> weight_of;
    std::vector<std::vector<int>> edges;
    std::vector<int> pick(r), key(r);
    for (int i = 0; i < r; ++i) pick[i] = i;
    while (true) {
        double u = rng.uniform01();
        for (int i = 0; i < r; ++i) key[i] = atom[pick[i]];
        std::sort(key.begin(), key.end());
        auto it = weight_of.find(key);
        double p;
        if (it == weight_of.end()) {
            p = w.weight(key).get_d();
            weight_of[key] = p;
        } else {
            p = it->second;
        }
        if (u < p) edges.push_back(pick);
        int i = r - 1;
        while (i >= 0 && pick[i] == n - r + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
    return Hypergraph(r, n, std::move(edges));
}

namespace {

// ---------------------------------------------------------------------------
// Injective homomorphism counting in an unweighted hypergraph, via the
// partition-lattice expansion inj = sum_P mu(P) hom(H/P, .) and a float
// variable elimination specialized for 0/1 edge indicators.
// ---------------------------------------------------------------------------

struct GraphFactor {
    std::vector<int> scope;
    std::vector<double> table;  // empty while pending
    bool pending = false;       // pending: 0/1 indicator of a target edge
};

void all_permutations(int r, std::vector<std::vector<int>>& out) {
    std::vector<int> p(r);
    std::iota(p.begin(), p.end(), 0);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
}

// Projects each target edge onto the factor scope in every vertex order.
void materialize_edge_factor(GraphFactor& f, const Hypergraph& g,
                             const std::vector<std::vector<int>>& perms, double entry_cap) {
    int r = static_cast<int>(f.scope.size());
    double entries = pow_entries(g.n, r);
    if (entries > entry_cap)
        throw ResourceError("edge factor materialization exceeds budget");
    f.table.assign(static_cast<std::size_t>(entries), 0.0);
    for (const auto& e : g.edges)
        for (const auto& perm : perms) {
            std::size_t idx = 0, stride = 1;
            for (int i = 0; i < r; ++i) {
                idx += static_cast<std::size_t>(e[perm[i]]) * stride;
                stride *= g.n;
            }
            f.table[idx] = 1.0;
        }
    f.pending = false;
}

double hom_density_unweighted(const Hypergraph& f, const Hypergraph& g, double entry_cap) {
    int nv = f.n, atoms = g.n, r = f.r;
    double mass = 1.0 / atoms;
    std::vector<std::vector<int>> perms;
    all_permutations(r, perms);

    std::vector<GraphFactor> factors;
    for (const auto& e : f.edges) factors.push_back(GraphFactor{e, {}, true});
    std::vector<std::vector<int>> scopes;
    for (const auto& fa : factors) scopes.push_back(fa.scope);
    auto plan = min_fill_order(nv, scopes);

    double scalar = 1.0;
    for (int v : plan.order) {
        std::vector<GraphFactor> gathered, rest;
        for (auto& fa : factors) {
            if (std::binary_search(fa.scope.begin(), fa.scope.end(), v))
                gathered.push_back(std::move(fa));
            else
                rest.push_back(std::move(fa));
        }
        factors = std::move(rest);
        if (gathered.empty()) continue;  // free vertex: masses sum to 1

        if (gathered.size() == 1 && gathered[0].pending) {
            // single edge factor: iterate target edges instead of all tuples
            GraphFactor& fa = gathered[0];
            GraphFactor out;
            for (int u : fa.scope)
                if (u != v) out.scope.push_back(u);
            double entries = pow_entries(atoms, static_cast<int>(out.scope.size()));
            if (entries > entry_cap) throw ResourceError("projected edge factor exceeds budget");
            out.table.assign(static_cast<std::size_t>(entries), 0.0);
            int vpos = static_cast<int>(std::lower_bound(fa.scope.begin(), fa.scope.end(), v) -
                                        fa.scope.begin());
            for (const auto& e : g.edges)
                for (const auto& perm : perms) {
                    std::size_t idx = 0, stride = 1;
                    for (int i = 0, o = 0; i < r; ++i) {
                        if (i == vpos) continue;
                        (void)o;
                        idx += static_cast<std::size_t>(e[perm[i]]) * stride;
                        stride *= atoms;
                    }
                    out.table[idx] += mass;
                }
            factors.push_back(std::move(out));
            continue;
        }

        for (auto& fa : gathered)
            if (fa.pending) materialize_edge_factor(fa, g, perms, entry_cap);

        std::set<int> union_scope_set;
        for (const auto& fa : gathered) union_scope_set.insert(fa.scope.begin(), fa.scope.end());
        std::vector<int> union_scope(union_scope_set.begin(), union_scope_set.end());
        if (pow_entries(atoms, static_cast<int>(union_scope.size())) > entry_cap)
            throw ResourceError("variable elimination intermediate factor exceeds budget");

        GraphFactor out;
        for (int u : union_scope)
            if (u != v) out.scope.push_back(u);
        out.table.assign(
            static_cast<std::size_t>(pow_entries(atoms, static_cast<int>(out.scope.size()))), 0.0);

        std::vector<int> assign(nv, 0), counter(union_scope.size(), 0);
        auto idx_of = [&](const GraphFactor& fa) {
            std::size_t idx = 0, stride = 1;
            for (int u : fa.scope) {
                idx += static_cast<std::size_t>(assign[u]) * stride;
                stride *= atoms;
            }
            return idx;
        };
        while (true) {
            for (std::size_t i = 0; i < union_scope.size(); ++i) assign[union_scope[i]] = counter[i];
            double val = mass;
            for (const auto& fa : gathered) {
                val *= fa.table[idx_of(fa)];
                if (val == 0) break;
            }
            if (val != 0) out.table[idx_of(out)] += val;
            std::size_t i = 0;
            while (i < counter.size() && counter[i] == atoms - 1) counter[i++] = 0;
            if (i == counter.size()) break;
            ++counter[i];
        }
        if (out.scope.empty())
            scalar *= out.table[0];
        else
            factors.push_back(std::move(out));
    }
    for (const auto& fa : factors) {
        if (!fa.scope.empty()) throw std::logic_error("non-scalar factor after elimination");
        scalar *= fa.table[0];
    }
    return scalar;
}

double partition_moebius(const std::vector<int>& block_sizes) {
    double mu = 1;
    for (int s : block_sizes) {
        double f = 1;
        for (int i = 2; i < s; ++i) f *= i;
        mu *= ((s - 1) % 2 ? -1.0 : 1.0) * f;
    }
    return mu;
}

}  // namespace

double injective_hom_density(const Hypergraph& h, const Hypergraph& g) {
    if (h.r != g.r) throw std::invalid_argument("uniformity mismatch");
    if (h.n > 8) throw ResourceError("injective density limited to v(H) <= 8");
    if (g.n < h.n) return 0.0;

    double inj = 0.0;
    std::vector<int> block_of(h.n, 0);
    auto recurse = [&](auto&& self, int v, int nblocks) -> void {
        if (v == h.n) {
            // quotient edges; skip on any collapsed edge
            std::set<std::vector<int>> qedges;
            for (const auto& e : h.edges) {
                std::vector<int> img;
                for (int u : e) img.push_back(block_of[u]);
                std::sort(img.begin(), img.end());
                if (std::adjacent_find(img.begin(), img.end()) != img.end()) return;
                qedges.insert(img);
            }
            std::vector<int> sizes(nblocks, 0);
            for (int u = 0; u < h.n; ++u) ++sizes[block_of[u]];
            Hypergraph quotient(h.r, nblocks,
                                std::vector<std::vector<int>>(qedges.begin(), qedges.end()));
            double t = hom_density_unweighted(quotient, g, 1e7);
            inj += partition_moebius(sizes) * t * std::pow(g.n, nblocks);
            return;
        }
        for (int b = 0; b <= nblocks; ++b) {
            block_of[v] = b;
            self(self, v + 1, std::max(nblocks, b + 1));
        }
    };
    recurse(recurse, 1, 1);

    double falling = 1;
    for (int i = 0; i < h.n; ++i) falling *= g.n - i;
    return inj / falling;
}

DensityEstimate estimate_density(const Hypergraph& h, const SymmetricKernel& w, int n, int trials,
                                 std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("estimate_density needs at least 2 trials");
    std::vector<double> values;
    values.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = splitmix64(seed + 0x9e3779b97f4a7c15ULL * (t + 1));
        Hypergraph sample = sample_hypergraph(w, n, trial_seed);
        values.push_back(injective_hom_density(h, sample));
    }
    DensityEstimate est;
    est.trials = trials;
    est.mean = std::accumulate(values.begin(), values.end(), 0.0) / trials;
    double ss = 0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.standard_error = std::sqrt(ss / (trials - 1)) / std::sqrt(static_cast<double>(trials));
    return est;
}

}  // namespace sidcert
