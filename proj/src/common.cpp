#include "sidcert/common.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sidcert/errors.hpp"

namespace sidcert {

namespace {

SymmetricKernel shifted_kernel(const SymmetricKernel& f, bool plus) {
    // 1 + f or 1 - f over the same atoms; nonnegative for signed-unit f
    SymmetricKernel mat = f.is_explicit() ? f : f.materialized();
    std::map<std::vector<int>, Rational> weights;
    std::vector<int> key(mat.arity(), 0);
    auto add_all = [&](auto&& self, int pos, int min_atom) -> void {
        if (pos == mat.arity()) {
            Rational w = mat.weight(key);
            weights[key] = plus ? Rational(Rational(1) + w) : Rational(Rational(1) - w);
            return;
        }
        for (int a = min_atom; a < mat.atom_count(); ++a) {
            key[pos] = a;
            self(self, pos + 1, a);
        }
    };
    add_all(add_all, 0, 0);
    return SymmetricKernel(mat.arity(), mat.masses(), std::move(weights),
                           KernelRange::nonnegative);
}

bool has_degree_one(const Hypergraph& h, const std::vector<int>& edge_indices) {
    std::vector<int> deg(h.n, 0);
    for (int i : edge_indices)
        for (int v : h.edges[i]) ++deg[v];
    return std::any_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
}

SymmetricKernel scale_kernel(const SymmetricKernel& f, const Rational& s) {
    SymmetricKernel mat = f.is_explicit() ? f : f.materialized();
    std::map<std::vector<int>, Rational> weights;
    for (const auto& [key, value] : mat.table()) weights[key] = s * value;
    KernelRange range = mat.range();
    if (range == KernelRange::signed_unit && abs(s) > 1) range = KernelRange::unrestricted;
    return SymmetricKernel(mat.arity(), mat.masses(), std::move(weights), range);
}

}  // namespace

CommonnessReport common_deficit(const Hypergraph& h, const SymmetricKernel& f) {
    if (f.range() != KernelRange::signed_unit)
        throw std::invalid_argument("common_deficit requires a kernel declared signed_unit");
    if (h.r != f.arity()) throw std::invalid_argument("kernel arity does not match uniformity");
    CommonnessReport rep;
    rep.scale = 1;
    Rational plus = t_density(h, shifted_kernel(f, true));
    Rational minus = t_density(h, shifted_kernel(f, false));
    rep.deficit = plus + minus - 2;
    if (h.edge_count() <= 20) {
        Rational even(0);
        int e = h.edge_count();
        for (unsigned long mask = 1; mask < (1ul << e); ++mask) {
            if (__builtin_popcountl(mask) % 2) continue;
            std::vector<int> idx;
            for (int i = 0; i < e; ++i)
                if ((mask >> i) & 1) idx.push_back(i);
            even += t_density(edge_subset(h, idx), f);
        }
        rep.even_sum = even;
        rep.cross_checked = true;
        if (rep.deficit != 2 * even)
            throw std::logic_error("deficit does not match twice the even subgraph sum");
    } else {
        rep.even_sum = rep.deficit / 2;
        rep.cross_checked = false;
    }
    rep.verdict = rep.deficit < 0 ? CommonVerdict::not_common : CommonVerdict::inconclusive;
    return rep;
}

EvenSubgraphClassification classify_even_subgraphs(const Hypergraph& h) {
    if (h.edge_count() > 24) throw ResourceError("classify_even_subgraphs limited to e(H) <= 24");
    EvenSubgraphClassification out;
    int e = h.edge_count();
    for (int size = 2; size <= e; size += 2) {
        std::vector<EvenSubgraphCandidate> found;
        std::vector<int> pick(size);
        for (int i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            if (!has_degree_one(h, pick)) {
                EvenSubgraphCandidate cand;
                cand.edge_indices = pick;
                found.push_back(std::move(cand));
            }
            int i = size - 1;
            while (i >= 0 && pick[i] == e - size + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!found.empty()) {
            out.two_m = size;
            // 2-connectivity on the support of each candidate
            for (auto& cand : found) {
                Hypergraph sub = edge_subset(h, cand.edge_indices);
                std::vector<int> support;
                std::vector<int> rename(h.n, -1);
                for (const auto& ed : sub.edges)
                    for (int v : ed)
                        if (rename[v] < 0) {
                            rename[v] = static_cast<int>(support.size());
                            support.push_back(v);
                        }
                std::vector<std::vector<int>> edges;
                for (const auto& ed : sub.edges) {
                    std::vector<int> ne;
                    for (int v : ed) ne.push_back(rename[v]);
                    std::sort(ne.begin(), ne.end());
                    edges.push_back(std::move(ne));
                }
                Hypergraph core(h.r, static_cast<int>(support.size()), std::move(edges));
                cand.two_connected = is_two_connected(core);
            }
            // isomorphism classes for small fixtures
            if (h.n <= 12) {
                std::vector<Hypergraph> reps;
                for (auto& cand : found) {
                    Hypergraph sub = edge_subset(h, cand.edge_indices);
                    bool matched = false;
                    for (std::size_t c = 0; c < reps.size(); ++c)
                        if (is_isomorphic(sub, reps[c])) {
                            cand.iso_class = static_cast<int>(c);
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        cand.iso_class = static_cast<int>(reps.size());
                        reps.push_back(sub);
                    }
                }
            } else {
                for (std::size_t i = 0; i < found.size(); ++i)
                    found[i].iso_class = static_cast<int>(i);
            }
            out.candidates = std::move(found);
            return out;
        }
    }
    out.two_m = 0;  // no even-size degree-one-free subgraph
    return out;
}

namespace {

std::vector<std::vector<int>> all_multisets(int atoms, int arity) {
    std::vector<std::vector<int>> out;
    std::vector<int> key(arity, 0);
    auto rec = [&](auto&& self, int pos, int lo) -> void {
        if (pos == arity) {
            out.push_back(key);
            return;
        }
        for (int a = lo; a < atoms; ++a) {
            key[pos] = a;
            self(self, pos + 1, a);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Weight parameterization for the float search: coordinates are either the
// multiset entries themselves, or coefficients over an exact basis of the
// zero-averaging subspace (the nullspace of the coordinate-averaging map).
struct SearchSpace {
    int arity;
    int atoms;
    std::vector<std::vector<int>> keys;         // all sorted multisets
    std::vector<std::vector<Rational>> basis;   // basis vectors over keys

    int dimension() const { return static_cast<int>(basis.size()); }

    std::map<std::vector<int>, Rational> build(const std::vector<Rational>& coeff) const {
        std::map<std::vector<int>, Rational> weights;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (coeff[b] == 0) continue;
            for (std::size_t m = 0; m < keys.size(); ++m)
                if (basis[b][m] != 0) weights[keys[m]] += coeff[b] * basis[b][m];
        }
        std::erase_if(weights, [](const auto& kv) { return kv.second == 0; });
        return weights;
    }
};

// Exact nullspace basis (uniform masses): for each (r-1)-multiset P, the
// constraint sum_z w(sorted(P+z)) = 0.
std::vector<std::vector<Rational>> zero_averaging_basis(int atoms, int arity,
                                                        const std::vector<std::vector<int>>& keys) {
    std::map<std::vector<int>, int> key_index;
    for (std::size_t i = 0; i < keys.size(); ++i) key_index[keys[i]] = static_cast<int>(i);
    auto prefixes = all_multisets(atoms, arity - 1);
    int rows = static_cast<int>(prefixes.size());
    int cols = static_cast<int>(keys.size());
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols, Rational(0)));
    for (int p = 0; p < rows; ++p)
        for (int z = 0; z < atoms; ++z) {
            std::vector<int> m = prefixes[p];
            m.push_back(z);
            std::sort(m.begin(), m.end());
            a[p][key_index[m]] += 1;
        }

    // Gauss-Jordan to reduced row echelon form
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int sel = -1;
        for (int i = row; i < rows; ++i)
            if (a[i][col] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(a[sel], a[row]);
        Rational inv = Rational(1) / a[row][col];
        for (int j = 0; j < cols; ++j) a[row][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational factor = a[i][col];
            for (int j = 0; j < cols; ++j) a[i][j] -= factor * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }

    std::vector<char> is_pivot(cols, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
            v[pivot_col[i]] = -a[i][free];
        // normalize so the largest entry has absolute value 1
        Rational scale(0);
        for (const auto& x : v) {
            Rational ax = abs(x);
            if (ax > scale) scale = ax;
        }
        for (auto& x : v) x /= scale;
        basis.push_back(std::move(v));
    }
    return basis;
}

SearchSpace make_search_space(int arity, int atoms, SearchConstraint constraint) {
    SearchSpace sp;
    sp.arity = arity;
    sp.atoms = atoms;
    sp.keys = all_multisets(atoms, arity);
    if (constraint == SearchConstraint::zero_averaging) {
        sp.basis = zero_averaging_basis(atoms, arity, sp.keys);
    } else {
        for (std::size_t i = 0; i < sp.keys.size(); ++i) {
            std::vector<Rational> v(sp.keys.size(), Rational(0));
            v[i] = 1;
            sp.basis.push_back(std::move(v));
        }
    }
    return sp;
}

Rational round_to_grid(double v) {
    // nearest multiple of 2^-16, clamped to [-1, 1]
    double scaled = std::round(v * 65536.0);
    if (scaled > 65536) scaled = 65536;
    if (scaled < -65536) scaled = -65536;
    Rational q(static_cast<long>(scaled), 65536);
    q.canonicalize();
    return q;
}

double float_density(const Hypergraph& g, const SearchSpace& sp, const std::vector<double>& coeff) {
    // evaluate at the rounded grid point, so the float objective matches the
    // exact confirmation target
    std::vector<Rational> rc(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) rc[i] = round_to_grid(coeff[i]);
    std::vector<Rational> masses(sp.atoms, rat(1, sp.atoms));
    SymmetricKernel kernel(sp.arity, std::move(masses), sp.build(rc), KernelRange::unrestricted);
    return t_density_float(g, kernel);
}

}  // namespace

namespace {

// Shared search core: minimizes the float sum of densities over the given
// graphs, then confirms the exact sum is negative.
std::optional<SymmetricKernel> search_core(const std::vector<Hypergraph>& graphs, int atom_count,
                                           int iterations, std::uint64_t seed,
                                           SearchConstraint constraint) {
    if (graphs.empty()) throw std::invalid_argument("witness search needs at least one graph");
    int arity = graphs[0].r;
    for (const auto& g : graphs) {
        if (g.r != arity) throw std::invalid_argument("witness search: mixed uniformity");
        if (g.n > 24) throw ResourceError("witness search limited to v(G) <= 24");
    }
    if (atom_count < 2 || atom_count > 4)
        throw std::invalid_argument("witness search uses 2 to 4 atoms");
    SearchSpace sp = make_search_space(arity, atom_count, constraint);
    if (sp.dimension() == 0) return std::nullopt;
    std::vector<Rational> masses(atom_count, rat(1, atom_count));

    auto objective = [&](const std::vector<double>& coeff) {
        double total = 0;
        for (const auto& g : graphs) total += float_density(g, sp, coeff);
        return total;
    };

    // For zero-averaging coefficients, entries of the built weights can reach
    // dimension-many units; keep the box small enough to stay within [-1,1].
    double box = constraint == SearchConstraint::none ? 1.0 : 1.0 / sp.dimension();

    for (int restart = 0; restart < iterations; ++restart) {
        Rng rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (restart + 1)));
        std::vector<double> coeff(sp.dimension());
        for (auto& c : coeff) c = (2 * rng.uniform01() - 1) * box;

        double current = objective(coeff);
        for (int sweep = 0; sweep < 40; ++sweep) {
            bool improved = false;
            for (int d = 0; d < sp.dimension(); ++d) {
                double best = current;
                double best_v = coeff[d];
                for (int step = -8; step <= 8; ++step) {
                    coeff[d] = step / 8.0 * box;
                    double val = objective(coeff);
                    if (val < best - 1e-15) {
                        best = val;
                        best_v = coeff[d];
                    }
                }
                coeff[d] = best_v;
                if (best < current - 1e-15) {
                    current = best;
                    improved = true;
                }
            }
            if (!improved) break;
        }
        if (current >= -1e-12) continue;

        // exact confirmation after rounding to the 2^-16 grid
        std::vector<Rational> rc(coeff.size());
        for (std::size_t i = 0; i < coeff.size(); ++i) rc[i] = round_to_grid(coeff[i]);
        auto weights = sp.build(rc);
        bool in_range = true;
        for (const auto& [key, value] : weights)
            if (abs(value) > 1) { in_range = false; break; }
        if (!in_range) continue;
        SymmetricKernel kernel(arity, masses, std::move(weights), KernelRange::signed_unit);
        if (constraint == SearchConstraint::zero_averaging && !is_zero_averaging(kernel)) continue;
        Rational exact(0);
        for (const auto& g : graphs) exact += t_density(g, kernel);
        if (exact < 0) return kernel;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SymmetricKernel> negativity_search(const Hypergraph& g, int atom_count,
                                                 int iterations, std::uint64_t seed,
                                                 SearchConstraint constraint) {
    return search_core({g}, atom_count, iterations, seed, constraint);
}

std::optional<SymmetricKernel> noncommon_witness_search(const Hypergraph& h,
                                                        const EvenSubgraphClassification& cls,
                                                        int atom_count, int iterations,
                                                        std::uint64_t seed) {
    if (cls.two_m == 0) return std::nullopt;
    std::vector<Hypergraph> candidates;
    for (const auto& cand : cls.candidates) candidates.push_back(edge_subset(h, cand.edge_indices));
    return search_core(candidates, atom_count, iterations, seed,
                       SearchConstraint::zero_averaging);
}

CombinedWitness combine_negativity_witnesses(const std::vector<Hypergraph>& gs,
                                             const std::vector<SymmetricKernel>& fs,
                                             const std::optional<SymmetricKernel>& f0) {
    std::size_t k = gs.size();
    if (k == 0 || fs.size() != k)
        throw std::invalid_argument("combine_negativity_witnesses needs one witness per graph");

    auto verify_all_negative = [&](const SymmetricKernel& f) {
        for (const auto& g : gs)
            if (t_density(g, f) >= 0) return false;
        return true;
    };

    // precondition: every f_j is negative on all other graphs, nonzero on its own
    std::vector<Rational> own(k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            Rational t = t_density(gs[i], fs[j]);
            if (i == j) own[j] = t;
            else if (t >= 0)
                throw std::invalid_argument("witness " + std::to_string(j) +
                                            " is not negative on graph " + std::to_string(i));
        }
        if (own[j] == 0)
            throw std::invalid_argument("witness " + std::to_string(j) +
                                        " vanishes on its own graph; perturb it first");
    }

    for (std::size_t j = 0; j < k; ++j)
        if (own[j] < 0) return {fs[j], "single_witness:" + std::to_string(j)};

    if (k % 2 == 0) {
        SymmetricKernel f = fs[0];
        for (std::size_t j = 1; j < k; ++j) f = tensor_product(f, fs[j]);
        if (!verify_all_negative(f))
            throw std::logic_error("even tensor combination failed exact verification");
        return {f, "even_tensor"};
    }

    if (!f0) throw std::invalid_argument("odd_case_requires_union_witness");
    std::vector<int> sign(k);
    int positives = 0;
    Rational product(1);
    for (std::size_t i = 0; i < k; ++i) {
        Rational t = t_density(gs[i], *f0);
        if (t == 0)
            throw std::invalid_argument("f0 vanishes on graph " + std::to_string(i) +
                                        "; perturb it first");
        sign[i] = t > 0 ? 1 : -1;
        if (sign[i] > 0) ++positives;
        product *= t;
    }
    if (product >= 0)
        throw std::invalid_argument("f0 is not negative on the disjoint union of the graphs");
    if (positives == 0) return {*f0, "union_witness"};

    SymmetricKernel f = *f0;
    for (std::size_t i = 0; i < k; ++i)
        if (sign[i] > 0) f = tensor_product(f, fs[i]);
    if (!verify_all_negative(f))
        throw std::logic_error("odd tensor combination failed exact verification");
    return {f, "union_tensor"};
}

SymmetricKernel levi_transfer(const SymmetricKernel& f, int r) {
    if (f.arity() != 2) throw std::invalid_argument("levi_transfer needs a 2-variable kernel");
    if (r < 2) throw std::invalid_argument("levi_transfer needs r >= 2");
    SymmetricKernel mat = f.is_explicit() ? f : f.materialized();
    int atoms = mat.atom_count();
    std::map<std::vector<int>, Rational> weights;
    std::vector<int> key(r, 0), pair(2, 0);
    auto rec = [&](auto&& self, int pos, int lo) -> void {
        if (pos == r) {
            Rational total(0);
            for (int y = 0; y < atoms; ++y) {
                Rational prod = mat.mass(y);
                for (int i = 0; i < r && prod != 0; ++i) {
                    pair[0] = std::min(key[i], y);
                    pair[1] = std::max(key[i], y);
                    prod *= mat.weight(pair);
                }
                total += prod;
            }
            if (total != 0) weights[key] = total;
            return;
        }
        for (int a = lo; a < atoms; ++a) {
            key[pos] = a;
            self(self, pos + 1, a);
        }
    };
    rec(rec, 0, 0);
    KernelRange range =
        mat.range() == KernelRange::unrestricted ? KernelRange::unrestricted : KernelRange::signed_unit;
    return SymmetricKernel(r, mat.masses(), std::move(weights), range);
}

NonCommonResult check_noncommon(const Hypergraph& h, const SymmetricKernel& f,
                                const EvenSubgraphClassification& classification) {
    NonCommonResult res{NonCommonResult::Status::leading_term_nonnegative, std::nullopt, Rational(0)};
    if (f.range() != KernelRange::signed_unit)
        throw std::invalid_argument("check_noncommon requires a signed_unit kernel");
    if (!is_zero_averaging(f))
        throw std::invalid_argument("check_noncommon requires a zero-averaging kernel");
    if (classification.two_m == 0 || !classification.smaller_even_sizes_all_degenerate)
        throw std::invalid_argument("classification does not certify a leading even size");

    Rational s(0);
    for (const auto& cand : classification.candidates)
        s += t_density(edge_subset(h, cand.edge_indices), f);
    res.leading_sum = s;
    if (s >= 0) {
        res.status = NonCommonResult::Status::leading_term_nonnegative;
        return res;
    }

    // all degree-one-free even subgraphs carry the epsilon expansion; the
    // degenerate ones vanish exactly for zero-averaging f
    struct Term {
        int edges;
        Rational value;
    };
    std::vector<Term> terms;
    int e = h.edge_count();
    if (e > 20) throw ResourceError("check_noncommon expansion limited to e(H) <= 20");
    for (unsigned long mask = 1; mask < (1ul << e); ++mask) {
        int bits = __builtin_popcountl(mask);
        if (bits % 2) continue;
        std::vector<int> idx;
        for (int i = 0; i < e; ++i)
            if ((mask >> i) & 1) idx.push_back(i);
        if (has_degree_one(h, idx)) continue;
        terms.push_back({bits, t_density(edge_subset(h, idx), f)});
    }

    Rational eps(1, 2);
    for (int step = 0; step < 60; ++step) {
        Rational even(0);
        for (const auto& term : terms) even += pow_rational(eps, term.edges) * term.value;
        if (even < 0) {
            CommonnessReport rep;
            rep.scale = eps;
            rep.even_sum = even;
            rep.deficit = 2 * even;
            // cross-check against the direct evaluation at eps * f
            SymmetricKernel scaled = scale_kernel(f, eps);
            CommonnessReport direct = common_deficit(h, scaled);
            if (direct.deficit != rep.deficit)
                throw std::logic_error("epsilon expansion disagrees with the direct deficit");
            rep.cross_checked = true;
            rep.verdict = CommonVerdict::not_common;
            res.status = NonCommonResult::Status::not_common;
            res.report = rep;
            return res;
        }
        eps /= 2;
    }
    res.status = NonCommonResult::Status::epsilon_search_exhausted;
    return res;
}

std::string commonness_report_to_json(const CommonnessReport& rep) {
    nlohmann::json j;
    j["deficit"] = to_string(rep.deficit);
    j["even_sum"] = to_string(rep.even_sum);
    j["scale"] = to_string(rep.scale);
    j["cross_checked"] = rep.cross_checked;
    j["verdict"] = rep.verdict == CommonVerdict::not_common ? "not_common" : "inconclusive";
    return j.dump();
}

std::string classification_to_json(const EvenSubgraphClassification& c) {
    nlohmann::json j;
    j["two_m"] = c.two_m;
    j["smaller_even_sizes_all_degenerate"] = c.smaller_even_sizes_all_degenerate;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& cand : c.candidates) {
        nlohmann::json cj;
        cj["edges"] = cand.edge_indices;
        cj["two_connected"] = cand.two_connected;
        cj["iso_class"] = cand.iso_class;
        if (cand.witness_ref) cj["witness_ref"] = *cand.witness_ref;
        arr.push_back(std::move(cj));
    }
    j["candidates"] = std::move(arr);
    return j.dump();
}

}  // namespace sidcert
