#include "doctest.h"

#include "sidcert/common.hpp"
#include "sidcert/witness.hpp"

using namespace sidcert;

namespace {

// Diagonal 2-variable kernel with uniform masses: t_{C_k} = sum (lambda_i/a)^k
SymmetricKernel diag_kernel(const std::vector<Rational>& lambda) {
    int a = static_cast<int>(lambda.size());
    std::vector<Rational> masses(a, rat(1, a));
    std::map<std::vector<int>, Rational> w;
    for (int i = 0; i < a; ++i)
        if (lambda[i] != 0) w[{i, i}] = lambda[i];
    return SymmetricKernel(2, std::move(masses), std::move(w), KernelRange::signed_unit);
}

SymmetricKernel zero_avg_2kernel() {
    std::map<std::vector<int>, Rational> w{{{0, 0}, rat(1, 2)}, {{1, 1}, rat(1, 2)},
                                           {{0, 1}, rat(-1, 2)}};
    return SymmetricKernel(2, {rat(1, 2), rat(1, 2)}, w, KernelRange::signed_unit);
}

}  // namespace

TEST_CASE("common deficit basics") {
    Hypergraph lt = make_loose_cycle(3, 3);
    SymmetricKernel zero(3, {rat(1, 2), rat(1, 2)}, {}, KernelRange::signed_unit);
    CommonnessReport flat = common_deficit(lt, zero);
    CHECK(flat.deficit == 0);
    CHECK(flat.even_sum == 0);
    CHECK(flat.cross_checked);
    CHECK(flat.verdict == CommonVerdict::inconclusive);

    // mean-zero kernel on a single edge: both shifted densities are 1
    CommonnessReport single = common_deficit(make_single_edge(3), g_eps_kernel(3, rat(1, 3)));
    CHECK(single.deficit == 0);

    // the identity deficit = 2 * even_sum is cross-checked internally
    CommonnessReport c6 = common_deficit(make_tight_cycle(6, 3), g_eps_kernel(3, rat(1, 4)));
    CHECK(c6.cross_checked);
    CHECK(c6.deficit == 2 * c6.even_sum);
    CHECK(c6.deficit > 0);  // kappa subgraphs of C6 all contribute +eps^6

    CHECK_THROWS_AS(common_deficit(lt, SymmetricKernel::constant(3, Rational(1))),
                    std::invalid_argument);  // wrong declared range
}

TEST_CASE("even subgraph classification") {
    EvenSubgraphClassification grid = classify_even_subgraphs(make_grid(3));
    CHECK(grid.two_m == 6);
    REQUIRE(grid.candidates.size() == 1);
    CHECK(grid.candidates[0].edge_indices == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(grid.candidates[0].two_connected);
    CHECK(grid.smaller_even_sizes_all_degenerate);

    EvenSubgraphClassification ho = classify_even_subgraphs(make_half_octahedron());
    CHECK(ho.two_m == 4);
    REQUIRE(ho.candidates.size() == 1);
    CHECK(ho.candidates[0].two_connected);

    EvenSubgraphClassification lt = classify_even_subgraphs(make_loose_cycle(3, 3));
    CHECK(lt.two_m == 0);
    CHECK(lt.candidates.empty());

    // K4: the smallest even degree-one-free subgraphs are the three 4-cycles
    Hypergraph k4(2, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    EvenSubgraphClassification cls = classify_even_subgraphs(k4);
    CHECK(cls.two_m == 4);
    CHECK(cls.candidates.size() == 3);
    for (const auto& cand : cls.candidates) {
        CHECK(cand.two_connected);
        CHECK(cand.iso_class == 0);  // all isomorphic to C4
    }
}

TEST_CASE("negativity search finds and verifies witnesses") {
    Hypergraph k3 = make_loose_cycle(3, 2);
    auto w = negativity_search(k3, 2, 5, 1);
    REQUIRE(w.has_value());
    CHECK(t_density(k3, *w) < 0);
    CHECK(w->range() == KernelRange::signed_unit);

    // C4 is positive; the search must come back empty-handed
    CHECK_FALSE(negativity_search(make_loose_cycle(4, 2), 2, 8, 3).has_value());

    // Levi graph of the half-octahedron: best effort only; at these budgets
    // nothing is found and the search reports that honestly
    auto levi_attempt = negativity_search(levi_graph(make_half_octahedron()), 3, 4, 7);
    if (levi_attempt) CHECK(t_density(levi_graph(make_half_octahedron()), *levi_attempt) < 0);

    // witnesses survive a serialization round trip
    SymmetricKernel reloaded = kernel_from_json(kernel_to_json(*w));
    CHECK(t_density(k3, reloaded) == t_density(k3, *w));
}

TEST_CASE("zero-averaging search certifies the half-octahedron non-positive") {
    Hypergraph ho = make_half_octahedron();
    auto w = negativity_search(ho, 4, 40, 1, SearchConstraint::zero_averaging);
    REQUIRE(w.has_value());
    CHECK(is_zero_averaging(*w));
    Rational t = t_density(ho, *w);
    CHECK(t < 0);

    SymmetricKernel reloaded = kernel_from_json(kernel_to_json(*w));
    CHECK(is_zero_averaging(reloaded));
    CHECK(t_density(ho, reloaded) == t);
}

TEST_CASE("combining witnesses") {
    Hypergraph k2 = make_single_edge(2);
    Hypergraph k3 = make_loose_cycle(3, 2);
    Hypergraph c5 = make_loose_cycle(5, 2);

    SUBCASE("a single graph just returns its witness") {
        SymmetricKernel neg = SymmetricKernel::constant(2, rat(-1, 2), 2);
        CombinedWitness cw = combine_negativity_witnesses({k3}, {neg}, std::nullopt);
        CHECK(cw.construction == "single_witness:0");
        CHECK(t_density(k3, cw.kernel) == rat(-1, 8));
    }

    SUBCASE("a self-negative witness is returned directly") {
        SymmetricKernel neg = SymmetricKernel::constant(2, rat(-1, 2), 2);
        CombinedWitness cw = combine_negativity_witnesses({k3, c5}, {neg, neg}, std::nullopt);
        CHECK(cw.construction == "single_witness:0");
        CHECK(t_density(k3, cw.kernel) < 0);
        CHECK(t_density(c5, cw.kernel) < 0);
    }

    SUBCASE("even count with self-positive witnesses tensors together") {
        std::map<std::vector<int>, Rational> m1{{{0, 0}, Rational(1)},
                                                {{0, 1}, rat(-3, 5)},
                                                {{1, 1}, rat(-1, 5)}};
        SymmetricKernel f1(2, {rat(1, 2), rat(1, 2)}, m1, KernelRange::signed_unit);
        std::map<std::vector<int>, Rational> m2{{{0, 0}, Rational(-1)},
                                                {{0, 1}, rat(3, 5)},
                                                {{1, 1}, rat(1, 5)}};
        SymmetricKernel f2(2, {rat(1, 2), rat(1, 2)}, m2, KernelRange::signed_unit);
        CHECK(t_density(k3, f1) == rat(29, 125));
        CHECK(t_density(k2, f1) == rat(-1, 10));
        CombinedWitness cw = combine_negativity_witnesses({k3, k2}, {f1, f2}, std::nullopt);
        CHECK(cw.construction == "even_tensor");
        CHECK(t_density(k3, cw.kernel) == rat(29, 125) * rat(-29, 125));
        CHECK(t_density(k2, cw.kernel) == rat(-1, 100));
    }

    // per-graph witnesses for [K2, K3, C5], each positive on its own graph
    SymmetricKernel f1 = diag_kernel({rat(-9, 10), rat(1, 2), rat(1, 2)});
    std::vector<Rational> lam2{Rational(-1), rat(17, 20), rat(17, 20)};
    for (int i = 0; i < 8; ++i) lam2.push_back(rat(-1, 10));
    SymmetricKernel f2 = diag_kernel(lam2);
    SymmetricKernel f3 = diag_kernel({Rational(1), rat(-4, 5), rat(-4, 5)});

    SUBCASE("odd count where the union witness already works") {
        SymmetricKernel f0 = SymmetricKernel::constant(2, rat(-1, 2), 2);
        CombinedWitness cw = combine_negativity_witnesses({k2, k3, c5}, {f1, f2, f3}, f0);
        CHECK(cw.construction == "union_witness");
        CHECK(t_density(c5, cw.kernel) == rat(-1, 32));
    }

    SUBCASE("odd count with mixed signs tensors the union witness in") {
        SymmetricKernel f0 = diag_kernel({rat(-9, 10), rat(3, 4), rat(3, 4)});
        CHECK(t_density(k2, f0) == rat(1, 15));
        CHECK(t_density(k3, f0) > 0);
        CHECK(t_density(c5, f0) < 0);
        CombinedWitness cw = combine_negativity_witnesses({k2, k3, c5}, {f1, f2, f3}, f0);
        CHECK(cw.construction == "union_tensor");
        CHECK(t_density(k2, cw.kernel) < 0);
        CHECK(t_density(k3, cw.kernel) < 0);
        CHECK(t_density(c5, cw.kernel) < 0);
    }

    SUBCASE("odd count without a union witness is an error") {
        CHECK_THROWS_WITH_AS(
            combine_negativity_witnesses({k2, k3, c5}, {f1, f2, f3}, std::nullopt),
            "odd_case_requires_union_witness", std::invalid_argument);
    }

    SUBCASE("violated preconditions are rejected") {
        SymmetricKernel pos = SymmetricKernel::constant(2, rat(1, 2), 2);
        CHECK_THROWS_AS(combine_negativity_witnesses({k3, c5}, {pos, pos}, std::nullopt),
                        std::invalid_argument);
    }
}

TEST_CASE("levi transfer identity") {
    Rng rng(99);
    int checked = 0;
    for (int trial = 0; trial < 8; ++trial) {
        // random signed 2-kernel on 2 or 3 atoms
        int atoms = 2 + trial % 2;
        std::vector<Rational> masses(atoms, rat(1, atoms));
        std::map<std::vector<int>, Rational> w;
        for (int i = 0; i < atoms; ++i)
            for (int j = i; j < atoms; ++j) {
                long num = static_cast<long>(rng.uniform01() * 9) - 4;
                if (num) w[{i, j}] = rat(num, 4);
            }
        SymmetricKernel f(2, masses, w, KernelRange::unrestricted);
        for (const Hypergraph& h : {make_single_edge(3), make_loose_cycle(3, 3),
                                    make_half_octahedron()}) {
            SymmetricKernel transferred = levi_transfer(f, 3);
            CHECK(t_density(h, transferred) == t_density(levi_graph(h), f));
            ++checked;
        }
    }
    CHECK(checked >= 20);

    // zero-averaging carries over
    SymmetricKernel h3 = levi_transfer(zero_avg_2kernel(), 3);
    CHECK(is_zero_averaging(h3));

    // the zero kernel transfers to the zero kernel
    SymmetricKernel z = levi_transfer(SymmetricKernel::constant(2, Rational(0), 2), 3);
    CHECK(z.table().empty());
}

TEST_CASE("non-commonness of the half-octahedron") {
    Hypergraph ho = make_half_octahedron();
    auto witness = negativity_search(ho, 4, 40, 1, SearchConstraint::zero_averaging);
    REQUIRE(witness.has_value());
    EvenSubgraphClassification cls = classify_even_subgraphs(ho);
    NonCommonResult res = check_noncommon(ho, *witness, cls);
    REQUIRE(res.status == NonCommonResult::Status::not_common);
    CHECK(res.leading_sum < 0);
    REQUIRE(res.report.has_value());
    CHECK(res.report->deficit < 0);
    CHECK(res.report->deficit == 2 * res.report->even_sum);
    CHECK(res.report->cross_checked);
    CHECK(res.report->verdict == CommonVerdict::not_common);
}

TEST_CASE("check_noncommon rejects nonnegative leading sums") {
    // on C6 every 4-edge kappa subgraph evaluates to +eps^6 under g_eps
    Hypergraph c6 = make_tight_cycle(6, 3);
    EvenSubgraphClassification cls = classify_even_subgraphs(c6);
    CHECK(cls.two_m == 4);
    NonCommonResult res = check_noncommon(c6, g_eps_kernel(3, rat(1, 3)), cls);
    CHECK(res.status == NonCommonResult::Status::leading_term_nonnegative);
    CHECK(res.leading_sum > 0);

    // a witness that is not zero-averaging is rejected outright
    SymmetricKernel skew(3, {rat(1, 2), rat(1, 2)}, {{{0, 0, 0}, rat(1, 2)}},
                         KernelRange::signed_unit);
    CHECK_THROWS_AS(check_noncommon(c6, skew, cls), std::invalid_argument);
}

TEST_CASE("disjoint union densities multiply") {
    Rng rng(4242);
    for (int trial = 0; trial < 6; ++trial) {
        std::map<std::vector<int>, Rational> w;
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                for (int k = j; k < 2; ++k) {
                    long num = static_cast<long>(rng.uniform01() * 9) - 4;
                    if (num) w[{i, j, k}] = rat(num, 4);
                }
        SymmetricKernel f(3, {rat(1, 2), rat(1, 2)}, w, KernelRange::unrestricted);
        Hypergraph a = make_loose_cycle(3, 3);
        Hypergraph b = make_single_edge(3);
        Rational ta = t_density(a, f), tb = t_density(b, f);
        CHECK(t_density(disjoint_union({a, b}), f) == ta * tb);
        // components of even multiplicity square away
        CHECK(t_density(disjoint_union({a, a}), f) == ta * ta);
        CHECK(t_density(disjoint_union({a, a}), f) >= 0);
    }
}
