#include "doctest.h"

#include <cmath>

#include "sidcert/witness.hpp"

using namespace sidcert;

TEST_CASE("linear girth kernel") {
    SymmetricKernel f = linear_girth_kernel(3, rat(1, 3));
    std::vector<int> ppp{0, 0, 0}, ppm{0, 0, 1}, pmm{0, 1, 1}, mmm{1, 1, 1};
    CHECK(f.weight(ppp) == 0);
    CHECK(f.weight(ppm) == rat(4, 3));
    CHECK(f.weight(pmm) == rat(4, 3));
    CHECK(f.weight(mmm) == 0);
    CHECK(f.edge_density() == 1);
    CHECK(f.range() == KernelRange::nonnegative);

    CHECK_THROWS_AS(linear_girth_kernel(3, rat(1, 2)), std::invalid_argument);  // c > 1/C(3,2)
    CHECK_THROWS_AS(linear_girth_kernel(3, Rational(0)), std::invalid_argument);

    // averaging out the last coordinate leaves -c * e2 of the remaining values
    for (int r : {3, 4}) {
        Rational c = rat(1, 7);
        SymmetricKernel k = linear_girth_kernel(r, c);
        for (int j = 0; j <= r - 1; ++j) {
            std::vector<int> prefix(r - 1, 0);
            for (int i = 0; i < j; ++i) prefix[r - 2 - i] = 1;
            std::sort(prefix.begin(), prefix.end());
            long s = (r - 1) - 2 * j;  // sum of +-1 values
            Rational e2 = rat(s * s - (r - 1), 2);
            Rational avg(0);
            std::vector<int> full(prefix);
            full.push_back(0);
            for (int a = 0; a < 2; ++a) {
                full.back() = a;
                avg += k.mass(a) * (k.weight(full) - 1);
            }
            CHECK(avg == -c * e2);
        }
    }
}

TEST_CASE("s parity kernel") {
    // s = 2 coincides with the linear girth kernel
    SymmetricKernel a = s_parity_kernel(4, 2, rat(1, 6));
    SymmetricKernel b = linear_girth_kernel(4, rat(1, 6));
    CHECK(a.table() == b.table());

    SymmetricKernel f = s_parity_kernel(3, 3, rat(1, 2));
    std::vector<int> ppp{0, 0, 0}, ppm{0, 0, 1};
    CHECK(f.weight(ppp) == rat(1, 2));
    CHECK(f.weight(ppm) == rat(3, 2));

    CHECK(s_parity_kernel(4, 3, rat(1, 10)).edge_density() == 1);
    CHECK(s_parity_kernel(5, 4, rat(1, 12)).edge_density() == 1);
    CHECK_THROWS_AS(s_parity_kernel(3, 4, rat(1, 10)), std::invalid_argument);
}

TEST_CASE("f_eps atoms and moments") {
    UnaryAtoms f = feps_atoms(rat(1, 2));
    CHECK(f.atoms[0].first == rat(2, 3));
    CHECK(f.atoms[1].first == rat(1, 3));
    CHECK(f.moment(1) == 0);

    for (long den : {2L, 7L, 10L}) {
        Rational eps = rat(1, den);
        UnaryAtoms g = feps_atoms(eps);
        CHECK(g.moment(1) == 0);
        CHECK(g.moment(2) == eps);  // exactly eps
        // third moment (eps^3 - eps)/(1 + eps), negative below 1
        Rational third = (pow_rational(eps, 3) - eps) / (Rational(1) + eps);
        CHECK(g.moment(3) == third);
        CHECK(g.moment(3) < 0);
    }
    CHECK_THROWS_AS(feps_atoms(Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(feps_atoms(Rational(0)), std::invalid_argument);
}

TEST_CASE("product kernel densities factor into vertex moments") {
    // independent oracle: t_G(g_eps) = prod_v moment(deg(v))
    Rational eps = rat(1, 5);
    UnaryAtoms f = feps_atoms(eps);
    SymmetricKernel g = g_eps_kernel(3, eps);
    for (const Hypergraph& h :
         {make_tight_cycle(6, 3), make_loose_cycle(3, 3), make_single_edge(3), make_grid(3)}) {
        Rational expected(1);
        for (int d : h.degrees()) expected *= f.moment(d);
        CHECK(t_density(h, g) == expected);
    }
}

TEST_CASE("h kernel") {
    for (auto [r, eps, c] : std::vector<std::tuple<int, Rational, Rational>>{
             {3, rat(1, 2), rat(1, 2)}, {3, rat(1, 7), Rational(1)}, {5, rat(1, 3), rat(2, 5)}}) {
        SymmetricKernel h = h_kernel(r, eps, c);
        CHECK(h.edge_density() == 1);
        CHECK(h.range() == KernelRange::nonnegative);
    }
    SymmetricKernel h = h_kernel(3, rat(1, 2), rat(1, 2));
    std::vector<int> ppp{0, 0, 0};
    CHECK(h.weight(ppp) == rat(17, 16));  // 1 + (1/2)(1/8)

    CHECK_THROWS_AS(h_kernel(3, rat(1, 2), Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(h_kernel(3, Rational(2), rat(1, 2)), std::invalid_argument);
}

TEST_CASE("h kernel expansion over subgraphs") {
    // t_H(h_{eps,c}) = 1 + sum over nonempty G <= H of c^{e(G)} t_G(g_eps)
    Rational eps = rat(1, 3), c = rat(2, 3);
    for (const Hypergraph& h : {make_tight_cycle(6, 3), make_loose_cycle(3, 3)}) {
        SymmetricKernel hk = h_kernel(3, eps, c);
        SymmetricKernel gk = g_eps_kernel(3, eps);
        Rational expansion(1);
        int e = h.edge_count();
        for (unsigned long mask = 1; mask < (1ul << e); ++mask) {
            std::vector<int> idx;
            for (int i = 0; i < e; ++i)
                if ((mask >> i) & 1) idx.push_back(i);
            Hypergraph sub = edge_subset(h, idx);
            // odd uniformity forces e(G) and sum of degrees / r to share parity
            int degsum = 0;
            for (int d : sub.degrees()) degsum += d;
            CHECK(degsum == 3 * sub.edge_count());
            expansion += pow_rational(c, idx.size()) * t_density(sub, gk);
        }
        CHECK(t_density(h, hk) == expansion);
    }
}

TEST_CASE("certify the loose triangle against the linear girth kernel") {
    Hypergraph lt = make_loose_cycle(3, 3);
    for (long den : {3L, 6L, 12L}) {
        Rational c = rat(1, den);
        SidorenkoCertificate cert = certify_non_sidorenko(lt, linear_girth_kernel(3, c));
        CHECK(cert.t_h == Rational(1) - pow_rational(c, 3));
        CHECK(cert.edge_density == 1);
        CHECK(cert.rhs == 1);
        CHECK(cert.margin == pow_rational(c, 3));
        CHECK(cert.verdict == SidorenkoVerdict::not_sidorenko);
    }

    SidorenkoCertificate flat = certify_non_sidorenko(lt, SymmetricKernel::constant(3, rat(1, 2)));
    CHECK(flat.margin == 0);
    CHECK(flat.verdict == SidorenkoVerdict::inconclusive_witness);

    CHECK_THROWS_AS(certify_non_sidorenko(lt, g_eps_kernel(3, rat(1, 2))),
                    std::invalid_argument);  // signed kernel rejected

    // the margin is the same exact rational under every evaluation strategy
    SymmetricKernel w = linear_girth_kernel(3, rat(1, 6));
    Rational reference = t_density(lt, w, Strategy::bruteforce);
    for (Strategy s : {Strategy::variable_elimination, Strategy::band_dp, Strategy::automatic})
        CHECK(t_density(lt, w, s) == reference);
}

TEST_CASE("girth coefficient matches the shortest cycle count") {
    // t_H(linear girth kernel) = 1 - K c^g for these loose cycles
    for (int g : {3, 5})
        for (int r : {3, 4}) {
            Hypergraph h = make_loose_cycle(g, r);
            GirthReport rep = berge_girth(h);
            REQUIRE(rep.girth == g);
            Rational k1, k2;
            Rational c1 = rat(1, 8), c2 = rat(1, 16);
            k1 = (Rational(1) - t_density(h, linear_girth_kernel(r, c1))) / pow_rational(c1, g);
            k2 = (Rational(1) - t_density(h, linear_girth_kernel(r, c2))) / pow_rational(c2, g);
            CHECK(k1 == k2);
            CHECK(k1 == Rational(static_cast<long>(rep.shortest_cycle_count)));
        }
}

TEST_CASE("auto witness on the catalogued tight cycles") {
    WitnessResult c6 = auto_witness_tight_cycle(make_tight_cycle(6, 3));
    REQUIRE(c6.status == WitnessStatus::ok);
    CHECK(c6.certificate->h_params->c == rat(2, 3));
    CHECK(c6.certificate->margin > 0);
    CHECK(c6.negative_point->value == rat(-80, 729));

    WitnessResult c9e = auto_witness_tight_cycle(remove_edge(make_tight_cycle(9, 3), 0));
    REQUIRE(c9e.status == WitnessStatus::ok);
    CHECK(c9e.certificate->h_params->c == rat(2, 3));

    WitnessResult c10 = auto_witness_tight_cycle(make_tight_cycle(10, 5));
    REQUIRE(c10.status == WitnessStatus::ok);
    CHECK(c10.certificate->h_params->c == rat(2, 5));

    // halving the found epsilon still certifies (stability)
    auto params = *c6.certificate->h_params;
    SidorenkoCertificate again = certify_non_sidorenko(
        c6.certificate->hypergraph, h_kernel(params.r, params.eps / 2, params.c));
    CHECK(again.verdict == SidorenkoVerdict::not_sidorenko);

    CHECK_THROWS_AS(auto_witness_tight_cycle(make_tight_cycle(8, 4)), std::invalid_argument);
    CHECK_THROWS_AS(auto_witness_tight_cycle(make_grid(3)), std::invalid_argument);
}

TEST_CASE("certificates survive serialization") {
    WitnessResult res = auto_witness_tight_cycle(make_tight_cycle(6, 3));
    REQUIRE(res.status == WitnessStatus::ok);
    std::string json = certificate_to_json(*res.certificate);
    SidorenkoCertificate parsed = certificate_from_json(json);
    CHECK(reverify_certificate(parsed));
    CHECK(certificate_to_json(parsed) == json);

    SidorenkoCertificate direct =
        certify_non_sidorenko(make_loose_cycle(3, 3), linear_girth_kernel(3, rat(1, 3)));
    SidorenkoCertificate direct_parsed = certificate_from_json(certificate_to_json(direct));
    CHECK(reverify_certificate(direct_parsed));

    // tampering breaks re-verification
    direct_parsed.margin += rat(1, 1000000);
    CHECK_FALSE(reverify_certificate(direct_parsed));
}

TEST_CASE("deletion bound arithmetic") {
    DeletionBoundReport synth =
        deletion_bound_from_densities(3, 6, 3, rat(1, 2), rat(1, 16), 4);
    CHECK(synth.gain);
    CHECK(synth.c_prime == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(synth.c == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(synth.baseline_exponent == doctest::Approx(1.5));
    CHECK(synth.improved_exponent == doctest::Approx(1.75));

    Hypergraph lt = make_loose_cycle(3, 3);
    DeletionBoundReport rep = deletion_bound(lt, linear_girth_kernel(3, rat(1, 3)));
    CHECK(rep.alpha0 == 1);
    CHECK(rep.beta0 == rat(26, 27));
    CHECK(rep.gain);
    double expected = std::log(27.0 / 26.0) / std::log(2.0);
    CHECK(rep.c_prime == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.improved_exponent - rep.baseline_exponent ==
          doctest::Approx(rep.c_prime / 2).epsilon(1e-12));
    CHECK(rep.size_condition_met);  // 26/27 >= 2^{-3}

    // boundary: a constant kernel gives beta0 = alpha0^{e(H)} exactly
    DeletionBoundReport flat = deletion_bound(lt, SymmetricKernel::constant(3, rat(1, 2), 2));
    CHECK_FALSE(flat.gain);
    CHECK(flat.c_prime == 0);
}

TEST_CASE("tight cycle census dispatch") {
    CHECK(kappa_tight_cycle(6, 3, {}) == kappa_closed_c2r(3));
    CHECK(kappa_tight_cycle(9, 3, {0}).kappa == kappa_closed_c3k_minus_e(3).kappa);
    // the r = 9 row is out of the DP's range and falls back to enumeration
    KappaPolynomial big = kappa_tight_cycle(27, 9, {});
    CHECK(big.coefficient(27) == 1);
    CHECK(big.coefficient(5) == 0);
    CHECK(big.coefficient(6) == 36);
}

TEST_CASE("scan of small tight cycles") {
    std::vector<ScanRow> rows = scan_tight_cycles(12);
    REQUIRE(rows.size() == 4);  // (r=3, k=2..4) and (r=5, k=2)
    for (const auto& row : rows) {
        REQUIRE(row.negative_point.has_value());
        CHECK(row.negative_point->value < 0);
        CHECK(row.certificate_status == "ok");
    }
    CHECK(rows[0].k == 2);
    CHECK(rows[0].r == 3);
    CHECK(rows[0].negative_point->point == rat(-2, 3));
    CHECK(rows[0].negative_point->value == rat(-80, 729));
    CHECK(rows[0].method == "closed");
    CHECK(rows[1].method == "dp");

    CHECK_THROWS_AS(scan_tight_cycles(43), std::invalid_argument);
}
