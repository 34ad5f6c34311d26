#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sidcert/hypergraph.hpp"
#include "sidcert/rational.hpp"

namespace sidcert {

/// Coefficients kappa_1..kappa_E of the census polynomial
/// P_H(x) = sum_i kappa_i(H) x^i, where kappa_m counts m-edge subgraphs of H
/// with no vertex of degree exactly one (degree zero is allowed).
struct KappaPolynomial {
    std::vector<BigInt> kappa;  // kappa[i] holds kappa_{i+1}

    int max_degree() const { return static_cast<int>(kappa.size()); }
    const BigInt& coefficient(int m) const;  // kappa_m, 1-based
    bool operator==(const KappaPolynomial&) const = default;
};

Rational eval_poly(const KappaPolynomial& p, const Rational& x);

// Exact enumeration. Budget: e(H) <= 34, enforced with a ResourceError.
BigInt kappa_bruteforce(const Hypergraph& h, int m);
KappaPolynomial kappa_poly_bruteforce(const Hypergraph& h);

// Closed forms for tight-cycle families.
KappaPolynomial kappa_closed_c3k(int k);          // C_{3k}^{(3)}
KappaPolynomial kappa_closed_c3k_minus_e(int k);  // C_{3k}^{(3)} - e
KappaPolynomial kappa_closed_c2r(int r);          // C_{2r}^{(r)}

// Number of m-element subsets of Z_{2r} with at least one bad element, where
// a cyclically ordered element x_i is good when x_{i+1}-x_{i-1} lies in
// {2,...,r} mod 2r. Brute-force enumeration; 4 <= m <= 2r.
BigInt count_bad_subsets(int r, int m);

// Census of C_ell^{(r)} minus the edges in skip_edges, via a cyclic
// transfer-matrix DP over edge-inclusion windows of width r-1. Exact and
// coefficientwise equal to brute force. Budget: r <= 8, ell <= 64.
KappaPolynomial kappa_tight_cycle_dp(int ell, int r, const std::set<int>& skip_edges = {});

struct NegativityCertificate {
    Rational point;       // x* in [-1, 0]
    Rational value;       // P(x*) < 0
    std::string provenance;
};

// Tries the probe points first (ignoring those outside [-1,0]), then the grid
// {-j/grid_n : j = 1..grid_n}; returns the first point with a strictly
// negative value. A nullopt result is not a proof of non-negativity.
std::optional<NegativityCertificate> find_negative_point(const KappaPolynomial& p,
                                                         const std::vector<Rational>& probes,
                                                         int grid_n);

// Probe catalogue for the tight-cycle families: full cycles C_{kr}^{(r)} and
// single-edge deletions. Points outside [-1,0] are filtered by the caller.
std::vector<Rational> probe_catalogue(int k, int r, bool minus_edge);

}  // namespace sidcert
