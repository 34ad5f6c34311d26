#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sidcert/density.hpp"
#include "sidcert/hypergraph.hpp"
#include "sidcert/kappa.hpp"
#include "sidcert/kernel.hpp"
#include "sidcert/rational.hpp"

namespace sidcert {

// Two-atom kernel on {+1,-1} with uniform masses and edge weight
// 1 - c * sum_{i<j} x_i x_j. Nonnegative for 0 < c <= 1/C(r,2); edge density
// is exactly 1.
SymmetricKernel linear_girth_kernel(int r, const Rational& c);

// Generalization weighting by the degree-s elementary symmetric polynomial:
// 1 - c * sum_{i_1<...<i_s} x_{i_1}...x_{i_s}, for 2 <= s <= r and
// 0 < c <= 1/C(r,s).
SymmetricKernel s_parity_kernel(int r, int s, const Rational& c);

/// One-variable weighted atom space: value eps with mass 1/(1+eps) and value
/// -1 with mass eps/(1+eps). Mean is exactly zero.
struct UnaryAtoms {
    std::vector<std::pair<Rational, Rational>> atoms;  // (mass, value)
    Rational moment(unsigned d) const;
};

UnaryAtoms feps_atoms(const Rational& eps);

// Product kernel g_eps(x_1..x_r) = prod f_eps(x_i), as a signed 2-atom kernel.
SymmetricKernel g_eps_kernel(int r, const Rational& eps);

// h = 1 + c * g_eps. Nonnegative for 0 < c <= 1 (validated exactly at
// construction); edge density is exactly 1.
SymmetricKernel h_kernel(int r, const Rational& eps, const Rational& c);

enum class SidorenkoVerdict { not_sidorenko, inconclusive_witness };

struct HKernelParams {
    int r;
    Rational eps;
    Rational c;
};

struct SidorenkoCertificate {
    Hypergraph hypergraph;
    std::optional<SymmetricKernel> kernel;     // explicit witness, when given
    std::optional<HKernelParams> h_params;     // or h-family construction
    Rational t_h;           // lhs
    Rational edge_density;  // t_{K_r}
    Rational rhs;           // edge_density^{e(H)}
    Rational margin;        // rhs - lhs; > 0 certifies failure
    SidorenkoVerdict verdict = SidorenkoVerdict::inconclusive_witness;
};

// Exact check of t_H(W) < t_{K_r}(W)^{e(H)} for a nonnegative kernel.
SidorenkoCertificate certify_non_sidorenko(const Hypergraph& h, const SymmetricKernel& w);

enum class WitnessStatus { ok, criterion_inconclusive, epsilon_search_exhausted };

struct WitnessResult {
    WitnessStatus status = WitnessStatus::criterion_inconclusive;
    std::optional<SidorenkoCertificate> certificate;
    std::optional<NegativityCertificate> negative_point;
    std::string detail;
};

// End-to-end pipeline for edge subsets of tight cycles with odd r: census
// polynomial, probe/grid negativity search, then epsilon-halving (from 1/2,
// at most 60 steps) until the h-kernel certificate verifies exactly.
WitnessResult auto_witness_tight_cycle(const Hypergraph& h);

// Census polynomial of C_ell^{(r)} minus skip edges, dispatching between the
// closed forms, the transfer-matrix DP and brute force.
KappaPolynomial kappa_tight_cycle(int ell, int r, const std::set<int>& skip_edges);

struct DeletionBoundReport {
    Rational alpha0;  // t_{K_r}(G)
    Rational beta0;   // t_H(G)
    int v_g = 0, r = 0, v_h = 0, e_h = 0;
    bool gain = false;  // beta0 < alpha0^{e(H)} exactly
    double c_prime = 0;
    std::string c_prime_expression;
    double c = 0;
    double baseline_exponent = 0;
    double improved_exponent = 0;
    bool size_condition_met = false;  // beta0/alpha0 >= v(G)^{r - v(H)}
    std::string size_condition_note;
    std::string p_equation;  // left symbolic
};

// Improved extremal-number exponent from a strict density gap on a finite
// weighted kernel G (atom count plays the role of v(G)).
DeletionBoundReport deletion_bound(const Hypergraph& h, const SymmetricKernel& g);
DeletionBoundReport deletion_bound(const Hypergraph& h, const Hypergraph& g);
DeletionBoundReport deletion_bound_from_densities(int r, int v_h, int e_h, const Rational& alpha0,
                                                  const Rational& beta0, int v_g);

struct ScanRow {
    int k = 0, r = 0, ell = 0;
    std::string method;  // closed | dp | bruteforce
    std::optional<NegativityCertificate> negative_point;
    std::string certificate_status;  // ok | skipped_budget | not_attempted | failure reason
    std::optional<Rational> eps;
    std::optional<Rational> margin;
};

struct ScanOptions {
    int grid_n = 1000;
    bool certify = true;
    double certify_work_cap = 2.5e8;
};

// Census + negativity findings for every odd r >= 3, k >= 2 with
// kr <= max_vertices (<= 42). Witness certificates are attempted where the
// band DP fits the work cap.
std::vector<ScanRow> scan_tight_cycles(int max_vertices, const ScanOptions& opts = {});

std::string certificate_to_json(const SidorenkoCertificate& cert);
SidorenkoCertificate certificate_from_json(const std::string& text);

// Recomputes the densities of a parsed certificate and checks every stored
// field; returns false on any mismatch.
bool reverify_certificate(const SidorenkoCertificate& cert);

std::string deletion_report_to_json(const DeletionBoundReport& rep);
std::string scan_rows_to_json(const std::vector<ScanRow>& rows);

}  // namespace sidcert
