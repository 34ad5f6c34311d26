#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sidcert/density.hpp"
#include "sidcert/hypergraph.hpp"
#include "sidcert/kernel.hpp"
#include "sidcert/rational.hpp"

namespace sidcert {

enum class CommonVerdict { not_common, inconclusive };

struct CommonnessReport {
    Rational deficit;   // t_H(1+f) + t_H(1-f) - 2
    Rational even_sum;  // sum over nonempty even-edge subgraphs of t_G(f)
    Rational scale;     // the epsilon applied to f
    bool cross_checked = false;
    CommonVerdict verdict = CommonVerdict::inconclusive;
};

// Exact deficit for a signed-unit kernel f; cross-checks the identity
// deficit = 2 * even_sum whenever e(H) <= 20.
CommonnessReport common_deficit(const Hypergraph& h, const SymmetricKernel& f);

struct EvenSubgraphCandidate {
    std::vector<int> edge_indices;
    bool two_connected = false;
    int iso_class = 0;
    std::optional<std::string> witness_ref;
};

struct EvenSubgraphClassification {
    int two_m = 0;  // 0 when no even-size degree-one-free subgraph exists
    std::vector<EvenSubgraphCandidate> candidates;
    bool smaller_even_sizes_all_degenerate = true;
};

// Scans even sizes 2, 4, ... for the first with a degree-one-free subgraph
// and lists every such edge set at that size (iso classes annotated for
// v <= 12). Budget: e(H) <= 24.
EvenSubgraphClassification classify_even_subgraphs(const Hypergraph& h);

enum class SearchConstraint { none, zero_averaging };

// Randomized restarts + coordinate descent over signed kernels in [-1,1],
// minimizing a floating-point t_G; candidates are rounded to denominators
// <= 2^16 and re-verified in exact arithmetic. Returns only exact witnesses.
// The zero-averaging constraint searches inside an exact nullspace basis of
// the coordinate-averaging map (uniform masses), so rounded candidates stay
// zero-averaging exactly.
std::optional<SymmetricKernel> negativity_search(const Hypergraph& g, int atom_count,
                                                 int iterations, std::uint64_t seed,
                                                 SearchConstraint constraint = SearchConstraint::none);

struct EvenSubgraphClassification;

// Zero-averaging witness search against the sum of the classification's
// leading candidates (the quantity whose negativity drives the even-size
// expansion). Returns only kernels whose exact candidate sum is negative.
std::optional<SymmetricKernel> noncommon_witness_search(const Hypergraph& h,
                                                        const EvenSubgraphClassification& cls,
                                                        int atom_count, int iterations,
                                                        std::uint64_t seed);

struct CombinedWitness {
    SymmetricKernel kernel;
    std::string construction;  // which case of the combination produced it
};

// Combines per-graph witnesses into one kernel f with t_{G_i}(f) < 0 for all
// i, following the tensor-product case analysis. Requires, exactly:
// t_{G_i}(f_j) < 0 for all i != j and t_{G_j}(f_j) != 0. The odd case with
// mixed signs needs the disjoint-union witness f0.
CombinedWitness combine_negativity_witnesses(const std::vector<Hypergraph>& gs,
                                             const std::vector<SymmetricKernel>& fs,
                                             const std::optional<SymmetricKernel>& f0);

// h(x_1..x_r) = sum_y mass(y) prod_i f(x_i, y) for a symmetric 2-variable
// kernel f; satisfies t_H(h) = t_{L(H)}(f) for every r-graph H, and h is
// zero-averaging whenever f is.
SymmetricKernel levi_transfer(const SymmetricKernel& f, int r);

struct NonCommonResult {
    enum class Status { not_common, leading_term_nonnegative, epsilon_search_exhausted };
    Status status;
    std::optional<CommonnessReport> report;
    Rational leading_sum;  // S over the classified candidates
};

// Certifies non-commonness from a zero-averaging witness f and a verified
// even-subgraph classification: halves epsilon from 1/2 until the exact even
// sum at eps*f is negative (cap 60).
NonCommonResult check_noncommon(const Hypergraph& h, const SymmetricKernel& f,
                                const EvenSubgraphClassification& classification);

std::string commonness_report_to_json(const CommonnessReport& rep);
std::string classification_to_json(const EvenSubgraphClassification& c);

}  // namespace sidcert
