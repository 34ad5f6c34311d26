#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "sidcert/hypergraph.hpp"
#include "sidcert/kernel.hpp"
#include "sidcert/rational.hpp"

namespace sidcert {

enum class Strategy { bruteforce, variable_elimination, band_dp, automatic };

/// Exact homomorphism density t_H(W): the mass-weighted sum over all atom
/// assignments of V(H) of the product of edge weights. All strategies agree
/// exactly; `automatic` prefers the cyclic band DP for edge subsets of tight
/// cycles, then variable elimination, then brute force.
Rational t_density(const Hypergraph& h, const SymmetricKernel& w,
                   Strategy strategy = Strategy::automatic);

// Multiplicative structure used by budget decisions; exposed for tests.
struct DensityBudget {
    double bruteforce_ops = 1e9;       // |atoms|^{v(H)}
    double elimination_entries = 1e7;  // largest intermediate factor
    double band_work = 2.5e8;          // seeds x steps x states x atoms
};
Rational t_density(const Hypergraph& h, const SymmetricKernel& w, Strategy strategy,
                   const DensityBudget& budget);

// Floating-point variable elimination with the same structure as the exact
// engine; used inside randomized searches where exactness is confirmed later.
double t_density_float(const Hypergraph& h, const SymmetricKernel& w);

/// Deterministic, portable PRNG (mt19937_64 with explicit uniform mapping).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// W-random hypergraph: n atom draws by mass, then one independent coin flip
// per r-subset with success probability equal to the edge's weight. Requires
// a nonnegative kernel with all weights <= 1.
Hypergraph sample_hypergraph(const SymmetricKernel& w, int n, std::uint64_t seed);

struct DensityEstimate {
    double mean = 0;
    double standard_error = 0;
    int trials = 0;
};

// Monte-Carlo estimate of t_H(W) through sampled hypergraphs. Each trial
// computes the injective homomorphism density of H in G_n (normalized by the
// falling factorial), whose expectation is exactly t_H(W). v(H) <= 8.
DensityEstimate estimate_density(const Hypergraph& h, const SymmetricKernel& w, int n, int trials,
                                 std::uint64_t seed);

// Injective homomorphism density of H in an unweighted G; exposed for tests.
double injective_hom_density(const Hypergraph& h, const Hypergraph& g);

}  // namespace sidcert
