#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidcert/rational.hpp"

namespace sidcert {

enum class KernelRange { nonnegative, signed_unit, unrestricted };

std::string range_name(KernelRange r);
KernelRange range_from_name(const std::string& s);

/// A finite symmetric weighted kernel: an atom space with rational masses
/// summing to 1 and a symmetric weight function on r-multisets of atoms.
/// Weights are stored either as an explicit table on sorted multisets
/// (omitted multisets weigh 0) or as a lazy tensor product of two kernels,
/// whose weights multiply over aligned coordinates.
class SymmetricKernel {
public:
    SymmetricKernel(int arity, std::vector<Rational> masses,
                    std::map<std::vector<int>, Rational> weights, KernelRange range);

    int arity() const { return arity_; }
    int atom_count() const { return static_cast<int>(masses_.size()); }
    const Rational& mass(int atom) const { return masses_[atom]; }
    const std::vector<Rational>& masses() const { return masses_; }
    KernelRange range() const { return range_; }

    /// Weight of an atom tuple in any order.
    Rational weight(std::span<const int> atoms) const;

    bool is_explicit() const { return !tensor_; }
    const std::map<std::vector<int>, Rational>& table() const;

    /// Largest absolute weight (recursive for tensor kernels).
    Rational max_abs_weight() const;

    /// Edge density t_{K_r}: the mass-weighted mean of the weight function.
    Rational edge_density() const;

    /// Explicit-table copy; guarded against huge multiset enumerations.
    SymmetricKernel materialized(std::size_t max_entries = 5000000) const;

    static SymmetricKernel constant(int arity, const Rational& value, int atoms = 1);
    static SymmetricKernel tensor(const SymmetricKernel& a, const SymmetricKernel& b);

private:
    struct TensorNode {
        std::shared_ptr<const SymmetricKernel> left, right;
    };

    SymmetricKernel() = default;

    int arity_ = 0;
    std::vector<Rational> masses_;
    KernelRange range_ = KernelRange::unrestricted;
    std::map<std::vector<int>, Rational> table_;
    std::optional<TensorNode> tensor_;
};

SymmetricKernel tensor_product(const SymmetricKernel& a, const SymmetricKernel& b);

// Iterated tensor product; atom budget |atoms|^N <= 4096.
SymmetricKernel tensor_power(const SymmetricKernel& a, int n);

// Splits each atom into t equal-mass copies with identical weights; every
// homomorphism density is invariant.
SymmetricKernel blow_up(const SymmetricKernel& a, int t);

// True iff summing out any one coordinate against the masses gives exactly 0.
bool is_zero_averaging(const SymmetricKernel& a);

// Kernel view of an unweighted hypergraph: one atom per vertex, uniform
// masses, weight 1 exactly on edges.
struct Hypergraph;
SymmetricKernel kernel_from_hypergraph(const Hypergraph& g);

// JSON format: {"r": int, "atoms": [{"mass": "p/q"}...],
//   "weights": [{"atoms": [int,...], "value": "p/q"}...], "range": "..."}.
std::string kernel_to_json(const SymmetricKernel& k);
SymmetricKernel kernel_from_json(const std::string& text);

}  // namespace sidcert
