#include "sidcert/kernel.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sidcert/errors.hpp"
#include "sidcert/hypergraph.hpp"

namespace sidcert {

std::string range_name(KernelRange r) {
    switch (r) {
        case KernelRange::nonnegative: return "nonnegative";
        case KernelRange::signed_unit: return "signed_unit";
        case KernelRange::unrestricted: return "unrestricted";
    }
    return "unrestricted";
}

KernelRange range_from_name(const std::string& s) {
    if (s == "nonnegative") return KernelRange::nonnegative;
    if (s == "signed_unit") return KernelRange::signed_unit;
    if (s == "unrestricted") return KernelRange::unrestricted;
    throw std::invalid_argument("unknown kernel range: " + s);
}

namespace {

void check_range(const Rational& v, KernelRange range) {
    if (range == KernelRange::nonnegative && v < 0)
        throw std::invalid_argument("negative weight in a kernel declared nonnegative");
    if (range == KernelRange::signed_unit && abs(v) > 1)
        throw std::invalid_argument("weight outside [-1,1] in a kernel declared signed_unit");
}

}  // namespace

SymmetricKernel::SymmetricKernel(int arity, std::vector<Rational> masses,
                                 std::map<std::vector<int>, Rational> weights, KernelRange range)
    : arity_(arity), masses_(std::move(masses)), range_(range), table_(std::move(weights)) {
    if (arity_ < 1) throw std::invalid_argument("kernel arity must be positive");
    if (masses_.empty()) throw std::invalid_argument("kernel needs at least one atom");
    Rational sum(0);
    for (const auto& m : masses_) {
        if (m <= 0) throw std::invalid_argument("atom masses must be positive");
        sum += m;
    }
    if (sum != 1) throw std::invalid_argument("atom masses must sum to exactly 1");
    for (const auto& [key, value] : table_) {
        if (static_cast<int>(key.size()) != arity_)
            throw std::invalid_argument("weight key arity mismatch");
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (key[i] < 0 || key[i] >= atom_count())
                throw std::invalid_argument("weight key atom out of range");
            if (i > 0 && key[i] < key[i - 1])
                throw std::invalid_argument("weight keys must be sorted multisets");
        }
        check_range(value, range_);
    }
}

Rational SymmetricKernel::weight(std::span<const int> atoms) const {
    if (static_cast<int>(atoms.size()) != arity_)
        throw std::invalid_argument("weight lookup arity mismatch");
    if (tensor_) {
        int nb = tensor_->right->atom_count();
        std::vector<int> first(arity_), second(arity_);
        for (int i = 0; i < arity_; ++i) {
            first[i] = atoms[i] / nb;
            second[i] = atoms[i] % nb;
        }
        Rational l = tensor_->left->weight(first);
        if (l == 0) return l;
        return l * tensor_->right->weight(second);
    }
    std::vector<int> key(atoms.begin(), atoms.end());
    std::sort(key.begin(), key.end());
    auto it = table_.find(key);
    return it == table_.end() ? Rational(0) : it->second;
}

const std::map<std::vector<int>, Rational>& SymmetricKernel::table() const {
    if (tensor_) throw std::logic_error("tensor kernel has no explicit table; materialize first");
    return table_;
}

Rational SymmetricKernel::max_abs_weight() const {
    if (tensor_) return tensor_->left->max_abs_weight() * tensor_->right->max_abs_weight();
    Rational best(0);
    for (const auto& [key, value] : table_) {
        Rational av = abs(value);
        if (av > best) best = av;
    }
    return best;
}

Rational SymmetricKernel::edge_density() const {
    if (tensor_) return tensor_->left->edge_density() * tensor_->right->edge_density();
    // sum over sorted multisets, weighting by the number of ordered tuples
    Rational total(0);
    for (const auto& [key, value] : table_) {
        if (value == 0) continue;
        BigInt orderings = factorial(arity_);
        Rational mass_product(1);
        int run = 1;
        for (std::size_t i = 0; i < key.size(); ++i) {
            mass_product *= masses_[key[i]];
            if (i > 0 && key[i] == key[i - 1]) {
                ++run;
                orderings /= run;
            } else {
                run = 1;
            }
        }
        total += Rational(orderings) * mass_product * value;
    }
    return total;
}

namespace {

// Enumerates sorted r-multisets over {0..atoms-1}.
template <typename Fn>
void for_each_multiset(int atoms, int r, Fn fn) {
    std::vector<int> key(r, 0);
    while (true) {
        fn(key);
        int i = r - 1;
        while (i >= 0 && key[i] == atoms - 1) --i;
        if (i < 0) break;
        ++key[i];
        for (int j = i + 1; j < r; ++j) key[j] = key[i];
    }
}

BigInt multiset_count(int atoms, int r) {
    return binomial(static_cast<unsigned long>(atoms + r - 1), static_cast<unsigned long>(r));
}

}  // namespace

SymmetricKernel SymmetricKernel::materialized(std::size_t max_entries) const {
    if (!tensor_) return *this;
    if (multiset_count(atom_count(), arity_) > static_cast<long>(max_entries))
        throw ResourceError("kernel materialization budget exceeded: " +
                            std::to_string(atom_count()) + " atoms at arity " +
                            std::to_string(arity_));
    std::map<std::vector<int>, Rational> weights;
    for_each_multiset(atom_count(), arity_, [&](const std::vector<int>& key) {
        Rational v = weight(key);
        if (v != 0) weights[key] = v;
    });
    return SymmetricKernel(arity_, masses_, std::move(weights), range_);
}

SymmetricKernel SymmetricKernel::constant(int arity, const Rational& value, int atoms) {
    std::vector<Rational> masses(atoms, Rational(1, atoms));
    for (auto& m : masses) m.canonicalize();
    std::map<std::vector<int>, Rational> weights;
    if (value != 0)
        for_each_multiset(atoms, arity, [&](const std::vector<int>& key) { weights[key] = value; });
    KernelRange range = value >= 0 ? KernelRange::nonnegative
                                   : (abs(value) <= 1 ? KernelRange::signed_unit
                                                      : KernelRange::unrestricted);
    return SymmetricKernel(arity, std::move(masses), std::move(weights), range);
}

SymmetricKernel SymmetricKernel::tensor(const SymmetricKernel& a, const SymmetricKernel& b) {
    if (a.arity() != b.arity()) throw std::invalid_argument("tensor_product: arity mismatch");
    SymmetricKernel out;
    out.arity_ = a.arity();
    out.masses_.reserve(static_cast<std::size_t>(a.atom_count()) * b.atom_count());
    for (int i = 0; i < a.atom_count(); ++i)
        for (int j = 0; j < b.atom_count(); ++j) out.masses_.push_back(a.mass(i) * b.mass(j));
    if (a.range() == KernelRange::nonnegative && b.range() == KernelRange::nonnegative)
        out.range_ = KernelRange::nonnegative;
    else if (a.range() != KernelRange::unrestricted && b.range() != KernelRange::unrestricted &&
             a.max_abs_weight() * b.max_abs_weight() <= 1)
        out.range_ = KernelRange::signed_unit;
    else
        out.range_ = KernelRange::unrestricted;
    out.tensor_ = TensorNode{std::make_shared<SymmetricKernel>(a), std::make_shared<SymmetricKernel>(b)};
    return out;
}

SymmetricKernel tensor_product(const SymmetricKernel& a, const SymmetricKernel& b) {
    return SymmetricKernel::tensor(a, b);
}

SymmetricKernel tensor_power(const SymmetricKernel& a, int n) {
    if (n < 1) throw std::invalid_argument("tensor_power needs N >= 1");
    double atoms = 1;
    for (int i = 0; i < n; ++i) {
        atoms *= a.atom_count();
        if (atoms > 4096)
            throw ResourceError("tensor_power atom budget exceeded: " +
                                std::to_string(a.atom_count()) + "^" + std::to_string(n) +
                                " > 4096");
    }
    SymmetricKernel out = a;
    for (int i = 1; i < n; ++i) out = tensor_product(a, out);
    return out;
}

SymmetricKernel blow_up(const SymmetricKernel& a, int t) {
    if (t < 1) throw std::invalid_argument("blow_up factor must be >= 1");
    if (t == 1) return a;
    SymmetricKernel unit = SymmetricKernel::constant(a.arity(), Rational(1), t);
    SymmetricKernel out = tensor_product(a, unit);
    return out;
}

bool is_zero_averaging(const SymmetricKernel& a) {
    int r = a.arity();
    if (multiset_count(a.atom_count(), r - 1) * a.atom_count() > 10000000)
        throw ResourceError("is_zero_averaging enumeration budget exceeded");
    bool zero = true;
    if (r == 1) {
        Rational s(0);
        for (int x = 0; x < a.atom_count(); ++x) {
            std::vector<int> key{x};
            s += a.mass(x) * a.weight(key);
        }
        return s == 0;
    }
    for_each_multiset(a.atom_count(), r - 1, [&](const std::vector<int>& prefix) {
        if (!zero) return;
        Rational s(0);
        std::vector<int> key(prefix);
        key.push_back(0);
        for (int x = 0; x < a.atom_count(); ++x) {
            key.back() = x;
            s += a.mass(x) * a.weight(key);
        }
        if (s != 0) zero = false;
    });
    return zero;
}

SymmetricKernel kernel_from_hypergraph(const Hypergraph& g) {
    if (g.n < 1) throw std::invalid_argument("kernel_from_hypergraph: empty vertex set");
    std::vector<Rational> masses(g.n, Rational(1, g.n));
    for (auto& m : masses) m.canonicalize();
    std::map<std::vector<int>, Rational> weights;
    for (const auto& e : g.edges) weights[e] = Rational(1);
    return SymmetricKernel(g.r, std::move(masses), std::move(weights), KernelRange::nonnegative);
}

std::string kernel_to_json(const SymmetricKernel& k) {
    SymmetricKernel mat = k.is_explicit() ? k : k.materialized();
    nlohmann::json j;
    j["r"] = mat.arity();
    nlohmann::json atoms = nlohmann::json::array();
    for (int i = 0; i < mat.atom_count(); ++i)
        atoms.push_back({{"mass", to_string(mat.mass(i))}});
    j["atoms"] = std::move(atoms);
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& [key, value] : mat.table()) {
        if (value == 0) continue;
        weights.push_back({{"atoms", key}, {"value", to_string(value)}});
    }
    j["weights"] = std::move(weights);
    j["range"] = range_name(mat.range());
    return j.dump();
}

SymmetricKernel kernel_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int r = j.at("r").get<int>();
    std::vector<Rational> masses;
    for (const auto& a : j.at("atoms")) masses.push_back(parse_rational(a.at("mass").get<std::string>()));
    std::map<std::vector<int>, Rational> weights;
    for (const auto& w : j.at("weights")) {
        auto key = w.at("atoms").get<std::vector<int>>();
        std::sort(key.begin(), key.end());
        Rational value = parse_rational(w.at("value").get<std::string>());
        if (weights.count(key)) throw std::invalid_argument("duplicate weight entry in kernel JSON");
        weights[key] = value;
    }
    KernelRange range = range_from_name(j.at("range").get<std::string>());
    return SymmetricKernel(r, std::move(masses), std::move(weights), range);
}

}  // namespace sidcert
