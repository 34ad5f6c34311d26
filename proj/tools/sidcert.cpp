// Command-line driver: exact certification of non-Sidorenko and non-common
// hypergraphs, census polynomials, density evaluation and sampling.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "sidcert/common.hpp"
#include "sidcert/density.hpp"
#include "sidcert/errors.hpp"
#include "sidcert/hypergraph.hpp"
#include "sidcert/kappa.hpp"
#include "sidcert/kernel.hpp"
#include "sidcert/witness.hpp"

using nlohmann::json;
using namespace sidcert;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInconclusive = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Output {
    std::string path;  // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text << std::endl;
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::invalid_argument("cannot write " + path);
        out << text << "\n";
    }
};

long long envelope_timestamp(bool want_timestamp) {
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) return std::atoll(sde);
    if (want_timestamp) return static_cast<long long>(std::time(nullptr));
    return 0;  // deterministic by default
}

std::string envelope(const std::string& command_echo, bool exact, bool want_timestamp,
                     json payload) {
    json j;
    j["tool"] = "sidcert";
    j["version"] = kVersion;
    j["command"] = command_echo;
    j["timestamp"] = envelope_timestamp(want_timestamp);
    j["exact"] = exact;
    j["payload"] = std::move(payload);
    return j.dump();
}

// ---------------------------------------------------------------------------
// Shared selectors for hypergraphs and kernels.
// ---------------------------------------------------------------------------

struct HypergraphArgs {
    std::string file;
    std::string family;
    int ell = 0, r = 0, g = 0;
    int remove_index = 0;
    std::vector<std::string> inputs;

    void attach(CLI::App* cmd) {
        cmd->add_option("--hypergraph", file, "hypergraph JSON file");
        cmd->add_option("--family", family,
                        "built-in family: tight-cycle | tight-cycle-minus-edge | loose-cycle | "
                        "loose-triangle | grid | half-octahedron | single-edge | levi-of | "
                        "disjoint-union");
        cmd->add_option("--ell", ell, "tight cycle length");
        cmd->add_option("--r", r, "uniformity");
        cmd->add_option("--g", g, "loose cycle length");
        cmd->add_option("--remove-index", remove_index, "edge index for minus-edge families");
        cmd->add_option("--input", inputs, "input files for levi-of / disjoint-union");
    }

    Hypergraph build() const {
        if (!file.empty()) return hypergraph_from_json(read_file(file));
        if (family == "tight-cycle") return make_tight_cycle(ell, r);
        if (family == "tight-cycle-minus-edge")
            return remove_edge(make_tight_cycle(ell, r), remove_index);
        if (family == "loose-cycle") return make_loose_cycle(g, r);
        if (family == "loose-triangle") return make_loose_cycle(3, r ? r : 3);
        if (family == "grid") return make_grid(r);
        if (family == "half-octahedron") return make_half_octahedron();
        if (family == "single-edge") return make_single_edge(r);
        if (family == "levi-of") {
            if (inputs.size() != 1) throw std::invalid_argument("levi-of needs one --input");
            return levi_graph(hypergraph_from_json(read_file(inputs[0])));
        }
        if (family == "disjoint-union") {
            if (inputs.empty()) throw std::invalid_argument("disjoint-union needs --input files");
            std::vector<Hypergraph> parts;
            for (const auto& p : inputs) parts.push_back(hypergraph_from_json(read_file(p)));
            return disjoint_union(parts);
        }
        throw std::invalid_argument("no hypergraph given: use --hypergraph or --family");
    }
};

struct KernelArgs {
    std::string file;
    std::string family;
    std::string c_str, eps_str, w_str;
    int s = 2;
    int atoms = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kernel-file", file, "kernel JSON file");
        cmd->add_option("--kernel", family,
                        "built-in kernel: linear-girth | s-parity | h | g-eps | constant");
        cmd->add_option("--c", c_str, "kernel parameter c (rational)");
        cmd->add_option("--eps", eps_str, "kernel parameter eps (rational)");
        cmd->add_option("--s", s, "s-parity order");
        cmd->add_option("--w", w_str, "constant kernel weight (rational)");
        cmd->add_option("--atoms", atoms, "atom count for the constant kernel");
    }

    SymmetricKernel build(int r) const {
        if (!file.empty()) return kernel_from_json(read_file(file));
        if (family == "linear-girth") return linear_girth_kernel(r, parse_rational(c_str));
        if (family == "s-parity") return s_parity_kernel(r, s, parse_rational(c_str));
        if (family == "h") return h_kernel(r, parse_rational(eps_str), parse_rational(c_str));
        if (family == "g-eps") return g_eps_kernel(r, parse_rational(eps_str));
        if (family == "constant")
            return SymmetricKernel::constant(r, parse_rational(w_str), atoms);
        throw std::invalid_argument("no kernel given: use --kernel-file or --kernel");
    }
};

double env_budget(const char* name, double fallback) {
    if (const char* v = std::getenv(name)) {
        double parsed = std::atof(v);
        if (parsed > 0) return parsed;
    }
    return fallback;
}

// Flat JSON config mirroring long flags; values already on the command line win.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            ++i;
            continue;
        }
        out.push_back(args[i]);
    }
    if (config_path.empty()) return out;
    json cfg = json::parse(read_file(config_path));
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
        } else if (value.is_string()) {
            out.push_back(flag);
            out.push_back(value.get<std::string>());
        } else {
            out.push_back(flag);
            out.push_back(value.dump());
        }
    }
    return out;
}

json kappa_payload(const KappaPolynomial& p, const std::string& family, json params,
                   const std::string& method) {
    json j;
    j["family"] = family;
    j["params"] = std::move(params);
    json coeffs = json::array();
    for (const auto& k : p.kappa) coeffs.push_back(k.get_str());
    j["kappa"] = std::move(coeffs);
    j["method"] = method;
    return j;
}

std::set<int> parse_skips(const std::string& s) {
    std::set<int> skips;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) skips.insert(std::stoi(item));
    }
    return skips;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> raw_args(argv + 1, argv + argc);
    std::string command_echo = "sidcert";
    for (const auto& a : raw_args) command_echo += " " + a;

    CLI::App app{"exact certification toolkit for hypergraph homomorphism densities"};
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    bool want_timestamp = false;
    app.add_option("-o,--out", out.path, "write output to this file instead of stdout");
    app.add_flag("--timestamp", want_timestamp, "stamp the output envelope with wall-clock time");
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file mirroring the flags");

    // -- catalog --------------------------------------------------------
    auto* cmd_catalog = app.add_subcommand("catalog", "list built-in families and parameters");

    // -- kappa ----------------------------------------------------------
    auto* cmd_kappa = app.add_subcommand("kappa", "census polynomial of a hypergraph");
    HypergraphArgs kappa_h;
    kappa_h.attach(cmd_kappa);
    std::string kappa_skips;
    std::string kappa_method = "auto";
    cmd_kappa->add_option("--skip", kappa_skips, "comma-separated edge windows to delete");
    cmd_kappa->add_option("--method", kappa_method, "auto | dp | bruteforce | closed");

    // -- poly-eval ------------------------------------------------------
    auto* cmd_poly = app.add_subcommand("poly-eval", "evaluate a census polynomial exactly");
    HypergraphArgs poly_h;
    poly_h.attach(cmd_poly);
    std::string poly_skips, poly_x;
    cmd_poly->add_option("--skip", poly_skips, "comma-separated edge windows to delete");
    cmd_poly->add_option("--x", poly_x, "evaluation point (rational)")->required();

    // -- negativity -----------------------------------------------------
    auto* cmd_neg = app.add_subcommand("negativity", "search for a kernel with t_G < 0");
    HypergraphArgs neg_h;
    neg_h.attach(cmd_neg);
    int neg_atoms = 3, neg_iters = 30;
    std::uint64_t neg_seed = 0;
    bool neg_zero_avg = false;
    bool neg_seed_set = false;
    cmd_neg->add_option("--atoms", neg_atoms, "atom count (2..4)");
    cmd_neg->add_option("--iterations", neg_iters, "random restarts");
    cmd_neg->add_option("--seed", neg_seed, "random seed")
        ->each([&](const std::string&) { neg_seed_set = true; });
    cmd_neg->add_flag("--zero-averaging", neg_zero_avg, "restrict to zero-averaging kernels");

    // -- certify --------------------------------------------------------
    auto* cmd_certify = app.add_subcommand("certify", "exact Sidorenko-gap certificate");
    HypergraphArgs cert_h;
    cert_h.attach(cmd_certify);
    KernelArgs cert_k;
    cert_k.attach(cmd_certify);

    // -- auto-witness ---------------------------------------------------
    auto* cmd_auto = app.add_subcommand("auto-witness",
                                        "census + probe + epsilon search on a tight cycle");
    HypergraphArgs auto_h;
    auto_h.attach(cmd_auto);

    // -- scan -----------------------------------------------------------
    auto* cmd_scan = app.add_subcommand("scan", "negativity findings for all odd-r tight cycles");
    int scan_max = 30;
    int scan_grid = 1000;
    bool scan_no_certify = false;
    cmd_scan->add_option("--max-vertices", scan_max, "largest cycle length to scan");
    cmd_scan->add_option("--grid", scan_grid, "negativity grid resolution");
    cmd_scan->add_flag("--no-certify", scan_no_certify, "skip the epsilon certificates");

    // -- deletion -------------------------------------------------------
    auto* cmd_del = app.add_subcommand("deletion", "improved extremal-number exponent");
    HypergraphArgs del_h;
    del_h.attach(cmd_del);
    KernelArgs del_k;
    del_k.attach(cmd_del);
    int del_sample_n = 0;
    std::uint64_t del_seed = 0;
    cmd_del->add_option("--sample-n", del_sample_n,
                        "sample an unweighted witness of this size from the kernel first");
    cmd_del->add_option("--seed", del_seed, "sampling seed");

    // -- common ---------------------------------------------------------
    auto* cmd_common = app.add_subcommand("common", "commonness deficit and refutation");
    HypergraphArgs common_h;
    common_h.attach(cmd_common);
    KernelArgs common_k;
    common_k.attach(cmd_common);
    bool common_deficit_only = false;
    bool common_search = false;
    int common_atoms = 4, common_iters = 40;
    std::uint64_t common_seed = 0;
    bool common_seed_set = false;
    cmd_common->add_flag("--deficit-only", common_deficit_only,
                         "report the deficit of the given kernel without the even-size pipeline");
    cmd_common->add_flag("--search", common_search,
                         "search for a zero-averaging witness over the leading candidates");
    cmd_common->add_option("--search-atoms", common_atoms, "atoms for the witness search");
    cmd_common->add_option("--search-iterations", common_iters, "restarts for the witness search");
    cmd_common->add_option("--seed", common_seed, "seed for the witness search")
        ->each([&](const std::string&) { common_seed_set = true; });

    // -- levi -----------------------------------------------------------
    auto* cmd_levi = app.add_subcommand("levi", "Levi graph, or kernel transfer through it");
    HypergraphArgs levi_h;
    levi_h.attach(cmd_levi);
    bool levi_transfer_mode = false;
    std::string levi_kernel_file;
    int levi_r = 3;
    cmd_levi->add_flag("--transfer", levi_transfer_mode, "transfer a 2-kernel to arity r");
    cmd_levi->add_option("--kernel-file", levi_kernel_file, "2-variable kernel JSON");
    cmd_levi->add_option("--arity", levi_r, "target arity for --transfer");

    // -- sample ---------------------------------------------------------
    auto* cmd_sample = app.add_subcommand("sample", "draw a W-random hypergraph");
    KernelArgs sample_k;
    sample_k.attach(cmd_sample);
    int sample_n = 0, sample_r = 3;
    std::uint64_t sample_seed = 0;
    bool sample_seed_set = false;
    cmd_sample->add_option("--n", sample_n, "vertex count")->required();
    cmd_sample->add_option("--r", sample_r, "uniformity for built-in kernels");
    cmd_sample->add_option("--seed", sample_seed, "random seed")
        ->each([&](const std::string&) { sample_seed_set = true; });

    // -- verify ---------------------------------------------------------
    auto* cmd_verify = app.add_subcommand("verify", "recompute a stored certificate");
    std::string verify_path;
    cmd_verify->add_option("--certificate", verify_path, "certificate JSON file")->required();

    // -- estimate -------------------------------------------------------
    auto* cmd_est = app.add_subcommand("estimate", "Monte-Carlo density estimate via sampling");
    HypergraphArgs est_h;
    est_h.attach(cmd_est);
    KernelArgs est_k;
    est_k.attach(cmd_est);
    int est_n = 0, est_trials = 0;
    std::uint64_t est_seed = 0;
    bool est_seed_set = false;
    cmd_est->add_option("--n", est_n, "sample size")->required();
    cmd_est->add_option("--trials", est_trials, "number of trials")->required();
    cmd_est->add_option("--seed", est_seed, "random seed")
        ->each([&](const std::string&) { est_seed_set = true; });

    try {
        std::vector<std::string> args = apply_config(raw_args);
        std::vector<const char*> argv2{"sidcert"};
        for (const auto& a : args) argv2.push_back(a.c_str());
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }

    try {
        if (*cmd_catalog) {
            json families = json::array();
            families.push_back({{"name", "tight-cycle"},
                                {"params", {{"ell", "integer >= r+1"}, {"r", "integer >= 2"}}}});
            families.push_back(
                {{"name", "tight-cycle-minus-edge"},
                 {"params",
                  {{"ell", "integer >= r+1"}, {"r", "integer >= 2"}, {"remove-index", "edge"}}}});
            families.push_back({{"name", "loose-cycle"},
                                {"params", {{"g", "integer >= 3"}, {"r", "integer >= 2"}}}});
            families.push_back({{"name", "loose-triangle"}, {"params", {{"r", "integer >= 2"}}}});
            families.push_back({{"name", "grid"}, {"params", {{"r", "integer >= 2"}}}});
            families.push_back({{"name", "half-octahedron"}, {"params", json::object()}});
            families.push_back({{"name", "single-edge"}, {"params", {{"r", "integer >= 2"}}}});
            families.push_back({{"name", "levi-of"}, {"params", {{"input", "hypergraph file"}}}});
            families.push_back(
                {{"name", "disjoint-union"}, {"params", {{"input", "hypergraph files"}}}});
            json kernels = json::array();
            kernels.push_back({{"name", "linear-girth"}, {"params", {{"c", "0 < c <= 1/C(r,2)"}}}});
            kernels.push_back(
                {{"name", "s-parity"}, {"params", {{"s", "2..r"}, {"c", "0 < c <= 1/C(r,s)"}}}});
            kernels.push_back(
                {{"name", "h"}, {"params", {{"eps", "0 < eps < 1"}, {"c", "0 < c <= 1"}}}});
            kernels.push_back({{"name", "g-eps"}, {"params", {{"eps", "0 < eps < 1"}}}});
            kernels.push_back(
                {{"name", "constant"}, {"params", {{"w", "rational"}, {"atoms", "integer >= 1"}}}});
            out.write(envelope(command_echo, true, want_timestamp,
                               json{{"families", families}, {"kernels", kernels}}));
            return kExitOk;
        }

        if (*cmd_kappa) {
            std::set<int> skips = parse_skips(kappa_skips);
            KappaPolynomial p;
            std::string method = kappa_method;
            json params;
            if (kappa_h.family == "tight-cycle" || kappa_h.family == "tight-cycle-minus-edge") {
                if (kappa_h.family == "tight-cycle-minus-edge") skips.insert(kappa_h.remove_index);
                params = {{"ell", kappa_h.ell}, {"r", kappa_h.r}};
                if (!skips.empty()) params["skip"] = skips;
                if (method == "auto") {
                    p = kappa_tight_cycle(kappa_h.ell, kappa_h.r, skips);
                    method = (skips.empty() && kappa_h.ell == 2 * kappa_h.r) ? "closed"
                             : (kappa_h.r <= 8)                              ? "dp"
                                                                             : "bruteforce";
                } else if (method == "dp") {
                    p = kappa_tight_cycle_dp(kappa_h.ell, kappa_h.r, skips);
                } else if (method == "closed") {
                    if (!skips.empty() && skips.size() != 1)
                        throw std::invalid_argument("closed forms cover at most one deleted edge");
                    if (skips.size() == 1) {
                        if (kappa_h.r != 3 || kappa_h.ell % 3)
                            throw std::invalid_argument("minus-edge closed form needs C_{3k}^{(3)}");
                        p = kappa_closed_c3k_minus_e(kappa_h.ell / 3);
                    } else if (kappa_h.ell == 2 * kappa_h.r) {
                        p = kappa_closed_c2r(kappa_h.r);
                    } else if (kappa_h.r == 3 && kappa_h.ell % 3 == 0) {
                        p = kappa_closed_c3k(kappa_h.ell / 3);
                    } else {
                        throw std::invalid_argument("no closed form for this family");
                    }
                } else {
                    Hypergraph full = make_tight_cycle(kappa_h.ell, kappa_h.r);
                    std::vector<int> keep;
                    auto starts = tight_cycle_window_starts(full);
                    for (int i = 0; i < full.edge_count(); ++i)
                        if (!skips.count((*starts)[i])) keep.push_back(i);
                    p = kappa_poly_bruteforce(edge_subset(full, keep));
                }
            } else {
                Hypergraph h = kappa_h.build();
                p = kappa_poly_bruteforce(h);
                method = "bruteforce";
                params = {{"n", h.n}, {"r", h.r}, {"edges", h.edge_count()}};
            }
            std::string family = kappa_h.family.empty() ? "custom" : kappa_h.family;
            out.write(envelope(command_echo, true, want_timestamp,
                               kappa_payload(p, family, params, method)));
            return kExitOk;
        }

        if (*cmd_poly) {
            std::set<int> skips = parse_skips(poly_skips);
            KappaPolynomial p;
            if (poly_h.family == "tight-cycle" || poly_h.family == "tight-cycle-minus-edge") {
                if (poly_h.family == "tight-cycle-minus-edge") skips.insert(poly_h.remove_index);
                p = kappa_tight_cycle(poly_h.ell, poly_h.r, skips);
            } else {
                p = kappa_poly_bruteforce(poly_h.build());
            }
            Rational x = parse_rational(poly_x);
            Rational value = eval_poly(p, x);
            json payload{{"x", to_string(x)},
                         {"value", to_string(value)},
                         {"negative", value < 0}};
            out.write(envelope(command_echo, true, want_timestamp, payload));
            return kExitOk;
        }

        if (*cmd_neg) {
            if (!neg_seed_set) throw std::invalid_argument("negativity requires --seed");
            Hypergraph g = neg_h.build();
            auto witness = negativity_search(
                g, neg_atoms, neg_iters, neg_seed,
                neg_zero_avg ? SearchConstraint::zero_averaging : SearchConstraint::none);
            if (!witness) {
                out.write(envelope(command_echo, true, want_timestamp,
                                   json{{"result", "inconclusive"},
                                        {"note", "no exactly-verified witness found; this does "
                                                 "not prove positivity"}}));
                return kExitInconclusive;
            }
            json payload = json::parse(kernel_to_json(*witness));
            payload["t_G"] = to_string(t_density(g, *witness));
            out.write(payload.dump());
            return kExitOk;
        }

        if (*cmd_certify) {
            Hypergraph h = cert_h.build();
            SymmetricKernel w = cert_k.build(h.r);
            SidorenkoCertificate cert = certify_non_sidorenko(h, w);
            out.write(envelope(command_echo, true, want_timestamp,
                               json::parse(certificate_to_json(cert))));
            return cert.verdict == SidorenkoVerdict::not_sidorenko ? kExitOk : kExitInconclusive;
        }

        if (*cmd_auto) {
            Hypergraph h = auto_h.build();
            WitnessResult res = auto_witness_tight_cycle(h);
            json payload;
            if (res.negative_point) {
                payload["negative_point"] = {{"x", to_string(res.negative_point->point)},
                                             {"value", to_string(res.negative_point->value)},
                                             {"provenance", res.negative_point->provenance}};
            }
            if (res.status == WitnessStatus::ok) {
                payload["certificate"] = json::parse(certificate_to_json(*res.certificate));
                out.write(envelope(command_echo, true, want_timestamp, payload));
                return kExitOk;
            }
            payload["result"] = res.status == WitnessStatus::criterion_inconclusive
                                    ? "criterion_inconclusive"
                                    : "epsilon_search_exhausted";
            payload["detail"] = res.detail;
            out.write(envelope(command_echo, true, want_timestamp, payload));
            return kExitInconclusive;
        }

        if (*cmd_scan) {
            ScanOptions opts;
            opts.grid_n = scan_grid;
            opts.certify = !scan_no_certify;
            opts.certify_work_cap = env_budget("SIDCERT_CERTIFY_WORK_CAP", opts.certify_work_cap);
            auto rows = scan_tight_cycles(scan_max, opts);
            out.write(envelope(command_echo, true, want_timestamp,
                               json::parse(scan_rows_to_json(rows))));
            return kExitOk;
        }

        if (*cmd_del) {
            Hypergraph h = del_h.build();
            DeletionBoundReport rep;
            if (del_sample_n > 0) {
                SymmetricKernel w = del_k.build(h.r);
                Hypergraph g = sample_hypergraph(w, del_sample_n, del_seed);
                rep = deletion_bound(h, g);
            } else {
                rep = deletion_bound(h, del_k.build(h.r));
            }
            out.write(envelope(command_echo, true, want_timestamp,
                               json::parse(deletion_report_to_json(rep))));
            return kExitOk;
        }

        if (*cmd_common) {
            Hypergraph h = common_h.build();
            if (common_deficit_only) {
                SymmetricKernel f = common_k.build(h.r);
                CommonnessReport rep = common_deficit(h, f);
                out.write(envelope(command_echo, true, want_timestamp,
                                   json::parse(commonness_report_to_json(rep))));
                return rep.verdict == CommonVerdict::not_common ? kExitOk : kExitInconclusive;
            }
            EvenSubgraphClassification cls = classify_even_subgraphs(h);
            json payload;
            payload["classification"] = json::parse(classification_to_json(cls));
            if (cls.two_m == 0) {
                payload["result"] = "no_even_candidates";
                out.write(envelope(command_echo, true, want_timestamp, payload));
                return kExitInconclusive;
            }
            std::optional<SymmetricKernel> witness;
            if (common_search) {
                if (!common_seed_set)
                    throw std::invalid_argument("common --search requires --seed");
                witness = noncommon_witness_search(h, cls, common_atoms, common_iters, common_seed);
                if (!witness) {
                    payload["result"] = "witness_search_inconclusive";
                    out.write(envelope(command_echo, true, want_timestamp, payload));
                    return kExitInconclusive;
                }
                payload["witness"] = json::parse(kernel_to_json(*witness));
            } else {
                witness = common_k.build(h.r);
            }
            NonCommonResult res = check_noncommon(h, *witness, cls);
            if (res.status == NonCommonResult::Status::not_common) {
                payload["report"] = json::parse(commonness_report_to_json(*res.report));
                payload["leading_sum"] = to_string(res.leading_sum);
                out.write(envelope(command_echo, true, want_timestamp, payload));
                return kExitOk;
            }
            payload["result"] = res.status == NonCommonResult::Status::leading_term_nonnegative
                                    ? "leading_term_nonnegative"
                                    : "epsilon_search_exhausted";
            payload["leading_sum"] = to_string(res.leading_sum);
            out.write(envelope(command_echo, true, want_timestamp, payload));
            return kExitInconclusive;
        }

        if (*cmd_levi) {
            if (levi_transfer_mode) {
                if (levi_kernel_file.empty())
                    throw std::invalid_argument("--transfer needs --kernel-file");
                SymmetricKernel f = kernel_from_json(read_file(levi_kernel_file));
                SymmetricKernel h = levi_transfer(f, levi_r);
                out.write(kernel_to_json(h));
                return kExitOk;
            }
            Hypergraph h = levi_h.build();
            out.write(hypergraph_to_json(levi_graph(h)));
            return kExitOk;
        }

        if (*cmd_sample) {
            if (!sample_seed_set) throw std::invalid_argument("sample requires --seed");
            SymmetricKernel w = sample_k.build(sample_r);
            Hypergraph g = sample_hypergraph(w, sample_n, sample_seed);
            out.write(hypergraph_to_json(g));
            return kExitOk;
        }

        if (*cmd_est) {
            if (!est_seed_set) throw std::invalid_argument("estimate requires --seed");
            Hypergraph h = est_h.build();
            SymmetricKernel w = est_k.build(h.r);
            DensityEstimate est = estimate_density(h, w, est_n, est_trials, est_seed);
            json payload{{"mean", est.mean},
                         {"standard_error", est.standard_error},
                         {"trials", est.trials}};
            out.write(envelope(command_echo, false, want_timestamp, payload));
            return kExitOk;
        }

        if (*cmd_verify) {
            json stored = json::parse(read_file(verify_path));
            json cert_json = stored.contains("payload") ? stored["payload"] : stored;
            if (cert_json.contains("certificate")) cert_json = cert_json["certificate"];
            SidorenkoCertificate cert = certificate_from_json(cert_json.dump());
            bool ok = reverify_certificate(cert);
            out.write(envelope(command_echo, true, want_timestamp,
                               json{{"verified", ok},
                                    {"verdict", cert.verdict == SidorenkoVerdict::not_sidorenko
                                                    ? "not_sidorenko"
                                                    : "inconclusive_witness"}}));
            return ok ? kExitOk : kExitVerifyFailed;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << std::endl;
        return kExitResource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
    return kExitUsage;
}
