#include "sidcert/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sidcert/errors.hpp"

namespace sidcert {

namespace {

// Elementary symmetric polynomial e_s evaluated on r values from {+1,-1}
// with j entries equal to -1.
BigInt elementary_symmetric_pm(int r, int s, int j) {
    BigInt total(0);
    for (int b = 0; b <= s; ++b) {
        BigInt term = binomial(r - j, s - b) * binomial(j, b);
        if (b % 2) term = -term;
        total += term;
    }
    return total;
}

SymmetricKernel pm_kernel(int r, int s, const Rational& c) {
    std::vector<Rational> masses{Rational(1, 2), Rational(1, 2)};
    std::map<std::vector<int>, Rational> weights;
    for (int j = 0; j <= r; ++j) {
        std::vector<int> key(r, 0);
        for (int i = 0; i < j; ++i) key[r - 1 - i] = 1;  // j copies of the -1 atom
        std::sort(key.begin(), key.end());
        weights[key] = Rational(1) - c * Rational(elementary_symmetric_pm(r, s, j));
    }
    return SymmetricKernel(r, std::move(masses), std::move(weights), KernelRange::nonnegative);
}

}  // namespace

SymmetricKernel linear_girth_kernel(int r, const Rational& c) {
    if (r < 2) throw std::invalid_argument("linear_girth_kernel needs r >= 2");
    if (c <= 0 || c * Rational(binomial(r, 2)) > 1)
        throw std::invalid_argument("linear_girth_kernel needs 0 < c <= 1/C(r,2)");
    return pm_kernel(r, 2, c);
}

SymmetricKernel s_parity_kernel(int r, int s, const Rational& c) {
    if (r < 2 || s < 2 || s > r) throw std::invalid_argument("s_parity_kernel needs 2 <= s <= r");
    if (c <= 0 || c * Rational(binomial(r, s)) > 1)
        throw std::invalid_argument("s_parity_kernel needs 0 < c <= 1/C(r,s)");
    return pm_kernel(r, s, c);
}

Rational UnaryAtoms::moment(unsigned d) const {
    Rational total(0);
    for (const auto& [mass, value] : atoms) total += mass * pow_rational(value, d);
    return total;
}

UnaryAtoms feps_atoms(const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("feps_atoms needs 0 < eps < 1");
    UnaryAtoms f;
    f.atoms.push_back({Rational(1) / (Rational(1) + eps), eps});
    f.atoms.push_back({eps / (Rational(1) + eps), Rational(-1)});
    return f;
}

namespace {

SymmetricKernel product_of_feps(int r, const Rational& eps, const Rational& c, bool with_one) {
    UnaryAtoms f = feps_atoms(eps);
    std::vector<Rational> masses{f.atoms[0].first, f.atoms[1].first};
    std::map<std::vector<int>, Rational> weights;
    for (int j = 0; j <= r; ++j) {
        std::vector<int> key(r, 0);
        for (int i = 0; i < j; ++i) key[r - 1 - i] = 1;
        std::sort(key.begin(), key.end());
        // prod f_eps over r-j copies of eps and j copies of -1
        Rational g = pow_rational(eps, r - j);
        if (j % 2) g = -g;
        weights[key] = with_one ? Rational(1) + c * g : g;
    }
    return SymmetricKernel(r, std::move(masses), std::move(weights),
                           with_one ? KernelRange::nonnegative : KernelRange::signed_unit);
}

}  // namespace

SymmetricKernel g_eps_kernel(int r, const Rational& eps) {
    if (r < 1) throw std::invalid_argument("g_eps_kernel needs r >= 1");
    return product_of_feps(r, eps, Rational(0), false);
}

SymmetricKernel h_kernel(int r, const Rational& eps, const Rational& c) {
    if (r < 2) throw std::invalid_argument("h_kernel needs r >= 2");
    if (c <= 0 || c > 1) throw std::invalid_argument("h_kernel needs 0 < c <= 1");
    return product_of_feps(r, eps, c, true);
}

SidorenkoCertificate certify_non_sidorenko(const Hypergraph& h, const SymmetricKernel& w) {
    if (w.range() != KernelRange::nonnegative)
        throw std::invalid_argument("certify_non_sidorenko requires a nonnegative kernel");
    if (h.r != w.arity()) throw std::invalid_argument("kernel arity does not match uniformity");
    SidorenkoCertificate cert;
    cert.hypergraph = h;
    cert.kernel = w;
    cert.t_h = t_density(h, w);
    cert.edge_density = w.edge_density();
    cert.rhs = pow_rational(cert.edge_density, h.edge_count());
    cert.margin = cert.rhs - cert.t_h;
    cert.verdict = cert.margin > 0 ? SidorenkoVerdict::not_sidorenko
                                   : SidorenkoVerdict::inconclusive_witness;
    return cert;
}

KappaPolynomial kappa_tight_cycle(int ell, int r, const std::set<int>& skip_edges) {
    if (skip_edges.empty() && ell == 2 * r && r >= 3) return kappa_closed_c2r(r);
    if (r <= 8 && ell <= 64) return kappa_tight_cycle_dp(ell, r, skip_edges);
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < ell; ++i) {
        if (skip_edges.count(i)) continue;
        std::vector<int> e;
        for (int j = 0; j < r; ++j) e.push_back((i + j) % ell);
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    return kappa_poly_bruteforce(Hypergraph(r, ell, edges));
}

namespace {

struct ProbeChoice {
    Rational point;
    Rational value;
    std::string provenance;
};

// Most negative value among the family's probe points, else the most
// negative grid point; nullopt when nothing negative is found.
std::optional<ProbeChoice> best_negative_point(const KappaPolynomial& p,
                                               const std::vector<Rational>& probes, int grid_n) {
    std::optional<ProbeChoice> best;
    for (const auto& x : probes) {
        if (x < Rational(-1) || x >= Rational(0)) continue;
        Rational v = eval_poly(p, x);
        if (v < 0 && (!best || v < best->value))
            best = ProbeChoice{x, v, "probe:" + to_string(x)};
    }
    if (best) return best;
    for (int j = 1; j <= grid_n; ++j) {
        Rational x(-j, grid_n);
        x.canonicalize();
        Rational v = eval_poly(p, x);
        if (v < 0 && (!best || v < best->value))
            best = ProbeChoice{x, v, "grid:" + std::to_string(j) + "/" + std::to_string(grid_n)};
    }
    return best;
}

struct TightCycleShape {
    int ell = 0, r = 0;
    std::set<int> skips;
};

std::optional<TightCycleShape> detect_tight_cycle_subgraph(const Hypergraph& h) {
    auto starts = tight_cycle_window_starts(h);
    if (!starts) return std::nullopt;
    TightCycleShape shape;
    shape.ell = h.n;
    shape.r = h.r;
    std::set<int> present(starts->begin(), starts->end());
    for (int i = 0; i < h.n; ++i)
        if (!present.count(i)) shape.skips.insert(i);
    return shape;
}

}  // namespace

WitnessResult auto_witness_tight_cycle(const Hypergraph& h) {
    WitnessResult res;
    auto shape = detect_tight_cycle_subgraph(h);
    if (!shape) throw std::invalid_argument("not an edge subset of a tight cycle on its vertex set");
    if (shape->r % 2 == 0) throw std::invalid_argument("auto witness requires odd r");

    KappaPolynomial p = kappa_tight_cycle(shape->ell, shape->r, shape->skips);
    int k = shape->ell / shape->r;
    bool exact_multiple = (shape->ell % shape->r == 0);
    std::vector<Rational> probes;
    if (exact_multiple)
        probes = probe_catalogue(k, shape->r, shape->skips.size() == 1);
    auto choice = best_negative_point(p, probes, 1000);
    if (!choice) {
        res.status = WitnessStatus::criterion_inconclusive;
        res.detail = "no negative point found on [-1,0] (not a proof of non-negativity)";
        return res;
    }
    res.negative_point = NegativityCertificate{choice->point, choice->value, choice->provenance};

    Rational c = -choice->point;
    Rational eps(1, 2);
    for (int step = 0; step < 60; ++step) {
        SymmetricKernel hk = h_kernel(shape->r, eps, c);
        SidorenkoCertificate cert = certify_non_sidorenko(h, hk);
        if (cert.verdict == SidorenkoVerdict::not_sidorenko) {
            cert.h_params = HKernelParams{shape->r, eps, c};
            res.status = WitnessStatus::ok;
            res.certificate = cert;
            return res;
        }
        eps /= 2;
    }
    res.status = WitnessStatus::epsilon_search_exhausted;
    res.detail = "no certificate after 60 epsilon halvings at c = " + to_string(c);
    return res;
}

DeletionBoundReport deletion_bound_from_densities(int r, int v_h, int e_h, const Rational& alpha0,
                                                  const Rational& beta0, int v_g) {
    if (alpha0 <= 0) throw std::invalid_argument("deletion bound needs t_{K_r}(G) > 0");
    if (beta0 < 0) throw std::invalid_argument("negative t_H(G) for a nonnegative witness");
    if (e_h < 2) throw std::invalid_argument("deletion bound needs e(H) >= 2");
    if (v_g < 2) throw std::invalid_argument("deletion bound needs v(G) >= 2");
    DeletionBoundReport rep;
    rep.alpha0 = alpha0;
    rep.beta0 = beta0;
    rep.v_g = v_g;
    rep.r = r;
    rep.v_h = v_h;
    rep.e_h = e_h;
    Rational alpha_pow = pow_rational(alpha0, rep.e_h);
    rep.gain = beta0 < alpha_pow;
    double log_vg = std::log(static_cast<double>(v_g));
    if (beta0 == 0) {
        rep.c_prime = std::numeric_limits<double>::infinity();
    } else if (beta0 == alpha_pow) {
        rep.c_prime = 0;
    } else {
        rep.c_prime = (rep.e_h * log_rational(alpha0) - log_rational(beta0)) / log_vg;
    }
    rep.c_prime_expression = "(" + std::to_string(rep.e_h) + "*log(" + to_string(alpha0) +
                             ") - log(" + to_string(beta0) + ")) / log(" + std::to_string(v_g) + ")";
    rep.c = rep.c_prime / (rep.e_h - 1);
    rep.baseline_exponent = rep.r - static_cast<double>(rep.v_h - rep.r) / (rep.e_h - 1);
    rep.improved_exponent = rep.baseline_exponent + rep.c;
    if (beta0 > 0) {
        Rational threshold = pow_int(v_g, rep.r - rep.v_h);
        rep.size_condition_met = beta0 / alpha0 >= threshold;
    } else {
        rep.size_condition_met = false;
    }
    if (!rep.size_condition_met)
        rep.size_condition_note =
            "witness too small for the sparsification step; blow it up until "
            "beta0/alpha0 >= v(G)^(r-v(H))";
    rep.p_equation = "(p*alpha)^(e(H)-1) = n^(r+c'-v(H))/(2*r!), n = v(G)^N";
    return rep;
}

DeletionBoundReport deletion_bound(const Hypergraph& h, const SymmetricKernel& g) {
    if (g.range() != KernelRange::nonnegative)
        throw std::invalid_argument("deletion bound needs a nonnegative witness");
    Rational alpha0 = g.edge_density();
    Rational beta0 = t_density(h, g);
    return deletion_bound_from_densities(h.r, h.n, h.edge_count(), alpha0, beta0, g.atom_count());
}

DeletionBoundReport deletion_bound(const Hypergraph& h, const Hypergraph& g) {
    return deletion_bound(h, kernel_from_hypergraph(g));
}

std::vector<ScanRow> scan_tight_cycles(int max_vertices, const ScanOptions& opts) {
    if (max_vertices > 42) throw std::invalid_argument("scan limited to 42 vertices");
    std::vector<ScanRow> rows;
    for (int r = 3; 2 * r <= max_vertices; r += 2) {
        for (int k = 2; k * r <= max_vertices; ++k) {
            ScanRow row;
            row.k = k;
            row.r = r;
            row.ell = k * r;
            if (k == 2 && r >= 3)
                row.method = "closed";
            else if (r <= 8)
                row.method = "dp";
            else
                row.method = "bruteforce";
            KappaPolynomial p = kappa_tight_cycle(row.ell, r, {});
            auto probes = probe_catalogue(k, r, false);
            auto choice = best_negative_point(p, probes, opts.grid_n);
            if (choice)
                row.negative_point =
                    NegativityCertificate{choice->point, choice->value, choice->provenance};

            if (!opts.certify) {
                row.certificate_status = "not_attempted";
            } else if (!choice) {
                row.certificate_status = "criterion_inconclusive";
            } else if (std::pow(2.0, 2 * (r - 1)) * row.ell * 2 > opts.certify_work_cap) {
                row.certificate_status = "skipped_budget";
            } else {
                WitnessResult wr = auto_witness_tight_cycle(make_tight_cycle(row.ell, r));
                if (wr.status == WitnessStatus::ok) {
                    row.certificate_status = "ok";
                    row.eps = wr.certificate->h_params->eps;
                    row.margin = wr.certificate->margin;
                } else {
                    row.certificate_status = wr.status == WitnessStatus::epsilon_search_exhausted
                                                 ? "epsilon_search_exhausted"
                                                 : "criterion_inconclusive";
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

nlohmann::json certificate_json_payload(const SidorenkoCertificate& cert) {
    nlohmann::json j;
    j["H"] = nlohmann::json::parse(hypergraph_to_json(cert.hypergraph));
    if (cert.h_params) {
        j["kernel"] = {{"family", "h"},
                       {"r", cert.h_params->r},
                       {"eps", to_string(cert.h_params->eps)},
                       {"c", to_string(cert.h_params->c)}};
    } else if (cert.kernel) {
        j["kernel"] = nlohmann::json::parse(kernel_to_json(*cert.kernel));
    }
    j["t_H"] = to_string(cert.t_h);
    j["edge_density"] = to_string(cert.edge_density);
    j["rhs"] = to_string(cert.rhs);
    j["margin"] = to_string(cert.margin);
    j["verdict"] = cert.verdict == SidorenkoVerdict::not_sidorenko ? "not_sidorenko"
                                                                   : "inconclusive_witness";
    return j;
}

}  // namespace

std::string certificate_to_json(const SidorenkoCertificate& cert) {
    return certificate_json_payload(cert).dump();
}

SidorenkoCertificate certificate_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SidorenkoCertificate cert;
    cert.hypergraph = hypergraph_from_json(j.at("H").dump());
    const auto& kj = j.at("kernel");
    if (kj.contains("family") && kj.at("family") == "h") {
        HKernelParams params{kj.at("r").get<int>(), parse_rational(kj.at("eps").get<std::string>()),
                             parse_rational(kj.at("c").get<std::string>())};
        cert.h_params = params;
        cert.kernel = h_kernel(params.r, params.eps, params.c);
    } else {
        cert.kernel = kernel_from_json(kj.dump());
    }
    cert.t_h = parse_rational(j.at("t_H").get<std::string>());
    cert.edge_density = parse_rational(j.at("edge_density").get<std::string>());
    cert.rhs = parse_rational(j.at("rhs").get<std::string>());
    cert.margin = parse_rational(j.at("margin").get<std::string>());
    cert.verdict = j.at("verdict") == "not_sidorenko" ? SidorenkoVerdict::not_sidorenko
                                                      : SidorenkoVerdict::inconclusive_witness;
    return cert;
}

bool reverify_certificate(const SidorenkoCertificate& cert) {
    if (!cert.kernel) return false;
    SidorenkoCertificate fresh = certify_non_sidorenko(cert.hypergraph, *cert.kernel);
    return fresh.t_h == cert.t_h && fresh.edge_density == cert.edge_density &&
           fresh.rhs == cert.rhs && fresh.margin == cert.margin && fresh.verdict == cert.verdict;
}

std::string deletion_report_to_json(const DeletionBoundReport& rep) {
    nlohmann::json j;
    j["alpha0"] = to_string(rep.alpha0);
    j["beta0"] = to_string(rep.beta0);
    j["v_G"] = rep.v_g;
    j["r"] = rep.r;
    j["v_H"] = rep.v_h;
    j["e_H"] = rep.e_h;
    j["verdict"] = rep.gain ? "improved" : "no_gain";
    j["c_prime"] = rep.c_prime;
    j["c_prime_expression"] = rep.c_prime_expression;
    j["c"] = rep.c;
    j["baseline_exponent"] = rep.baseline_exponent;
    j["improved_exponent"] = rep.improved_exponent;
    j["size_condition_met"] = rep.size_condition_met;
    if (!rep.size_condition_note.empty()) j["size_condition_note"] = rep.size_condition_note;
    j["p_equation"] = rep.p_equation;
    j["gamma_note"] = "gamma is an absolute constant from the deletion argument; not optimized";
    return j.dump();
}

std::string scan_rows_to_json(const std::vector<ScanRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j;
        j["k"] = row.k;
        j["r"] = row.r;
        j["ell"] = row.ell;
        j["method"] = row.method;
        if (row.negative_point) {
            j["x_star"] = to_string(row.negative_point->point);
            j["P_at_x_star"] = to_string(row.negative_point->value);
            j["provenance"] = row.negative_point->provenance;
        } else {
            j["x_star"] = nullptr;
        }
        j["certificate"] = row.certificate_status;
        if (row.eps) j["eps"] = to_string(*row.eps);
        if (row.margin) j["margin"] = to_string(*row.margin);
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

}  // namespace sidcert
