#include "sidcert/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sidcert {

namespace {

void validate_edge(const std::vector<int>& e, int r, int n) {
    if (static_cast<int>(e.size()) != r)
        throw std::invalid_argument("edge arity does not match uniformity");
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] < 0 || e[i] >= n) throw std::invalid_argument("vertex id out of range");
        if (i > 0 && e[i] <= e[i - 1])
            throw std::invalid_argument("edge vertices must be strictly increasing");
    }
}

}  // namespace

Hypergraph::Hypergraph(int uniformity, int vertex_count, std::vector<std::vector<int>> edge_list)
    : r(uniformity), n(vertex_count), edges(std::move(edge_list)) {
    if (r < 2) throw std::invalid_argument("uniformity must be at least 2");
    if (n < 0) throw std::invalid_argument("negative vertex count");
    for (auto& e : edges) validate_edge(e, r, n);
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");
}

std::vector<int> Hypergraph::degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges)
        for (int v : e) ++deg[v];
    return deg;
}

Hypergraph make_tight_cycle(int ell, int r) {
    if (r < 2) throw std::invalid_argument("tight cycle needs r >= 2");
    if (ell <= r) throw std::invalid_argument("tight cycle needs ell >= r+1");
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < ell; ++i) {
        std::vector<int> e;
        for (int j = 0; j < r; ++j) e.push_back((i + j) % ell);
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    return Hypergraph(r, ell, std::move(edges));
}

Hypergraph make_loose_cycle(int g, int r) {
    if (r < 2) throw std::invalid_argument("loose cycle needs r >= 2");
    if (g < 3) throw std::invalid_argument("loose cycle needs g >= 3");
    int n = g * (r - 1);
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < g; ++i) {
        std::vector<int> e;
        for (int j = 0; j < r; ++j) e.push_back((i * (r - 1) + j) % n);
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    return Hypergraph(r, n, std::move(edges));
}

Hypergraph make_grid(int r) {
    if (r < 2) throw std::invalid_argument("grid needs r >= 2");
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < r; ++i) {
        std::vector<int> row, col;
        for (int j = 0; j < r; ++j) {
            row.push_back(i * r + j);
            col.push_back(j * r + i);
        }
        std::sort(col.begin(), col.end());
        edges.push_back(std::move(row));
        edges.push_back(std::move(col));
    }
    return Hypergraph(r, r * r, std::move(edges));
}

Hypergraph make_half_octahedron() {
    return Hypergraph(3, 6, {{0, 2, 4}, {0, 3, 5}, {1, 2, 5}, {1, 3, 4}});
}

Hypergraph make_single_edge(int r) {
    std::vector<int> e;
    for (int i = 0; i < r; ++i) e.push_back(i);
    return Hypergraph(r, r, {e});
}

Hypergraph remove_edge(const Hypergraph& h, int index) {
    if (index < 0 || index >= h.edge_count())
        throw std::invalid_argument("edge index out of range");
    auto edges = h.edges;
    edges.erase(edges.begin() + index);
    return Hypergraph(h.r, h.n, std::move(edges));
}

Hypergraph disjoint_union(const std::vector<Hypergraph>& parts) {
    if (parts.empty()) throw std::invalid_argument("disjoint_union of no parts");
    int r = parts[0].r;
    int offset = 0;
    std::vector<std::vector<int>> edges;
    for (const auto& p : parts) {
        if (p.r != r) throw std::invalid_argument("disjoint_union: mixed uniformity");
        for (auto e : p.edges) {
            for (int& v : e) v += offset;
            edges.push_back(std::move(e));
        }
        offset += p.n;
    }
    return Hypergraph(r, offset, std::move(edges));
}

Hypergraph levi_graph(const Hypergraph& h) {
    std::vector<std::vector<int>> edges;
    for (int j = 0; j < h.edge_count(); ++j)
        for (int v : h.edges[j]) edges.push_back({v, h.n + j});
    return Hypergraph(2, h.n + h.edge_count(), std::move(edges));
}

Hypergraph skeleton(const Hypergraph& h, int s) {
    if (s < 2 || s > h.r) throw std::invalid_argument("skeleton order out of range");
    std::set<std::vector<int>> out;
    std::vector<int> pick(s);
    for (const auto& e : h.edges) {
        // enumerate s-subsets of the r-edge
        std::vector<int> idx(s);
        for (int i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            for (int i = 0; i < s; ++i) pick[i] = e[idx[i]];
            out.insert(pick);
            int i = s - 1;
            while (i >= 0 && idx[i] == h.r - s + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return Hypergraph(s, h.n, std::vector<std::vector<int>>(out.begin(), out.end()));
}

Hypergraph edge_subset(const Hypergraph& h, const std::vector<int>& edge_indices) {
    std::vector<std::vector<int>> edges;
    for (int i : edge_indices) {
        if (i < 0 || i >= h.edge_count()) throw std::invalid_argument("edge index out of range");
        edges.push_back(h.edges[i]);
    }
    return Hypergraph(h.r, h.n, std::move(edges));
}

bool is_linear(const Hypergraph& h) {
    for (std::size_t i = 0; i < h.edges.size(); ++i)
        for (std::size_t j = i + 1; j < h.edges.size(); ++j) {
            std::vector<int> inter;
            std::set_intersection(h.edges[i].begin(), h.edges[i].end(), h.edges[j].begin(),
                                  h.edges[j].end(), std::back_inserter(inter));
            if (inter.size() > 1) return false;
        }
    return true;
}

namespace {

std::vector<std::vector<int>> adjacency(const Hypergraph& g2) {
    std::vector<std::vector<int>> adj(g2.n);
    for (const auto& e : g2.edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    return adj;
}

bool connected_graph(const std::vector<std::vector<int>>& adj, int skip = -1) {
    int n = static_cast<int>(adj.size());
    int start = -1;
    for (int v = 0; v < n; ++v)
        if (v != skip) { start = v; break; }
    if (start < 0) return true;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (w != skip && !seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
    }
    return reached == n - (skip >= 0 ? 1 : 0);
}

bool two_connected_graph(const Hypergraph& g2) {
    if (g2.n < 3) return false;
    auto adj = adjacency(g2);
    if (!connected_graph(adj)) return false;
    for (int v = 0; v < g2.n; ++v)
        if (!connected_graph(adj, v)) return false;
    return true;
}

}  // namespace

bool is_connected(const Hypergraph& h) {
    return connected_graph(adjacency(h.r == 2 ? h : levi_graph(h)));
}

bool is_two_connected(const Hypergraph& h) {
    if (h.r == 2) return two_connected_graph(h);
    return two_connected_graph(levi_graph(h));
}

namespace {

// Girth of a simple graph via BFS from every vertex; 0 when acyclic.
int graph_girth(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    int best = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1), parent(n, -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    q.push(w);
                } else if (w != parent[v]) {
                    int len = dist[v] + dist[w] + 1;
                    if (best == 0 || len < best) best = len;
                }
            }
        }
    }
    return best;
}

// Enumerates simple cycles of exactly the given length, canonicalized by
// smallest starting vertex and direction; calls sink(cycle vertices).
template <typename Sink>
void enumerate_cycles(const std::vector<std::vector<int>>& adj, int length, Sink sink) {
    int n = static_cast<int>(adj.size());
    std::vector<int> path;
    std::vector<char> used(n, 0);

    // distance-to-start pruning
    auto bfs_dist = [&](int s) {
        std::vector<int> d(n, -1);
        std::queue<int> q;
        d[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    q.push(w);
                }
        }
        return d;
    };

    for (int s = 0; s < n; ++s) {
        auto dist = bfs_dist(s);
        path.assign(1, s);
        used[s] = 1;
        auto dfs = [&](auto&& self, int v) -> void {
            if (static_cast<int>(path.size()) == length) {
                for (int w : adj[v])
                    if (w == s && path[1] < path.back()) sink(path);
                return;
            }
            for (int w : adj[v]) {
                if (used[w] || w < s) continue;
                if (dist[w] < 0 || dist[w] > length - static_cast<int>(path.size())) continue;
                used[w] = 1;
                path.push_back(w);
                self(self, w);
                path.pop_back();
                used[w] = 0;
            }
        };
        dfs(dfs, s);
        used[s] = 0;
    }
}

}  // namespace

GirthReport berge_girth(const Hypergraph& h) {
    if (!is_linear(h)) throw std::invalid_argument("berge_girth requires a linear hypergraph");
    Hypergraph levi = levi_graph(h);
    auto adj = adjacency(levi);
    int lg = graph_girth(adj);
    if (lg == 0) throw std::invalid_argument("berge_girth: hypergraph is acyclic");
    GirthReport rep;
    rep.girth = lg / 2;  // Levi cycles alternate sides, so lg is even

    for (auto& a : adj) std::sort(a.begin(), a.end());
    long long count = 0;
    bool all_loose = true;
    enumerate_cycles(adj, lg, [&](const std::vector<int>& cyc) {
        ++count;
        // collect the edge-nodes of the cycle and check pairwise intersections
        std::vector<int> edge_ids;
        for (int node : cyc)
            if (node >= h.n) edge_ids.push_back(node - h.n);
        for (std::size_t i = 0; i < edge_ids.size() && all_loose; ++i)
            for (std::size_t j = i + 1; j < edge_ids.size() && all_loose; ++j) {
                bool consecutive = (j == i + 1) || (i == 0 && j + 1 == edge_ids.size());
                std::vector<int> inter;
                std::set_intersection(h.edges[edge_ids[i]].begin(), h.edges[edge_ids[i]].end(),
                                      h.edges[edge_ids[j]].begin(), h.edges[edge_ids[j]].end(),
                                      std::back_inserter(inter));
                if (!consecutive && !inter.empty()) all_loose = false;
            }
    });
    rep.shortest_cycle_count = count;
    rep.all_shortest_loose = all_loose;
    return rep;
}

namespace {

bool extend_isomorphism(const Hypergraph& a, const Hypergraph& b, std::vector<int>& map,
                        std::vector<char>& taken, int v, const std::set<std::vector<int>>& bedges) {
    if (v == a.n) return true;
    for (int w = 0; w < b.n; ++w) {
        if (taken[w]) continue;
        map[v] = w;
        taken[w] = 1;
        // check all edges of a fully mapped by now
        bool ok = true;
        for (const auto& e : a.edges) {
            bool complete = true;
            for (int u : e)
                if (u > v) { complete = false; break; }
            if (!complete) continue;
            std::vector<int> img;
            for (int u : e) img.push_back(map[u]);
            std::sort(img.begin(), img.end());
            if (!bedges.count(img)) { ok = false; break; }
        }
        if (ok && extend_isomorphism(a, b, map, taken, v + 1, bedges)) return true;
        taken[w] = 0;
        map[v] = -1;
    }
    return false;
}

}  // namespace

bool is_isomorphic(const Hypergraph& a, const Hypergraph& b) {
    if (a.r != b.r || a.n != b.n || a.edge_count() != b.edge_count()) return false;
    if (a.n > 12) throw std::invalid_argument("is_isomorphic restricted to v <= 12");
    auto da = a.degrees(), db = b.degrees();
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
    std::set<std::vector<int>> bedges(b.edges.begin(), b.edges.end());
    std::vector<int> map(a.n, -1);
    std::vector<char> taken(b.n, 0);
    return extend_isomorphism(a, b, map, taken, 0, bedges);
}

std::optional<std::vector<int>> tight_cycle_window_starts(const Hypergraph& h) {
    int n = h.n, r = h.r;
    if (n < r + 1) return std::nullopt;
    std::map<std::vector<int>, int> windows;
    for (int i = 0; i < n; ++i) {
        std::vector<int> w;
        for (int j = 0; j < r; ++j) w.push_back((i + j) % n);
        std::sort(w.begin(), w.end());
        windows[w] = i;
    }
    std::vector<int> starts;
    for (const auto& e : h.edges) {
        auto it = windows.find(e);
        if (it == windows.end()) return std::nullopt;
        starts.push_back(it->second);
    }
    std::sort(starts.begin(), starts.end());
    return starts;
}

std::string hypergraph_to_json(const Hypergraph& h) {
    nlohmann::json j;
    j["r"] = h.r;
    j["n"] = h.n;
    j["edges"] = h.edges;
    return j.dump();
}

Hypergraph hypergraph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("r") || !j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("hypergraph JSON needs fields r, n, edges");
    auto edges = j.at("edges").get<std::vector<std::vector<int>>>();
    Hypergraph h(j.at("r").get<int>(), j.at("n").get<int>(), edges);
    if (h.edges != edges)
        throw std::invalid_argument("hypergraph JSON edges not in canonical order");
    return h;
}

}  // namespace sidcert
