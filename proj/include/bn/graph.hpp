#ifndef BN_GRAPH_HPP
#define BN_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "bn/common.hpp"

namespace bn {

// Simple undirected graph with stable edge indices.
// Edge ids are assigned by sorted (min,max) endpoint order at construction;
// everything downstream (certificates, GF(2) vectors) references these ids.
class Graph {
public:
    Graph() : n_(0) { compute_hash(); }

    Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
        if (n < 0) throw Error("negative vertex count");
        for (auto& [u, v] : edges) {
            if (u == v) throw Error("loop at vertex " + std::to_string(u));
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw Error("edge endpoint out of range: " + std::to_string(u) + "," +
                            std::to_string(v));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i] == edges[i - 1])
                throw Error("duplicate edge " + std::to_string(edges[i].first) + "," +
                            std::to_string(edges[i].second));
        edges_ = std::move(edges);
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
            auto [u, v] = edges_[static_cast<std::size_t>(e)];
            adj_[static_cast<std::size_t>(u)].push_back({v, e});
            adj_[static_cast<std::size_t>(v)].push_back({u, e});
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
        compute_hash();
    }

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::pair<int, int> edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    // Incident (neighbor, edge id) pairs, sorted by neighbor id.
    const std::vector<std::pair<int, int>>& incident(int v) const {
        return adj_[static_cast<std::size_t>(v)];
    }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    // Edge id of {u,v}, or -1.
    int edge_id(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
        if (it != edges_.end() && *it == std::make_pair(u, v))
            return static_cast<int>(it - edges_.begin());
        return -1;
    }
    bool has_edge(int u, int v) const { return edge_id(u, v) >= 0; }

    // Content hash; used as the identity token tying edge vectors to their graph.
    std::uint64_t hash() const { return hash_; }

private:
    void compute_hash() {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ULL;
        };
        mix(static_cast<std::uint64_t>(n_));
        for (auto [u, v] : edges_) {
            mix(static_cast<std::uint64_t>(u));
            mix(static_cast<std::uint64_t>(v));
        }
        hash_ = h;
    }

    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::uint64_t hash_;
};

// Path given by its vertex sequence plus the connecting edge ids.
struct VertexPath {
    std::vector<int> vertices;
    std::vector<int> edge_ids;

    int source() const { return vertices.front(); }
    int target() const { return vertices.back(); }
    int length() const { return static_cast<int>(edge_ids.size()); }
};

inline Diagnostics validate_path(const Graph& g, const VertexPath& p) {
    if (p.vertices.empty()) return Diagnostics::fail("empty path");
    if (p.edge_ids.size() + 1 != p.vertices.size())
        return Diagnostics::fail("edge count does not match vertex count");
    std::vector<int> sorted = p.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return Diagnostics::fail("repeated vertex in path");
    for (std::size_t i = 0; i < p.edge_ids.size(); ++i) {
        int e = g.edge_id(p.vertices[i], p.vertices[i + 1]);
        if (e < 0 || e != p.edge_ids[i])
            return Diagnostics::fail("step " + std::to_string(i) + " is not the listed edge");
    }
    return Diagnostics::pass();
}

// Separation (X, Y): X ∪ Y = V and no edge joins X∖Y to Y∖X.
struct Separation {
    std::vector<int> x;
    std::vector<int> y;
};

inline Diagnostics validate_separation(const Graph& g, const Separation& sep) {
    std::vector<char> in_x(static_cast<std::size_t>(g.num_vertices()), 0);
    std::vector<char> in_y(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : sep.x) in_x[static_cast<std::size_t>(v)] = 1;
    for (int v : sep.y) in_y[static_cast<std::size_t>(v)] = 1;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!in_x[static_cast<std::size_t>(v)] && !in_y[static_cast<std::size_t>(v)])
            return Diagnostics::fail("vertex " + std::to_string(v) + " in neither side");
    for (auto [u, v] : g.edges()) {
        bool u_only_x = in_x[static_cast<std::size_t>(u)] && !in_y[static_cast<std::size_t>(u)];
        bool u_only_y = in_y[static_cast<std::size_t>(u)] && !in_x[static_cast<std::size_t>(u)];
        bool v_only_x = in_x[static_cast<std::size_t>(v)] && !in_y[static_cast<std::size_t>(v)];
        bool v_only_y = in_y[static_cast<std::size_t>(v)] && !in_x[static_cast<std::size_t>(v)];
        if ((u_only_x && v_only_y) || (u_only_y && v_only_x))
            return Diagnostics::fail("edge " + std::to_string(u) + "-" + std::to_string(v) +
                                     " crosses the separation");
    }
    return Diagnostics::pass();
}

inline std::vector<int> separator_of(const Separation& sep) {
    std::vector<int> xs = sep.x, ys = sep.y, inter;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(inter));
    return inter;
}

// Component ids indexed by vertex; components numbered by minimum contained
// vertex, in increasing order of that minimum.
inline std::vector<int> connected_components(const Graph& g) {
    int n = g.num_vertices();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] != -1) continue;
        comp[static_cast<std::size_t>(s)] = next;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (auto [w, e] : g.incident(u)) {
                (void)e;
                if (comp[static_cast<std::size_t>(w)] == -1) {
                    comp[static_cast<std::size_t>(w)] = next;
                    queue.push_back(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

inline int num_components(const Graph& g) {
    auto comp = connected_components(g);
    int c = 0;
    for (int x : comp) c = std::max(c, x + 1);
    return c;
}

// Deterministic spanning forest: BFS from the lowest vertex id of each
// component, expanding neighbors in increasing id order.
inline std::vector<int> spanning_forest(const Graph& g) {
    int n = g.num_vertices();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> tree_edges;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = 1;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (auto [w, e] : g.incident(u)) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    tree_edges.push_back(e);
                    queue.push_back(w);
                }
            }
        }
    }
    std::sort(tree_edges.begin(), tree_edges.end());
    return tree_edges;
}

// BFS shortest path from u to v whose internal vertices avoid the forbidden
// set (endpoints exempt). Ties broken by expanding smaller vertex ids first.
inline std::optional<VertexPath> shortest_path(const Graph& g, int u, int v,
                                               const std::vector<int>& forbidden_internal = {}) {
    int n = g.num_vertices();
    if (u < 0 || u >= n || v < 0 || v >= n) throw Error("shortest_path endpoint out of range");
    std::vector<char> blocked(static_cast<std::size_t>(n), 0);
    for (int w : forbidden_internal) blocked[static_cast<std::size_t>(w)] = 1;
    std::vector<int> par_vertex(static_cast<std::size_t>(n), -1);
    std::vector<int> par_edge(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(u)] = 1;
    std::deque<int> queue{u};
    while (!queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        if (a == v) break;
        // only endpoints may sit inside the forbidden set
        if (a != u && blocked[static_cast<std::size_t>(a)]) continue;
        for (auto [w, e] : g.incident(a)) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = 1;
            par_vertex[static_cast<std::size_t>(w)] = a;
            par_edge[static_cast<std::size_t>(w)] = e;
            queue.push_back(w);
        }
    }
    if (!seen[static_cast<std::size_t>(v)]) return std::nullopt;
    VertexPath path;
    for (int a = v; a != -1; a = par_vertex[static_cast<std::size_t>(a)]) {
        path.vertices.push_back(a);
        if (par_edge[static_cast<std::size_t>(a)] != -1)
            path.edge_ids.push_back(par_edge[static_cast<std::size_t>(a)]);
    }
    std::reverse(path.vertices.begin(), path.vertices.end());
    std::reverse(path.edge_ids.begin(), path.edge_ids.end());
    return path;
}

// Forest T such that T together with the given disjoint parts is connected and
// acquires no new cycle: repeatedly hook the nearest unreached part onto the
// grown region with a BFS-shortest path.
inline std::vector<int> connecting_forest(const Graph& g,
                                          const std::vector<std::vector<int>>& parts) {
    int n = g.num_vertices();
    if (num_components(g) > 1) throw Error("connecting_forest requires a connected graph");
    std::vector<int> part_of(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (int v : parts[i]) {
            if (v < 0 || v >= n) throw Error("part vertex out of range");
            if (part_of[static_cast<std::size_t>(v)] != -1) throw Error("parts are not disjoint");
            part_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
    std::vector<int> result;
    if (parts.empty()) return result;

    // connect every connected piece of every induced part
    std::vector<std::vector<int>> units;
    for (const auto& part : parts) {
        std::vector<char> in_part(static_cast<std::size_t>(n), 0);
        for (int v : part) in_part[static_cast<std::size_t>(v)] = 1;
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> sorted = part;
        std::sort(sorted.begin(), sorted.end());
        for (int s : sorted) {
            if (seen[static_cast<std::size_t>(s)]) continue;
            std::vector<int> unit;
            std::deque<int> queue{s};
            seen[static_cast<std::size_t>(s)] = 1;
            while (!queue.empty()) {
                int u = queue.front();
                queue.pop_front();
                unit.push_back(u);
                for (auto [w, e] : g.incident(u)) {
                    (void)e;
                    if (in_part[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = 1;
                        queue.push_back(w);
                    }
                }
            }
            units.push_back(std::move(unit));
        }
    }
    if (units.empty()) return result;

    std::vector<int> unit_of(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < units.size(); ++i)
        for (int v : units[i]) unit_of[static_cast<std::size_t>(v)] = static_cast<int>(i);

    std::vector<char> reached_part(units.size(), 0);
    std::vector<char> in_region(static_cast<std::size_t>(n), 0);
    std::vector<int> region;  // grows; kept sorted by insertion for BFS determinism
    auto absorb = [&](int v) {
        if (!in_region[static_cast<std::size_t>(v)]) {
            in_region[static_cast<std::size_t>(v)] = 1;
            region.push_back(v);
        }
    };
    for (int v : units[0]) absorb(v);
    reached_part[0] = 1;
    std::size_t remaining = units.size() - 1;

    while (remaining > 0) {
        // multi-source BFS from the region to the nearest unreached part vertex
        std::vector<int> par_vertex(static_cast<std::size_t>(n), -1);
        std::vector<int> par_edge(static_cast<std::size_t>(n), -1);
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::deque<int> queue;
        std::vector<int> sources = region;
        std::sort(sources.begin(), sources.end());
        for (int s : sources) {
            seen[static_cast<std::size_t>(s)] = 1;
            queue.push_back(s);
        }
        int hit = -1;
        while (!queue.empty() && hit < 0) {
            int a = queue.front();
            queue.pop_front();
            int pa = unit_of[static_cast<std::size_t>(a)];
            if (pa >= 0 && !reached_part[static_cast<std::size_t>(pa)]) {
                hit = a;
                break;
            }
            for (auto [w, e] : g.incident(a)) {
                if (seen[static_cast<std::size_t>(w)]) continue;
                seen[static_cast<std::size_t>(w)] = 1;
                par_vertex[static_cast<std::size_t>(w)] = a;
                par_edge[static_cast<std::size_t>(w)] = e;
                queue.push_back(w);
            }
        }
        if (hit < 0) throw Error("connecting_forest: part unreachable");
        int newly = unit_of[static_cast<std::size_t>(hit)];
        reached_part[static_cast<std::size_t>(newly)] = 1;
        --remaining;
        for (int a = hit; par_edge[static_cast<std::size_t>(a)] != -1;
             a = par_vertex[static_cast<std::size_t>(a)]) {
            result.push_back(par_edge[static_cast<std::size_t>(a)]);
            absorb(a);
        }
        for (int v : units[static_cast<std::size_t>(newly)]) absorb(v);
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace bn

#endif
