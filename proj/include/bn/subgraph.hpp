#ifndef BN_SUBGRAPH_HPP
#define BN_SUBGRAPH_HPP

#include <algorithm>
#include <deque>
#include <vector>

#include "bn/graph.hpp"

namespace bn {

// A subgraph of a fixed host graph, given by explicit vertex and edge masks.
// All cycle-space bookkeeping stays in host edge coordinates, so families
// built on nested subgraphs never need re-indexing.
struct Subgraph {
    const Graph* host = nullptr;
    std::vector<char> vin;
    std::vector<char> ein;

    static Subgraph full(const Graph& g) {
        Subgraph s;
        s.host = &g;
        s.vin.assign(static_cast<std::size_t>(g.num_vertices()), 1);
        s.ein.assign(static_cast<std::size_t>(g.num_edges()), 1);
        return s;
    }

    static Subgraph empty(const Graph& g) {
        Subgraph s;
        s.host = &g;
        s.vin.assign(static_cast<std::size_t>(g.num_vertices()), 0);
        s.ein.assign(static_cast<std::size_t>(g.num_edges()), 0);
        return s;
    }

    // Induced subgraph on a vertex set.
    static Subgraph induced(const Graph& g, const std::vector<int>& verts) {
        Subgraph s = empty(g);
        for (int v : verts) s.vin[static_cast<std::size_t>(v)] = 1;
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [u, v] = g.edge(e);
            if (s.vin[static_cast<std::size_t>(u)] && s.vin[static_cast<std::size_t>(v)])
                s.ein[static_cast<std::size_t>(e)] = 1;
        }
        return s;
    }

    bool has_vertex(int v) const { return vin[static_cast<std::size_t>(v)] != 0; }
    bool has_edge(int e) const { return ein[static_cast<std::size_t>(e)] != 0; }

    int num_vertices() const {
        int c = 0;
        for (char b : vin) c += b;
        return c;
    }
    int num_edges() const {
        int c = 0;
        for (char b : ein) c += b;
        return c;
    }

    std::vector<int> vertices() const {
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(vin.size()); ++v)
            if (vin[static_cast<std::size_t>(v)]) out.push_back(v);
        return out;
    }
    std::vector<int> edge_ids() const {
        std::vector<int> out;
        for (int e = 0; e < static_cast<int>(ein.size()); ++e)
            if (ein[static_cast<std::size_t>(e)]) out.push_back(e);
        return out;
    }

    Subgraph minus_vertex(int v) const {
        Subgraph s = *this;
        s.vin[static_cast<std::size_t>(v)] = 0;
        for (auto [w, e] : host->incident(v)) {
            (void)w;
            s.ein[static_cast<std::size_t>(e)] = 0;
        }
        return s;
    }

    Subgraph minus_vertices(const std::vector<int>& verts) const {
        Subgraph s = *this;
        for (int v : verts) {
            s.vin[static_cast<std::size_t>(v)] = 0;
            for (auto [w, e] : host->incident(v)) {
                (void)w;
                s.ein[static_cast<std::size_t>(e)] = 0;
            }
        }
        return s;
    }

    Subgraph plus_vertex_induced(int v) const {
        Subgraph s = *this;
        s.vin[static_cast<std::size_t>(v)] = 1;
        for (auto [w, e] : host->incident(v))
            if (s.vin[static_cast<std::size_t>(w)]) s.ein[static_cast<std::size_t>(e)] = 1;
        return s;
    }

    Subgraph minus_edges(const std::vector<int>& es) const {
        Subgraph s = *this;
        for (int e : es) s.ein[static_cast<std::size_t>(e)] = 0;
        return s;
    }

    Subgraph plus_edges(const std::vector<int>& es) const {
        Subgraph s = *this;
        for (int e : es) {
            auto [u, v] = host->edge(e);
            s.vin[static_cast<std::size_t>(u)] = 1;
            s.vin[static_cast<std::size_t>(v)] = 1;
            s.ein[static_cast<std::size_t>(e)] = 1;
        }
        return s;
    }

    static Subgraph unite(const Subgraph& a, const Subgraph& b) {
        Subgraph s = a;
        for (std::size_t i = 0; i < s.vin.size(); ++i) s.vin[i] |= b.vin[i];
        for (std::size_t i = 0; i < s.ein.size(); ++i) s.ein[i] |= b.ein[i];
        return s;
    }

    // Component ids per vertex (-1 for vertices outside the subgraph),
    // numbered by minimum contained vertex.
    std::vector<int> components() const {
        int n = host->num_vertices();
        std::vector<int> comp(static_cast<std::size_t>(n), -1);
        int next = 0;
        for (int s = 0; s < n; ++s) {
            if (!vin[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] != -1)
                continue;
            comp[static_cast<std::size_t>(s)] = next;
            std::deque<int> queue{s};
            while (!queue.empty()) {
                int u = queue.front();
                queue.pop_front();
                for (auto [w, e] : host->incident(u)) {
                    if (!ein[static_cast<std::size_t>(e)]) continue;
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

    int num_components() const {
        auto comp = components();
        int c = 0;
        for (int x : comp) c = std::max(c, x + 1);
        return c;
    }

    // m - n + c of this subgraph.
    int cycle_space_dim() const { return num_edges() - num_vertices() + num_components(); }

    // Materialize as a standalone Graph; vertex i of the result corresponds to
    // vertex_map()[i] in the host.
    std::pair<Graph, std::vector<int>> materialize() const {
        std::vector<int> verts = vertices();
        std::vector<int> local(vin.size(), -1);
        for (std::size_t i = 0; i < verts.size(); ++i)
            local[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
        std::vector<std::pair<int, int>> edges;
        for (int e : edge_ids()) {
            auto [u, v] = host->edge(e);
            edges.push_back({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
        }
        return {Graph(static_cast<int>(verts.size()), std::move(edges)), verts};
    }
};

// BFS shortest path between u and v using only subgraph edges; internal
// vertices additionally avoid the forbidden set.
inline std::optional<VertexPath> shortest_path_in(const Subgraph& g, int u, int v,
                                                  const std::vector<int>& forbidden_internal = {}) {
    const Graph& h = *g.host;
    int n = h.num_vertices();
    std::vector<char> blocked(static_cast<std::size_t>(n), 0);
    for (int w : forbidden_internal) blocked[static_cast<std::size_t>(w)] = 1;
    if (!g.has_vertex(u) || !g.has_vertex(v)) return std::nullopt;
    std::vector<int> par_vertex(static_cast<std::size_t>(n), -1), par_edge(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(u)] = 1;
    std::deque<int> queue{u};
    while (!queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        if (a == v) break;
        if (a != u && blocked[static_cast<std::size_t>(a)]) continue;
        for (auto [w, e] : h.incident(a)) {
            if (!g.has_edge(e) || seen[static_cast<std::size_t>(w)]) continue;
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

// Deterministic spanning forest of a subgraph (edge ids of the host).
inline std::vector<int> spanning_forest_in(const Subgraph& g) {
    const Graph& h = *g.host;
    int n = h.num_vertices();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> tree;
    for (int s = 0; s < n; ++s) {
        if (!g.has_vertex(s) || seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = 1;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (auto [w, e] : h.incident(u)) {
                if (!g.has_edge(e) || seen[static_cast<std::size_t>(w)]) continue;
                seen[static_cast<std::size_t>(w)] = 1;
                tree.push_back(e);
                queue.push_back(w);
            }
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

}  // namespace bn

#endif
