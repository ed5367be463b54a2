#ifndef BN_HYPERGRAPH_HPP
#define BN_HYPERGRAPH_HPP

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "bn/common.hpp"

namespace bn {

// Hypergraph with an explicit vertex list and a multiset of hyperedges.
// Hyperedges keep their identity by position (occurrence id), which matters
// because equal adhesion sets can occur several times.
struct Hypergraph {
    std::vector<int> vertices;               // sorted, distinct
    std::vector<std::vector<int>> edges;     // each sorted; duplicates allowed
    std::vector<std::string> edge_tags;      // provenance label per occurrence

    void normalize() {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        for (auto& e : edges) {
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
        }
        if (edge_tags.size() < edges.size()) edge_tags.resize(edges.size());
    }

    bool has_vertex(int v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }

    Diagnostics validate() const {
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            if (vertices[i] >= vertices[i + 1]) return Diagnostics::fail("vertex list not sorted");
        for (std::size_t i = 0; i < edges.size(); ++i)
            for (int v : edges[i])
                if (!has_vertex(v))
                    return Diagnostics::fail("hyperedge " + std::to_string(i) +
                                             " contains unknown vertex " + std::to_string(v));
        return Diagnostics::pass();
    }

    // Induced subhypergraph: keeps hyperedges fully inside the vertex set.
    Hypergraph induced(const std::vector<int>& verts) const {
        std::vector<int> sorted = verts;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        Hypergraph out;
        out.vertices = sorted;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            bool inside = true;
            for (int v : edges[i])
                if (!std::binary_search(sorted.begin(), sorted.end(), v)) {
                    inside = false;
                    break;
                }
            if (inside) {
                out.edges.push_back(edges[i]);
                out.edge_tags.push_back(i < edge_tags.size() ? edge_tags[i] : "");
            }
        }
        return out;
    }

    Hypergraph without_edge_occurrence(std::size_t idx) const {
        Hypergraph out = *this;
        out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(idx));
        if (idx < out.edge_tags.size())
            out.edge_tags.erase(out.edge_tags.begin() + static_cast<std::ptrdiff_t>(idx));
        return out;
    }

    // Component id per vertex (index into this->vertices order), via the
    // bipartite vertex/hyperedge incidence structure; skip_edge marks edge
    // occurrences to ignore.
    std::vector<int> components(const std::vector<char>& skip_edge = {}) const {
        std::vector<int> comp(vertices.size(), -1);
        std::vector<char> edge_seen(edges.size(), 0);
        int next = 0;
        for (std::size_t si = 0; si < vertices.size(); ++si) {
            if (comp[si] != -1) continue;
            comp[si] = next;
            std::deque<std::size_t> queue{si};
            while (!queue.empty()) {
                std::size_t ui = queue.front();
                queue.pop_front();
                int u = vertices[ui];
                for (std::size_t ei = 0; ei < edges.size(); ++ei) {
                    if (edge_seen[ei]) continue;
                    if (ei < skip_edge.size() && skip_edge[ei]) continue;
                    if (!std::binary_search(edges[ei].begin(), edges[ei].end(), u)) continue;
                    edge_seen[ei] = 1;
                    for (int w : edges[ei]) {
                        std::size_t wi = index_of(w);
                        if (comp[wi] == -1) {
                            comp[wi] = next;
                            queue.push_back(wi);
                        }
                    }
                }
            }
            ++next;
        }
        return comp;
    }

    bool connected() const {
        if (vertices.empty()) return true;
        auto comp = components();
        for (int c : comp)
            if (c != 0) return false;
        return true;
    }

    // s-t connectivity with some edge occurrences removed.
    bool connects(int s, int t, const std::vector<char>& skip_edge = {}) const {
        if (!has_vertex(s) || !has_vertex(t)) return false;
        auto comp = components(skip_edge);
        return comp[index_of(s)] == comp[index_of(t)];
    }

    std::size_t index_of(int v) const {
        return static_cast<std::size_t>(
            std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    }
};

// Alternating vertex/hyperedge path; hyperedges referenced by occurrence id.
struct HyperPath {
    std::vector<int> vertices;          // p+1 distinct vertices
    std::vector<std::size_t> edge_occ;  // p distinct edge occurrences

    Diagnostics validate(const Hypergraph& h) const {
        if (vertices.empty()) return Diagnostics::fail("empty hyperpath");
        if (edge_occ.size() + 1 != vertices.size())
            return Diagnostics::fail("hyperpath arity mismatch");
        std::vector<int> vs = vertices;
        std::sort(vs.begin(), vs.end());
        if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
            return Diagnostics::fail("repeated vertex in hyperpath");
        std::vector<std::size_t> es = edge_occ;
        std::sort(es.begin(), es.end());
        if (std::adjacent_find(es.begin(), es.end()) != es.end())
            return Diagnostics::fail("repeated hyperedge in hyperpath");
        for (std::size_t i = 0; i < edge_occ.size(); ++i) {
            const auto& e = h.edges[edge_occ[i]];
            if (!std::binary_search(e.begin(), e.end(), vertices[i]) ||
                !std::binary_search(e.begin(), e.end(), vertices[i + 1]))
                return Diagnostics::fail("hyperpath step " + std::to_string(i) +
                                         " not inside its hyperedge");
        }
        return Diagnostics::pass();
    }

    bool uses_occurrence(std::size_t occ) const {
        return std::find(edge_occ.begin(), edge_occ.end(), occ) != edge_occ.end();
    }
};

// BFS s-t path in the incidence structure; deterministic. Returns alternating
// path or nothing.
inline std::optional<HyperPath> hyper_shortest_path(const Hypergraph& h, int s, int t,
                                                    const std::vector<char>& skip_edge = {}) {
    if (!h.has_vertex(s) || !h.has_vertex(t)) return std::nullopt;
    std::vector<int> par_vertex(h.vertices.size(), -1);
    std::vector<std::size_t> par_edge(h.vertices.size(), static_cast<std::size_t>(-1));
    std::vector<char> seen(h.vertices.size(), 0);
    seen[h.index_of(s)] = 1;
    std::deque<int> queue{s};
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (u == t) break;
        for (std::size_t ei = 0; ei < h.edges.size(); ++ei) {
            if (ei < skip_edge.size() && skip_edge[ei]) continue;
            const auto& e = h.edges[ei];
            if (!std::binary_search(e.begin(), e.end(), u)) continue;
            for (int w : e) {
                std::size_t wi = h.index_of(w);
                if (seen[wi]) continue;
                seen[wi] = 1;
                par_vertex[wi] = u;
                par_edge[wi] = ei;
                queue.push_back(w);
            }
        }
    }
    if (!seen[h.index_of(t)]) return std::nullopt;
    HyperPath path;
    int cur = t;
    while (cur != s) {
        std::size_t ci = h.index_of(cur);
        path.vertices.push_back(cur);
        path.edge_occ.push_back(par_edge[ci]);
        cur = par_vertex[ci];
    }
    path.vertices.push_back(s);
    std::reverse(path.vertices.begin(), path.vertices.end());
    std::reverse(path.edge_occ.begin(), path.edge_occ.end());
    // the BFS visits each vertex once, but a hyperedge can be reused by two
    // consecutive hops; splice such repeats out
    for (bool again = true; again;) {
        again = false;
        for (std::size_t i = 0; i + 1 < path.edge_occ.size() && !again; ++i)
            for (std::size_t j = i + 1; j < path.edge_occ.size() && !again; ++j)
                if (path.edge_occ[i] == path.edge_occ[j]) {
                    path.vertices.erase(path.vertices.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                        path.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    path.edge_occ.erase(path.edge_occ.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                        path.edge_occ.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    again = true;
                }
    }
    return path;
}

}  // namespace bn

#endif
