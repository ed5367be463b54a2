#ifndef BN_COMBINATORS_HPP
#define BN_COMBINATORS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "bn/cycle_space.hpp"
#include "bn/graph.hpp"
#include "bn/subgraph.hpp"

namespace bn {

// The combinator preconditions are validated and the resulting family is
// rank-certified against the target; nothing is taken on trust.

namespace detail {

inline void require_generates(const Subgraph& g, const CycleFamily& fam, const std::string& who) {
    if (!generates_cycle_space(g, fam))
        throw Error(who + ": input family does not generate its cycle space (rank " +
                    std::to_string(rank(fam)) + " < " + std::to_string(g.cycle_space_dim()) + ")");
}

inline void require_covers(const Subgraph& g, const Subgraph& gx, const Subgraph& gy,
                           const std::string& who) {
    for (std::size_t i = 0; i < g.vin.size(); ++i)
        if (g.vin[i] && !(gx.vin[i] | gy.vin[i]))
            throw Error(who + ": vertex " + std::to_string(i) + " in neither side");
    for (std::size_t i = 0; i < g.ein.size(); ++i) {
        if (g.ein[i] && !(gx.ein[i] | gy.ein[i]))
            throw Error(who + ": edge " + std::to_string(i) + " in neither side");
        if (!g.ein[i] && (gx.ein[i] | gy.ein[i]))
            throw Error(who + ": side edge " + std::to_string(i) + " outside the target");
    }
}

// Intersection graph of two subgraphs (shared vertices, shared edges).
inline Subgraph intersection(const Subgraph& a, const Subgraph& b) {
    Subgraph s = a;
    for (std::size_t i = 0; i < s.vin.size(); ++i) s.vin[i] &= b.vin[i];
    for (std::size_t i = 0; i < s.ein.size(); ++i) s.ein[i] &= b.ein[i];
    return s;
}

inline CycleFamily merged(const CycleFamily& a, const CycleFamily& b) {
    CycleFamily out;
    out.host_hash = a.host_hash ? a.host_hash : b.host_hash;
    out.members = a.members;
    for (const auto& m : b.members) out.members.push_back(m);
    return out;
}

}  // namespace detail

// Union of two overlapping subgraphs with connected intersection: the two
// families together generate the whole cycle space.
inline BasisCertificate combine_union(const Subgraph& g, const Subgraph& gx, const Subgraph& gy,
                                      const CycleFamily& bx, const CycleFamily& by) {
    detail::require_covers(g, gx, gy, "combine_union");
    Subgraph inter = detail::intersection(gx, gy);
    if (inter.num_vertices() == 0 || inter.num_components() != 1)
        throw Error("combine_union: intersection of the two sides is not connected");
    detail::require_generates(gx, bx, "combine_union(X)");
    detail::require_generates(gy, by, "combine_union(Y)");

    CycleFamily fam = detail::merged(bx, by);
    long long claimed = congestion(bx) + congestion(by);
    Derivation deriv{"combine_union", "bn(GX) + bn(GY)", claimed, {}};
    BasisCertificate cert = make_certificate(fam, claimed, g.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("combine_union: union family does not generate (rank " +
                    std::to_string(cert.rank) + " < " + std::to_string(cert.cycle_space_dim) + ")");
    return cert;
}

// Star family of congestion at most 2 for forest + star(v): orders the
// neighbors of v by DFS first-visit in the forest tree rooted at v and pairs
// consecutive neighbors through tree paths.
inline CycleFamily star_two_family(const Subgraph& g, int v, const std::vector<int>& forest_edges) {
    const Graph& host = *g.host;
    CycleFamily fam;
    fam.host_hash = host.hash();

    std::vector<int> neighbors;
    std::vector<int> star_edge(static_cast<std::size_t>(host.num_vertices()), -1);
    for (auto [w, e] : host.incident(v)) {
        if (!g.has_edge(e)) continue;
        neighbors.push_back(w);
        star_edge[static_cast<std::size_t>(w)] = e;
    }
    if (neighbors.size() <= 1) return fam;

    Subgraph forest = Subgraph::empty(host).plus_edges(forest_edges);
    for (std::size_t i = 0; i < g.vin.size(); ++i) forest.vin[i] = g.vin[i];

    // DFS from v over the forest, smallest neighbor first
    std::vector<int> order;
    std::vector<char> seen(static_cast<std::size_t>(host.num_vertices()), 0);
    std::vector<int> stack{v};
    seen[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u != v && star_edge[static_cast<std::size_t>(u)] >= 0) order.push_back(u);
        const auto& inc = host.incident(u);
        for (auto it = inc.rbegin(); it != inc.rend(); ++it) {
            auto [w, e] = *it;
            if (!forest.has_edge(e) || seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
        }
    }
    if (order.size() != neighbors.size())
        throw Error("star_two_family: forest does not reach every neighbor of v");

    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        int a = order[i], b = order[i + 1];
        auto path = shortest_path_in(forest, a, b);
        if (!path) throw Error("star_two_family: neighbors in different forest trees");
        EdgeVector vec = EdgeVector::from_edges(host, path->edge_ids);
        vec.flip(star_edge[static_cast<std::size_t>(a)]);
        vec.flip(star_edge[static_cast<std::size_t>(b)]);
        if (!vec.empty()) fam.members.push_back(std::move(vec));
    }
    return fam;
}

// Spanning forest of g built as a forest of g - v plus exactly one edge from
// v into each adjacent component; those single attachments create no cycle
// beside the basis of g - v.
inline std::vector<int> add_vertex_forest(const Subgraph& g, int v) {
    Subgraph without = g.minus_vertex(v);
    std::vector<int> forest = spanning_forest_in(without);
    auto comp = without.components();
    std::set<int> attached;
    for (auto [w, e] : g.host->incident(v)) {
        if (!g.has_edge(e)) continue;
        int c = comp[static_cast<std::size_t>(w)];
        if (attached.insert(c).second) forest.push_back(e);
    }
    std::sort(forest.begin(), forest.end());
    return forest;
}

// Re-adds a vertex: a congestion-2 family over forest + star(v) joins the
// basis of g - v.
inline BasisCertificate add_vertex(const Subgraph& g, int v, const CycleFamily& b_minus) {
    if (v < 0 || v >= g.host->num_vertices() || !g.has_vertex(v))
        throw Error("add_vertex: vertex not in the target subgraph");
    Subgraph without = g.minus_vertex(v);
    detail::require_generates(without, b_minus, "add_vertex");

    std::vector<int> forest = add_vertex_forest(g, v);
    CycleFamily star = star_two_family(g, v, forest);
    // make the star sub-family a basis of forest+star; never increases its
    // congestion
    Subgraph g2 = Subgraph::empty(*g.host).plus_edges(forest);
    for (std::size_t i = 0; i < g.vin.size(); ++i) g2.vin[i] = g.vin[i];
    for (auto [w, e] : g.host->incident(v))
        if (g.has_edge(e)) {
            (void)w;
            g2.ein[static_cast<std::size_t>(e)] = 1;
        }
    CycleFamily star_basis = prune_to_basis(star, g2.cycle_space_dim());

    CycleFamily fam = detail::merged(b_minus, star_basis);
    long long claimed = congestion(b_minus) + 2;
    Derivation deriv{"add_vertex", "bn(G-v) + 2", claimed, {}};
    BasisCertificate cert = make_certificate(fam, claimed, g.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("add_vertex: family does not generate after re-adding vertex " +
                    std::to_string(v));
    return cert;
}

// Triangle family through an apex adjacent to every other vertex; congestion 3
// when the rest of the graph is subcubic.
inline BasisCertificate apex_triangle_basis(const Graph& g, int apex) {
    Subgraph full = Subgraph::full(g);
    CycleFamily fam(g);
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [a, b] = g.edge(e);
        if (a == apex || b == apex) continue;
        int ea = g.edge_id(apex, a), eb = g.edge_id(apex, b);
        if (ea < 0 || eb < 0) throw Error("apex_triangle_basis: vertex is not an apex");
        fam.members.push_back(EdgeVector::from_edges(g, {e, ea, eb}));
    }
    int max_deg = 0;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (v != apex) max_deg = std::max(max_deg, g.degree(v) - 1);
    long long claimed = std::max(1, max_deg);
    Derivation deriv{"apex_triangles", "max degree of G - apex", claimed, {}};
    BasisCertificate cert = make_certificate(fam, claimed, full.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("apex_triangle_basis: triangles do not generate (apex misses a component?)");
    return cert;
}

// Adds an edge set back via fundamental cycles; edges joining two components
// are peeled first and add no cycle.
inline BasisCertificate add_edges_fallback(const Subgraph& g, const std::vector<int>& a,
                                           const CycleFamily& b_minus) {
    for (int e : a)
        if (!g.has_edge(e)) throw Error("add_edges_fallback: edge not in the target subgraph");
    Subgraph without = g.minus_edges(a);
    detail::require_generates(without, b_minus, "add_edges_fallback");

    // peel edges joining two components, in edge-id order
    std::vector<int> work = a;
    std::sort(work.begin(), work.end());
    work.erase(std::unique(work.begin(), work.end()), work.end());
    Subgraph grown = without;
    for (bool again = true; again;) {
        again = false;
        auto comp = grown.components();
        for (auto it = work.begin(); it != work.end(); ++it) {
            auto [u, v] = g.host->edge(*it);
            if (comp[static_cast<std::size_t>(u)] != comp[static_cast<std::size_t>(v)]) {
                grown = grown.plus_edges({*it});
                work.erase(it);
                again = true;
                break;
            }
        }
    }

    // fundamental cycles of the remaining edges w.r.t. a spanning forest
    std::vector<int> forest = spanning_forest_in(grown);
    Subgraph fsub = Subgraph::empty(*g.host).plus_edges(forest);
    for (std::size_t i = 0; i < g.vin.size(); ++i) fsub.vin[i] = g.vin[i];
    CycleFamily fam = b_minus;
    if (fam.host_hash == 0) fam.host_hash = g.host->hash();
    for (int e : work) {
        auto [u, v] = g.host->edge(e);
        auto path = shortest_path_in(fsub, u, v);
        if (!path) throw Error("add_edges_fallback: endpoints not connected after peeling");
        EdgeVector vec = EdgeVector::from_edges(*g.host, path->edge_ids);
        vec.flip(e);
        fam.members.push_back(std::move(vec));
    }
    long long claimed = congestion(b_minus) + static_cast<long long>(a.size());
    Derivation deriv{"add_edges_fallback", "bn(G-A) + |A|  (in place of bn(G-A) + O(log^2 |A|))",
                     claimed, {}};
    BasisCertificate cert = make_certificate(fam, claimed, g.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("add_edges_fallback: family does not generate after adding edges");
    return cert;
}

// Deletes an edge set: each basis cycle has its deleted edges replaced by
// BFS detour paths; the result generates the cycle space of g - A.
inline BasisCertificate delete_edges(const Subgraph& g, const std::vector<int>& a,
                                     const CycleFamily& b) {
    for (int e : a)
        if (!g.has_edge(e)) throw Error("delete_edges: edge not in the target subgraph");
    detail::require_generates(g, b, "delete_edges");

    std::vector<int> work = a;
    std::sort(work.begin(), work.end());
    work.erase(std::unique(work.begin(), work.end()), work.end());
    Subgraph target = g.minus_edges(work);

    // peel cut edges: repeatedly drop from the deletion set any edge joining
    // two components of the current remainder (those edges lie on no cycle)
    std::vector<int> essential = work;
    Subgraph remainder = target;
    for (bool again = true; again;) {
        again = false;
        auto comp = remainder.components();
        for (auto it = essential.begin(); it != essential.end(); ++it) {
            auto [u, v] = g.host->edge(*it);
            if (comp[static_cast<std::size_t>(u)] != comp[static_cast<std::size_t>(v)]) {
                remainder = remainder.plus_edges({*it});
                essential.erase(it);
                again = true;
                break;
            }
        }
    }

    // replacement path for each essential edge, inside the remainder minus the
    // essential set
    std::map<int, EdgeVector> substitute;
    for (int e : essential) {
        auto [u, v] = g.host->edge(e);
        auto path = shortest_path_in(remainder, u, v);
        if (!path)
            throw Error("delete_edges: no replacement path for edge " + std::to_string(e));
        EdgeVector vec = EdgeVector::from_edges(*g.host, path->edge_ids);
        vec.flip(e);  // P_e xor {e}
        substitute.emplace(e, std::move(vec));
    }

    CycleFamily fam;
    fam.host_hash = g.host->hash();
    for (const auto& c : b.members) {
        EdgeVector out = c;
        for (int e : essential)
            if (c.test(e)) out ^= substitute.at(e);
        fam.members.push_back(std::move(out));
    }
    long long claimed =
        (static_cast<long long>(a.size()) + 1) * std::max(1, congestion(b));
    if (b.members.empty()) claimed = 0;
    CycleFamily pruned = prune_to_basis(fam, target.cycle_space_dim());
    Derivation deriv{"delete_edges", "(|A|+1) * bn(G)", claimed, {}};
    BasisCertificate cert = make_certificate(pruned, claimed, target.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("delete_edges: family does not generate the reduced graph");
    return cert;
}

// Union of edge subgraphs across a small separator: forest trees are branched
// out from the separator vertices, the cut forest edges are re-added on each
// side, and the sides are merged per component.
inline BasisCertificate combine_components(const Subgraph& g, const Subgraph& gx,
                                           const Subgraph& gy, const CycleFamily& bx,
                                           const CycleFamily& by);

inline BasisCertificate split_small_separator(const Subgraph& g, const Subgraph& gx,
                                              const Subgraph& gy, const CycleFamily& bx,
                                              const CycleFamily& by) {
    detail::require_covers(g, gx, gy, "split_small_separator");
    // no edge may join X-only to Y-only vertices
    for (int e : g.edge_ids()) {
        auto [u, v] = g.host->edge(e);
        bool ux = gx.has_vertex(u), uy = gy.has_vertex(u);
        bool vx = gx.has_vertex(v), vy = gy.has_vertex(v);
        if ((ux && !uy && vy && !vx) || (uy && !ux && vx && !vy))
            throw Error("split_small_separator: edge " + std::to_string(u) + "-" +
                        std::to_string(v) + " crosses the separation");
    }
    detail::require_generates(gx, bx, "split_small_separator(X)");
    detail::require_generates(gy, by, "split_small_separator(Y)");

    std::vector<int> separator;
    for (int v = 0; v < g.host->num_vertices(); ++v)
        if (gx.has_vertex(v) && gy.has_vertex(v)) separator.push_back(v);

    std::vector<int> forest = spanning_forest_in(g);
    Subgraph fsub = Subgraph::empty(*g.host).plus_edges(forest);
    for (std::size_t i = 0; i < g.vin.size(); ++i) fsub.vin[i] = g.vin[i];

    // cut forest edges until all separator vertices live in distinct trees
    std::vector<int> cut;
    for (bool again = true; again;) {
        again = false;
        auto comp = fsub.components();
        for (std::size_t i = 0; i < separator.size() && !again; ++i)
            for (std::size_t j = i + 1; j < separator.size() && !again; ++j) {
                int si = separator[i], sj = separator[j];
                if (comp[static_cast<std::size_t>(si)] != comp[static_cast<std::size_t>(sj)])
                    continue;
                auto path = shortest_path_in(fsub, si, sj);
                if (!path) throw Error("split_small_separator: internal forest error");
                int e = path->edge_ids.front();
                cut.push_back(e);
                fsub.ein[static_cast<std::size_t>(e)] = 0;
                again = true;
            }
    }

    // each side: its own edges plus the cut forest, then the cut edges the
    // side does not already own added back through fundamental cycles
    std::vector<int> cut_x, cut_y;
    for (int e : cut) {
        if (!gx.has_edge(e)) cut_x.push_back(e);
        if (!gy.has_edge(e)) cut_y.push_back(e);
    }
    Subgraph gx_full = Subgraph::unite(gx, fsub).plus_edges(cut_x);
    Subgraph gy_full = Subgraph::unite(gy, fsub).plus_edges(cut_y);
    BasisCertificate cx = add_edges_fallback(gx_full, cut_x, bx);
    BasisCertificate cy = add_edges_fallback(gy_full, cut_y, by);

    BasisCertificate out = combine_components(g, gx_full, gy_full, cx.family, cy.family);
    out.claimed_congestion = cx.claimed_congestion + cy.claimed_congestion;
    out.derivation = Derivation{"split_small_separator",
                                "bn(G[X]) + bn(G[Y]) + 2(k-1)  (in place of + O(log^2 k))",
                                out.claimed_congestion,
                                {cx.derivation, cy.derivation}};
    if (out.measured_congestion > out.claimed_congestion)
        throw Error("split_small_separator: measured congestion exceeds claim");
    return out;
}

// Separation-based front end: the sides are the induced subgraphs of X and Y.
inline BasisCertificate split_small_separator(const Subgraph& g, const Separation& sep,
                                              const CycleFamily& bx, const CycleFamily& by) {
    Diagnostics d = validate_separation(*g.host, sep);
    if (!d) throw Error("split_small_separator: " + d.message);
    return split_small_separator(g, Subgraph::induced(*g.host, sep.x),
                                 Subgraph::induced(*g.host, sep.y), bx, by);
}

// Several components on the X side: requires each X-component to meet Y in a
// connected subgraph, and folds them in one at a time.
inline BasisCertificate combine_components(const Subgraph& g, const Subgraph& gx,
                                           const Subgraph& gy, const CycleFamily& bx,
                                           const CycleFamily& by) {
    detail::require_covers(g, gx, gy, "combine_components");
    detail::require_generates(gx, bx, "combine_components(X)");
    detail::require_generates(gy, by, "combine_components(Y)");

    auto comp = gx.components();
    int pieces = gx.num_components();
    if (pieces == 0) {
        // X empty: Y alone carries the space
        BasisCertificate cert = make_certificate(
            by, congestion(bx) + congestion(by), g.cycle_space_dim(),
            {"combine_components", "bn(GX) + bn(GY)", congestion(bx) + congestion(by), {}});
        if (cert.rank != cert.cycle_space_dim)
            throw Error("combine_components: Y family does not generate the target");
        return cert;
    }

    for (int p = 0; p < pieces; ++p) {
        // gx[U] ∩ gy must be connected
        Subgraph piece = Subgraph::empty(*g.host);
        for (std::size_t v = 0; v < gx.vin.size(); ++v)
            if (gx.vin[v] && comp[v] == p) piece.vin[v] = 1;
        for (int e : gx.edge_ids()) {
            auto [u, w] = g.host->edge(e);
            if (piece.has_vertex(u) && piece.has_vertex(w)) piece.ein[static_cast<std::size_t>(e)] = 1;
        }
        Subgraph overlap = detail::intersection(piece, gy);
        if (overlap.num_vertices() == 0 || overlap.num_components() != 1)
            throw Error("combine_components: component " + std::to_string(p) +
                        " meets the other side in a disconnected graph");
    }

    // split the X family per component; a member may not span two components
    std::vector<CycleFamily> per_piece(static_cast<std::size_t>(pieces));
    for (auto& f : per_piece) f.host_hash = g.host->hash();
    for (std::size_t i = 0; i < bx.members.size(); ++i) {
        const auto& m = bx.members[i];
        int piece = -1;
        for (int e : m.edge_ids()) {
            auto [u, w] = g.host->edge(e);
            (void)w;
            int p = comp[static_cast<std::size_t>(u)];
            if (piece == -1) piece = p;
            if (p != piece)
                throw Error("combine_components: family member " + std::to_string(i) +
                            " spans two components of GX");
        }
        if (piece >= 0) per_piece[static_cast<std::size_t>(piece)].members.push_back(m);
    }

    // fold components in, smallest first; every step is a connected-overlap
    // union whose certificate is rank-checked
    Subgraph acc = gy;
    CycleFamily fam = by;
    long long claimed = congestion(bx) + congestion(by);
    for (int p = 0; p < pieces; ++p) {
        Subgraph piece = Subgraph::empty(*g.host);
        for (std::size_t v = 0; v < gx.vin.size(); ++v)
            if (gx.vin[v] && comp[v] == p) piece.vin[v] = 1;
        for (int e : gx.edge_ids()) {
            auto [u, w] = g.host->edge(e);
            if (piece.has_vertex(u) && piece.has_vertex(w)) piece.ein[static_cast<std::size_t>(e)] = 1;
        }
        Subgraph next = Subgraph::unite(acc, piece);
        BasisCertificate step =
            combine_union(next, piece, acc, per_piece[static_cast<std::size_t>(p)], fam);
        acc = next;
        fam = step.family;
    }
    Derivation deriv{"combine_components", "bn(GX) + bn(GY)", claimed, {}};
    BasisCertificate cert = make_certificate(fam, claimed, g.cycle_space_dim(), deriv);
    if (cert.rank != cert.cycle_space_dim)
        throw Error("combine_components: final family does not generate");
    return cert;
}

}  // namespace bn

#endif
