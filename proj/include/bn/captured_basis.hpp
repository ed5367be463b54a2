#ifndef BN_CAPTURED_BASIS_HPP
#define BN_CAPTURED_BASIS_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bn/cycle_space.hpp"
#include "bn/decomposition.hpp"
#include "bn/graph.hpp"
#include "bn/subgraph.hpp"

namespace bn {

// One uv-path per (node, adhesion pair) triple; multiset semantics, i.e. the
// same path under two triples counts twice towards congestion.
struct CapturingPathFamily {
    std::map<std::tuple<int, int, int>, VertexPath> entries;  // key (t, u, v), u < v

    const VertexPath& at(int t, int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = entries.find({t, u, v});
        if (it == entries.end())
            throw Error("path family is missing entry (" + std::to_string(t) + "," +
                        std::to_string(u) + "," + std::to_string(v) + ")");
        return it->second;
    }
};

// Validity of a decomposition against a subgraph target (T2 ranges over the
// subgraph's edges only).
inline Diagnostics validate_sub(const Subgraph& g, const TreeDecomposition& td) {
    auto [mat, verts] = g.materialize();
    // bags must live inside the subgraph; translate and reuse the host checker
    std::vector<int> local(g.vin.size(), -1);
    for (std::size_t i = 0; i < verts.size(); ++i)
        local[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
    TreeDecomposition tl = td;
    for (auto& nd : tl.nodes)
        for (auto& v : nd.bag) {
            if (v < 0 || v >= static_cast<int>(local.size()) || local[static_cast<std::size_t>(v)] < 0)
                return Diagnostics::fail("bag of node " + std::to_string(nd.id) +
                                         " contains vertex " + std::to_string(v) +
                                         " outside the target");
            v = local[static_cast<std::size_t>(v)];
        }
    for (auto& nd : tl.nodes) std::sort(nd.bag.begin(), nd.bag.end());
    return validate(mat, tl);
}

inline std::vector<std::vector<int>> adhesions_of(const TreeDecomposition& td) {
    std::vector<std::vector<int>> adh(td.nodes.size());
    for (int t = 0; t < td.size(); ++t)
        if (td.parent(t) >= 0)
            adh[static_cast<std::size_t>(t)] = sorted_intersection(td.bag(t), td.bag(td.parent(t)));
    return adh;
}

// Trivial capturing family: a BFS path in g for every node and adhesion pair.
inline CapturingPathFamily default_path_family(const Subgraph& g, const TreeDecomposition& td) {
    CapturingPathFamily pf;
    auto adh = adhesions_of(td);
    for (int t = 0; t < td.size(); ++t) {
        const auto& a = adh[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                auto path = shortest_path_in(g, a[i], a[j]);
                if (!path)
                    throw Error("default_path_family: adhesion pair " + std::to_string(a[i]) +
                                "," + std::to_string(a[j]) + " not connected");
                pf.entries[{t, a[i], a[j]}] = *path;
            }
    }
    return pf;
}

inline Diagnostics check_path_family_complete(const Subgraph& g, const TreeDecomposition& td,
                                              const CapturingPathFamily& pf) {
    auto adh = adhesions_of(td);
    for (int t = 0; t < td.size(); ++t) {
        const auto& a = adh[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                auto it = pf.entries.find({t, a[i], a[j]});
                if (it == pf.entries.end())
                    return Diagnostics::fail("missing path for (" + std::to_string(t) + "," +
                                             std::to_string(a[i]) + "," + std::to_string(a[j]) +
                                             ")");
                const VertexPath& p = it->second;
                Diagnostics d = validate_path(*g.host, p);
                if (!d) return d;
                for (int e : p.edge_ids)
                    if (!g.has_edge(e))
                        return Diagnostics::fail("path for (" + std::to_string(t) + "," +
                                                 std::to_string(a[i]) + "," +
                                                 std::to_string(a[j]) +
                                                 ") leaves the target subgraph");
                if (!((p.source() == a[i] && p.target() == a[j]) ||
                      (p.source() == a[j] && p.target() == a[i])))
                    return Diagnostics::fail("path for (" + std::to_string(t) + "," +
                                             std::to_string(a[i]) + "," + std::to_string(a[j]) +
                                             ") has wrong endpoints");
            }
    }
    return Diagnostics::pass();
}

inline int path_family_congestion(const Subgraph& g, const CapturingPathFamily& pf) {
    std::vector<int> count(g.ein.size(), 0);
    int best = 0;
    for (const auto& [key, path] : pf.entries) {
        (void)key;
        for (int e : path.edge_ids) best = std::max(best, ++count[static_cast<std::size_t>(e)]);
    }
    return best;
}

// Torso of a decomposition node over a subgraph target: induced part edges
// plus cliquified adhesion pairs of the node and its children. Returns the
// torso graph and its local-to-host vertex map (the sorted bag).
inline std::pair<Graph, std::vector<int>> torso_graph(const Subgraph& g,
                                                      const TreeDecomposition& td, int t) {
    auto adh = adhesions_of(td);
    auto children = td.children();
    const auto& bag = td.bag(t);
    std::vector<int> local(g.vin.size(), -1);
    for (std::size_t i = 0; i < bag.size(); ++i)
        local[static_cast<std::size_t>(bag[i])] = static_cast<int>(i);
    std::set<std::pair<int, int>> edges;
    for (int e : g.edge_ids()) {
        auto [u, v] = g.host->edge(e);
        if (local[static_cast<std::size_t>(u)] >= 0 && local[static_cast<std::size_t>(v)] >= 0)
            edges.insert({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
    }
    auto add_clique = [&](const std::vector<int>& s) {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                int a = local[static_cast<std::size_t>(s[i])], b = local[static_cast<std::size_t>(s[j])];
                if (a < 0 || b < 0) throw Error("torso_graph: adhesion vertex outside the bag");
                if (a > b) std::swap(a, b);
                edges.insert({a, b});
            }
    };
    add_clique(adh[static_cast<std::size_t>(t)]);
    for (int c : children[static_cast<std::size_t>(t)]) add_clique(adh[static_cast<std::size_t>(c)]);
    return {Graph(static_cast<int>(bag.size()),
                  std::vector<std::pair<int, int>>(edges.begin(), edges.end())),
            bag};
}

struct CapturedBasisResult {
    BasisCertificate certificate;
    int path_congestion = 0;       // c
    int max_torso_congestion = 0;  // b
    // formal per-edge usage counts mirroring the three congestion sources
    std::vector<int> type1_count;
    std::vector<int> core_count;
    std::vector<int> substitute_count;
};

// Builds a generating family for the target from torso bases and a capturing
// path family; the certificate claims (2c+1)(b+1).
inline CapturedBasisResult captured_adhesion_basis(
    const Subgraph& g, const TreeDecomposition& td,
    const std::map<int, CycleFamily>& torso_bases, const CapturingPathFamily& pf) {
    const Graph& host = *g.host;
    Diagnostics valid = validate_sub(g, td);
    if (!valid) throw Error("captured_adhesion_basis: invalid decomposition: " + valid.message);
    Diagnostics complete = check_path_family_complete(g, td, pf);
    if (!complete) throw Error("captured_adhesion_basis: " + complete.message);

    auto adh = adhesions_of(td);
    auto children = td.children();
    auto order = td.preorder();
    std::vector<int> pre_index(td.nodes.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i)
        pre_index[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    // pairs contained in any adhesion, with the nodes holding them in preorder
    std::map<std::pair<int, int>, std::vector<int>> pair_nodes;
    for (int t = 0; t < td.size(); ++t) {
        const auto& a = adh[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j)
                pair_nodes[{a[i], a[j]}].push_back(t);
    }
    for (auto& [pair, nodes] : pair_nodes) {
        (void)pair;
        std::sort(nodes.begin(), nodes.end(),
                  [&](int a, int b) { return pre_index[static_cast<std::size_t>(a)] <
                                             pre_index[static_cast<std::size_t>(b)]; });
    }

    CapturedBasisResult result;
    result.type1_count.assign(g.ein.size(), 0);
    result.core_count.assign(g.ein.size(), 0);
    result.substitute_count.assign(g.ein.size(), 0);

    CycleFamily fam;
    fam.host_hash = host.hash();

    auto path_vector = [&](int t, int u, int v) {
        const VertexPath& p = pf.at(t, u, v);
        return EdgeVector::from_edges(host, p.edge_ids);
    };
    auto count_path = [&](int t, int u, int v, std::vector<int>& counter) {
        const VertexPath& p = pf.at(t, u, v);
        for (int e : p.edge_ids) ++counter[static_cast<std::size_t>(e)];
    };

    // type 1: switching cycles between consecutive holders of a pair, plus the
    // anchor cycle onto the real edge when it exists
    for (const auto& [pair, nodes] : pair_nodes) {
        auto [u, v] = pair;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            EdgeVector cyc = path_vector(nodes[i], u, v) ^ path_vector(nodes[i + 1], u, v);
            count_path(nodes[i], u, v, result.type1_count);
            count_path(nodes[i + 1], u, v, result.type1_count);
            fam.members.push_back(std::move(cyc));
        }
        int eid = host.edge_id(u, v);
        if (eid >= 0 && g.has_edge(eid)) {
            EdgeVector cyc = path_vector(nodes.front(), u, v);
            cyc.flip(eid);
            count_path(nodes.front(), u, v, result.type1_count);
            ++result.type1_count[static_cast<std::size_t>(eid)];
            fam.members.push_back(std::move(cyc));
        }
    }

    // type 2: each torso basis cycle with its adhesion-pair edges replaced by
    // captured paths
    int b = 0;
    for (int t : order) {
        auto it = torso_bases.find(t);
        if (it == torso_bases.end())
            throw Error("captured_adhesion_basis: no torso basis for node " + std::to_string(t));
        auto [torso, verts] = torso_graph(g, td, t);
        const CycleFamily& basis = it->second;
        if (!basis.members.empty() && basis.host_hash != torso.hash())
            throw Error("captured_adhesion_basis: torso basis of node " + std::to_string(t) +
                        " is keyed to a different torso graph");
        if (!generates_cycle_space(torso, basis))
            throw Error("captured_adhesion_basis: torso basis of node " + std::to_string(t) +
                        " does not generate its torso (rank " + std::to_string(rank(basis)) +
                        " < " + std::to_string(cycle_space_dimension(torso)) + ")");
        b = std::max(b, congestion(basis));

        for (const auto& c : basis.members) {
            EdgeVector out(host);
            for (int le : c.edge_ids()) {
                auto [lu, lv] = torso.edge(le);
                int u = verts[static_cast<std::size_t>(lu)], v = verts[static_cast<std::size_t>(lv)];
                if (u > v) std::swap(u, v);
                auto pn = pair_nodes.find({u, v});
                if (pn != pair_nodes.end()) {
                    // substitute through the chosen holder among t and its children
                    int te = -1;
                    auto holds = [&](int node) {
                        const auto& a = adh[static_cast<std::size_t>(node)];
                        return std::binary_search(a.begin(), a.end(), u) &&
                               std::binary_search(a.begin(), a.end(), v);
                    };
                    if (holds(t)) te = t;
                    for (int ch : children[static_cast<std::size_t>(t)])
                        if ((te == -1 || ch < te) && holds(ch)) te = ch;
                    if (te == -1)
                        throw Error("captured_adhesion_basis: adhesion pair " +
                                    std::to_string(u) + "," + std::to_string(v) +
                                    " not held by node " + std::to_string(t) +
                                    " or its children");
                    // the cycle's own copy of uv and the copy inside e xor P
                    // cancel, so only the path remains (even when uv is a real
                    // edge of the graph)
                    out ^= path_vector(te, u, v);
                    count_path(te, u, v, result.substitute_count);
                } else {
                    int eid = host.edge_id(u, v);
                    if (eid < 0 || !g.has_edge(eid))
                        throw Error("captured_adhesion_basis: torso edge " + std::to_string(u) +
                                    "-" + std::to_string(v) +
                                    " is neither a graph edge nor inside any adhesion");
                    out.flip(eid);
                    ++result.core_count[static_cast<std::size_t>(eid)];
                }
            }
            int odd = odd_degree_vertex(host, out);
            if (odd >= 0)
                throw Error("captured_adhesion_basis: substituted cycle is not an F2-cycle "
                            "(odd degree at vertex " + std::to_string(odd) + ")");
            fam.members.push_back(std::move(out));
        }
    }

    int c = path_family_congestion(g, pf);
    result.path_congestion = c;
    result.max_torso_congestion = b;
    long long claimed = (2LL * c + 1) * (static_cast<long long>(b) + 1);
    Derivation deriv{"captured_adhesion_basis", "(2c+1)(b+1)", claimed, {}};
    result.certificate = make_certificate(fam, claimed, g.cycle_space_dim(), deriv);
    if (result.certificate.rank != result.certificate.cycle_space_dim)
        throw Error("captured_adhesion_basis: output does not generate the cycle space (rank " +
                    std::to_string(result.certificate.rank) + " < " +
                    std::to_string(result.certificate.cycle_space_dim) + ")");
    return result;
}

}  // namespace bn

#endif
