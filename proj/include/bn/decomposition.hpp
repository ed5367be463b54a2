#ifndef BN_DECOMPOSITION_HPP
#define BN_DECOMPOSITION_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bn/graph.hpp"
#include "bn/hypergraph.hpp"
#include "bn/subgraph.hpp"

namespace bn {

// Rooted tree-decomposition. Node ids are 0..size-1; parent -1 marks the root.
struct DecompNode {
    int id = 0;
    int parent = -1;
    std::vector<int> bag;  // sorted vertex ids
};

struct TreeDecomposition {
    std::vector<DecompNode> nodes;
    std::uint64_t host_hash = 0;

    int size() const { return static_cast<int>(nodes.size()); }
    int root() const {
        for (const auto& nd : nodes)
            if (nd.parent < 0) return nd.id;
        throw Error("tree decomposition has no root");
    }
    const std::vector<int>& bag(int t) const { return nodes[static_cast<std::size_t>(t)].bag; }
    int parent(int t) const { return nodes[static_cast<std::size_t>(t)].parent; }

    std::vector<std::vector<int>> children() const {
        std::vector<std::vector<int>> ch(nodes.size());
        for (const auto& nd : nodes)
            if (nd.parent >= 0) ch[static_cast<std::size_t>(nd.parent)].push_back(nd.id);
        for (auto& c : ch) std::sort(c.begin(), c.end());
        return ch;
    }

    // DFS preorder from the root, children in ascending id order.
    std::vector<int> preorder() const {
        auto ch = children();
        std::vector<int> order;
        std::vector<int> stack{root()};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            order.push_back(t);
            const auto& c = ch[static_cast<std::size_t>(t)];
            for (auto it = c.rbegin(); it != c.rend(); ++it) stack.push_back(*it);
        }
        return order;
    }
};

inline std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Diagnostics validate(const Graph& g, const TreeDecomposition& td) {
    int n = td.size();
    if (n == 0) return Diagnostics::fail("decomposition has no nodes");
    int roots = 0;
    for (int t = 0; t < n; ++t) {
        const auto& nd = td.nodes[static_cast<std::size_t>(t)];
        if (nd.id != t) return Diagnostics::fail("node ids are not 0..k-1 in order");
        if (nd.parent < 0)
            ++roots;
        else if (nd.parent >= n)
            return Diagnostics::fail("node " + std::to_string(t) + " has invalid parent");
        if (!std::is_sorted(nd.bag.begin(), nd.bag.end()) ||
            std::adjacent_find(nd.bag.begin(), nd.bag.end()) != nd.bag.end())
            return Diagnostics::fail("bag of node " + std::to_string(t) + " not sorted/distinct");
        for (int v : nd.bag)
            if (v < 0 || v >= g.num_vertices())
                return Diagnostics::fail("bag of node " + std::to_string(t) +
                                         " contains unknown vertex " + std::to_string(v));
    }
    if (roots != 1) return Diagnostics::fail("expected exactly one root, found " + std::to_string(roots));
    // acyclicity / reachability from root
    {
        auto ch = td.children();
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::deque<int> queue{td.root()};
        seen[static_cast<std::size_t>(td.root())] = 1;
        int visited = 0;
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop_front();
            ++visited;
            for (int c : ch[static_cast<std::size_t>(t)]) {
                if (seen[static_cast<std::size_t>(c)])
                    return Diagnostics::fail("parent pointers contain a cycle");
                seen[static_cast<std::size_t>(c)] = 1;
                queue.push_back(c);
            }
        }
        if (visited != n) return Diagnostics::fail("tree is not connected");
    }
    // (T1) coverage
    std::vector<char> covered(static_cast<std::size_t>(g.num_vertices()), 0);
    for (const auto& nd : td.nodes)
        for (int v : nd.bag) covered[static_cast<std::size_t>(v)] = 1;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!covered[static_cast<std::size_t>(v)])
            return Diagnostics::fail("T1: vertex " + std::to_string(v) + " in no bag");
    // (T2) edges
    for (auto [u, v] : g.edges()) {
        bool found = false;
        for (const auto& nd : td.nodes)
            if (std::binary_search(nd.bag.begin(), nd.bag.end(), u) &&
                std::binary_search(nd.bag.begin(), nd.bag.end(), v)) {
                found = true;
                break;
            }
        if (!found)
            return Diagnostics::fail("T2: edge " + std::to_string(u) + "-" + std::to_string(v) +
                                     " in no bag");
    }
    // (T3) connected traces
    auto ch = td.children();
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<int> holding;
        for (const auto& nd : td.nodes)
            if (std::binary_search(nd.bag.begin(), nd.bag.end(), v)) holding.push_back(nd.id);
        if (holding.empty()) continue;
        std::set<int> hold(holding.begin(), holding.end());
        std::deque<int> queue{holding[0]};
        std::set<int> seen{holding[0]};
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop_front();
            std::vector<int> adj = ch[static_cast<std::size_t>(t)];
            if (td.parent(t) >= 0) adj.push_back(td.parent(t));
            for (int u : adj)
                if (hold.count(u) && !seen.count(u)) {
                    seen.insert(u);
                    queue.push_back(u);
                }
        }
        if (seen.size() != hold.size())
            return Diagnostics::fail("T3: trace of vertex " + std::to_string(v) +
                                     " is disconnected");
    }
    return Diagnostics::pass();
}

// Derived per-node views of a tree-decomposition, computed once up front so
// the structure can be shared read-only.
class DecompositionViews {
public:
    DecompositionViews(const Graph& g, const TreeDecomposition& td) : g_(&g), td_(&td) {
        int n = td.size();
        children_ = td.children();
        adhesion_.resize(static_cast<std::size_t>(n));
        margin_.resize(static_cast<std::size_t>(n));
        component_.resize(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const auto& nd = td.nodes[static_cast<std::size_t>(t)];
            if (nd.parent >= 0)
                adhesion_[static_cast<std::size_t>(t)] =
                    sorted_intersection(nd.bag, td.bag(nd.parent));
            margin_[static_cast<std::size_t>(t)] =
                sorted_difference(nd.bag, adhesion_[static_cast<std::size_t>(t)]);
        }
        // components bottom-up over the preorder
        auto order = td.preorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int t = *it;
            std::vector<int> acc = margin_[static_cast<std::size_t>(t)];
            for (int c : children_[static_cast<std::size_t>(t)])
                acc = sorted_union(acc, component_[static_cast<std::size_t>(c)]);
            component_[static_cast<std::size_t>(t)] = std::move(acc);
        }
    }

    const std::vector<int>& adhesion(int t) const { return adhesion_[static_cast<std::size_t>(t)]; }
    const std::vector<int>& margin(int t) const { return margin_[static_cast<std::size_t>(t)]; }
    const std::vector<int>& component(int t) const { return component_[static_cast<std::size_t>(t)]; }
    const std::vector<int>& children(int t) const { return children_[static_cast<std::size_t>(t)]; }

    // Pairs {u,v} lying inside the adhesion of t or one of its children; these
    // are exactly the cliquified torso edges of t (some may be real edges).
    std::vector<std::pair<int, int>> torso_pairs(int t) const {
        std::set<std::pair<int, int>> pairs;
        auto add_clique = [&pairs](const std::vector<int>& s) {
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j) pairs.insert({s[i], s[j]});
        };
        add_clique(adhesion(t));
        for (int c : children(t)) add_clique(adhesion(c));
        return {pairs.begin(), pairs.end()};
    }

    // Torso of t as a standalone graph over bag(t); returns the graph and the
    // local-to-host vertex map (= sorted bag).
    std::pair<Graph, std::vector<int>> torso(int t) const {
        const auto& bag = td_->bag(t);
        std::vector<int> local(static_cast<std::size_t>(g_->num_vertices()), -1);
        for (std::size_t i = 0; i < bag.size(); ++i)
            local[static_cast<std::size_t>(bag[i])] = static_cast<int>(i);
        std::set<std::pair<int, int>> edges;
        for (int e = 0; e < g_->num_edges(); ++e) {
            auto [u, v] = g_->edge(e);
            if (local[static_cast<std::size_t>(u)] >= 0 && local[static_cast<std::size_t>(v)] >= 0)
                edges.insert({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
        }
        for (auto [u, v] : torso_pairs(t))
            edges.insert({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
        return {Graph(static_cast<int>(bag.size()),
                      std::vector<std::pair<int, int>>(edges.begin(), edges.end())),
                bag};
    }

    // Torso of t minus the adhesion vertices of t.
    std::pair<Graph, std::vector<int>> marginal_graph(int t) const {
        auto [tor, verts] = torso(t);
        const auto& adh = adhesion(t);
        std::vector<int> keep;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (!std::binary_search(adh.begin(), adh.end(), verts[i]))
                keep.push_back(static_cast<int>(i));
        std::vector<int> local(verts.size(), -1);
        std::vector<int> out_verts;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            local[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
            out_verts.push_back(verts[static_cast<std::size_t>(keep[i])]);
        }
        std::vector<std::pair<int, int>> edges;
        for (auto [u, v] : tor.edges())
            if (local[static_cast<std::size_t>(u)] >= 0 && local[static_cast<std::size_t>(v)] >= 0)
                edges.push_back({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
        return {Graph(static_cast<int>(keep.size()), std::move(edges)), out_verts};
    }

private:
    const Graph* g_;
    const TreeDecomposition* td_;
    std::vector<std::vector<int>> children_;
    std::vector<std::vector<int>> adhesion_;
    std::vector<std::vector<int>> margin_;
    std::vector<std::vector<int>> component_;
};

inline std::pair<int, int> width_and_adhesion(const Graph& g, const TreeDecomposition& td) {
    DecompositionViews views(g, td);
    int width = -1, adh = 0;
    for (int t = 0; t < td.size(); ++t) {
        width = std::max(width, static_cast<int>(td.bag(t).size()) - 1);
        adh = std::max(adh, static_cast<int>(views.adhesion(t).size()));
    }
    return {width, adh};
}

// Reassigns node ids in DFS preorder; downstream tie-breaking depends on this.
inline TreeDecomposition renumber_preorder(const TreeDecomposition& td) {
    auto order = td.preorder();
    std::vector<int> new_id(td.nodes.size(), -1);
    for (std::size_t i = 0; i < order.size(); ++i)
        new_id[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    TreeDecomposition out;
    out.host_hash = td.host_hash;
    out.nodes.resize(td.nodes.size());
    for (const auto& nd : td.nodes) {
        DecompNode copy;
        copy.id = new_id[static_cast<std::size_t>(nd.id)];
        copy.parent = nd.parent < 0 ? -1 : new_id[static_cast<std::size_t>(nd.parent)];
        copy.bag = nd.bag;
        out.nodes[static_cast<std::size_t>(copy.id)] = std::move(copy);
    }
    return out;
}

// Saneness: nonempty margins, connected components, every adhesion vertex has
// a neighbor in the component.
inline Diagnostics check_sane(const Graph& g, const TreeDecomposition& td) {
    DecompositionViews views(g, td);
    for (int t = 0; t < td.size(); ++t) {
        if (views.margin(t).empty())
            return Diagnostics::fail("node " + std::to_string(t) + " has empty margin");
        Subgraph comp = Subgraph::induced(g, views.component(t));
        if (comp.num_components() > 1)
            return Diagnostics::fail("component of node " + std::to_string(t) + " disconnected");
        for (int a : views.adhesion(t)) {
            bool has = false;
            for (auto [w, e] : g.incident(a)) {
                (void)e;
                if (comp.has_vertex(w)) {
                    has = true;
                    break;
                }
            }
            if (!has)
                return Diagnostics::fail("adhesion vertex " + std::to_string(a) + " of node " +
                                         std::to_string(t) + " has no neighbor in the component");
        }
    }
    return Diagnostics::pass();
}

namespace detail {

// One pass of the saneness fixpoint; returns true if anything changed.
inline bool sane_pass(const Graph& g, TreeDecomposition& td) {
    bool changed = false;

    // (a) delete nodes with empty margin, splicing children to the parent
    for (bool again = true; again;) {
        again = false;
        DecompositionViews views(g, td);
        for (int t = 0; t < td.size(); ++t) {
            if (!views.margin(t).empty()) continue;
            if (td.parent(t) < 0) {
                // root with empty bag: a single child takes over
                auto ch = views.children(t);
                if (ch.empty()) {
                    if (td.size() == 1) break;  // degenerate: lone empty node
                    continue;
                }
                if (ch.size() > 1 && !td.bag(t).empty()) continue;  // margin empty but adhesion... root has no adhesion
                if (ch.size() > 1)
                    throw Error("make_sane: disconnected graph (empty root bag with several children)");
                TreeDecomposition out;
                out.host_hash = td.host_hash;
                for (const auto& nd : td.nodes) {
                    if (nd.id == t) continue;
                    DecompNode copy = nd;
                    if (copy.parent == t) copy.parent = -1;
                    out.nodes.push_back(copy);
                }
                // compact ids
                std::vector<int> remap(td.nodes.size(), -1);
                for (std::size_t i = 0; i < out.nodes.size(); ++i)
                    remap[static_cast<std::size_t>(out.nodes[i].id)] = static_cast<int>(i);
                for (auto& nd : out.nodes) {
                    nd.id = remap[static_cast<std::size_t>(nd.id)];
                    if (nd.parent >= 0) nd.parent = remap[static_cast<std::size_t>(nd.parent)];
                }
                td = renumber_preorder(out);
                changed = again = true;
                break;
            }
            // non-root: splice
            TreeDecomposition out;
            out.host_hash = td.host_hash;
            int par = td.parent(t);
            for (const auto& nd : td.nodes) {
                if (nd.id == t) continue;
                DecompNode copy = nd;
                if (copy.parent == t) copy.parent = par;
                out.nodes.push_back(copy);
            }
            std::vector<int> remap(td.nodes.size(), -1);
            for (std::size_t i = 0; i < out.nodes.size(); ++i)
                remap[static_cast<std::size_t>(out.nodes[i].id)] = static_cast<int>(i);
            for (auto& nd : out.nodes) {
                nd.id = remap[static_cast<std::size_t>(nd.id)];
                if (nd.parent >= 0) nd.parent = remap[static_cast<std::size_t>(nd.parent)];
            }
            td = renumber_preorder(out);
            changed = again = true;
            break;
        }
    }

    // (b) split nodes with disconnected components, bottom-up
    {
        DecompositionViews views(g, td);
        auto order = td.preorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int t = *it;
            Subgraph comp = Subgraph::induced(g, views.component(t));
            auto comp_ids = comp.components();
            int pieces = comp.num_components();
            if (pieces <= 1) continue;

            // one copy of t per piece; bag restricted to piece + adhesion
            const auto& adh = views.adhesion(t);
            std::vector<std::vector<int>> piece_bags(static_cast<std::size_t>(pieces));
            for (int v : td.bag(t)) {
                if (std::binary_search(adh.begin(), adh.end(), v)) {
                    for (auto& pb : piece_bags) pb.push_back(v);
                } else {
                    piece_bags[static_cast<std::size_t>(comp_ids[static_cast<std::size_t>(v)])]
                        .push_back(v);
                }
            }
            TreeDecomposition out;
            out.host_hash = td.host_hash;
            int next_id = 0;
            std::vector<int> remap(td.nodes.size(), -1);
            for (const auto& nd : td.nodes)
                if (nd.id != t) {
                    remap[static_cast<std::size_t>(nd.id)] = next_id++;
                }
            std::vector<int> copy_ids;
            for (int p = 0; p < pieces; ++p) copy_ids.push_back(next_id++);
            for (const auto& nd : td.nodes) {
                if (nd.id == t) continue;
                DecompNode copy = nd;
                copy.id = remap[static_cast<std::size_t>(nd.id)];
                if (nd.parent == t) {
                    // child goes to the piece holding its component
                    const auto& child_comp = views.component(nd.id);
                    if (child_comp.empty())
                        throw Error("make_sane: empty child component during split");
                    int piece = comp_ids[static_cast<std::size_t>(child_comp.front())];
                    copy.parent = copy_ids[static_cast<std::size_t>(piece)];
                } else if (nd.parent >= 0) {
                    copy.parent = remap[static_cast<std::size_t>(nd.parent)];
                }
                out.nodes.push_back(copy);
            }
            int par = td.parent(t) < 0 ? -1 : remap[static_cast<std::size_t>(td.parent(t))];
            if (par < 0 && pieces > 1)
                throw Error("make_sane: disconnected graph (root component splits)");
            for (int p = 0; p < pieces; ++p) {
                DecompNode copy;
                copy.id = copy_ids[static_cast<std::size_t>(p)];
                copy.parent = par;
                std::sort(piece_bags[static_cast<std::size_t>(p)].begin(),
                          piece_bags[static_cast<std::size_t>(p)].end());
                copy.bag = piece_bags[static_cast<std::size_t>(p)];
                out.nodes.push_back(copy);
            }
            std::sort(out.nodes.begin(), out.nodes.end(),
                      [](const DecompNode& a, const DecompNode& b) { return a.id < b.id; });
            td = renumber_preorder(out);
            changed = true;
            return true;  // structure shifted; restart the fixpoint
        }
    }

    // (c) drop adhesion vertices without neighbors in the component from the
    // whole subtree
    {
        DecompositionViews views(g, td);
        for (int t = 0; t < td.size(); ++t) {
            for (int a : views.adhesion(t)) {
                Subgraph comp = Subgraph::induced(g, views.component(t));
                bool has = false;
                for (auto [w, e] : g.incident(a)) {
                    (void)e;
                    if (comp.has_vertex(w)) {
                        has = true;
                        break;
                    }
                }
                if (has) continue;
                // remove a from every bag in the subtree of t
                std::vector<char> in_subtree(td.nodes.size(), 0);
                auto ch = td.children();
                std::deque<int> queue{t};
                in_subtree[static_cast<std::size_t>(t)] = 1;
                while (!queue.empty()) {
                    int u = queue.front();
                    queue.pop_front();
                    for (int c : ch[static_cast<std::size_t>(u)]) {
                        in_subtree[static_cast<std::size_t>(c)] = 1;
                        queue.push_back(c);
                    }
                }
                for (auto& nd : td.nodes)
                    if (in_subtree[static_cast<std::size_t>(nd.id)]) {
                        auto it = std::lower_bound(nd.bag.begin(), nd.bag.end(), a);
                        if (it != nd.bag.end() && *it == a) nd.bag.erase(it);
                    }
                changed = true;
                return true;
            }
        }
    }
    return changed;
}

}  // namespace detail

// Sane tree-decomposition of a connected graph: every output bag is a subset
// of an input bag and every output adhesion a subset of an input adhesion.
inline TreeDecomposition make_sane(const Graph& g, const TreeDecomposition& td_in) {
    if (num_components(g) != 1) throw Error("make_sane requires a connected graph");
    Diagnostics d = validate(g, td_in);
    if (!d) throw Error("make_sane: invalid input decomposition: " + d.message);
    TreeDecomposition td = renumber_preorder(td_in);
    // the fixpoint terminates: splits reduce the count of nodes with
    // disconnected components, deletions reduce the node count, shrinks reduce
    // total bag size; the guard only bounds pathological inputs
    long long guard_limit = 512 + 64LL * td_in.size() * (g.num_vertices() + 2);
    for (long long guard = 0; guard < guard_limit; ++guard) {
        if (!detail::sane_pass(g, td)) break;
    }
    td = renumber_preorder(td);
    Diagnostics v = validate(g, td);
    if (!v) throw Error("make_sane produced an invalid decomposition: " + v.message);
    Diagnostics s = check_sane(g, td);
    if (!s) throw Error("make_sane failed to reach a sane fixpoint: " + s.message);
    return td;
}

// Re-roots the tree at the given node; bags are untouched, so validity is
// preserved while adhesions change.
inline TreeDecomposition reroot(const TreeDecomposition& td, int new_root) {
    if (new_root < 0 || new_root >= td.size()) throw Error("reroot: node out of range");
    std::vector<int> chain;
    for (int t = new_root; t != -1; t = td.parent(t)) chain.push_back(t);
    TreeDecomposition out = td;
    for (std::size_t i = 0; i < chain.size(); ++i)
        out.nodes[static_cast<std::size_t>(chain[i])].parent =
            (i == 0) ? -1 : chain[i - 1];
    return renumber_preorder(out);
}

// Quotient by a node subset containing the root: each kept node's bag becomes
// the union of the bags it absorbs; ancestor order is preserved.
inline TreeDecomposition quotient(const TreeDecomposition& td, const std::vector<int>& x) {
    std::vector<char> keep(td.nodes.size(), 0);
    for (int t : x) {
        if (t < 0 || t >= td.size()) throw Error("quotient: node out of range");
        keep[static_cast<std::size_t>(t)] = 1;
    }
    if (!keep[static_cast<std::size_t>(td.root())]) throw Error("quotient: root not in node set");

    // nearest kept ancestor (for kept nodes: themselves)
    std::vector<int> owner(td.nodes.size(), -1);
    std::vector<int> kept_parent(td.nodes.size(), -1);
    for (int t : td.preorder()) {
        if (keep[static_cast<std::size_t>(t)]) {
            owner[static_cast<std::size_t>(t)] = t;
            int p = td.parent(t);
            kept_parent[static_cast<std::size_t>(t)] = p < 0 ? -1 : owner[static_cast<std::size_t>(p)];
        } else {
            int p = td.parent(t);
            owner[static_cast<std::size_t>(t)] = p < 0 ? -1 : owner[static_cast<std::size_t>(p)];
            if (owner[static_cast<std::size_t>(t)] < 0)
                throw Error("quotient: node above the root set");
        }
    }
    std::vector<int> new_id(td.nodes.size(), -1);
    std::vector<int> kept_nodes;
    for (int t = 0; t < td.size(); ++t)
        if (keep[static_cast<std::size_t>(t)]) {
            new_id[static_cast<std::size_t>(t)] = static_cast<int>(kept_nodes.size());
            kept_nodes.push_back(t);
        }
    TreeDecomposition out;
    out.host_hash = td.host_hash;
    out.nodes.resize(kept_nodes.size());
    for (std::size_t i = 0; i < kept_nodes.size(); ++i) {
        DecompNode nd;
        nd.id = static_cast<int>(i);
        int t = kept_nodes[i];
        nd.parent = kept_parent[static_cast<std::size_t>(t)] < 0
                        ? -1
                        : new_id[static_cast<std::size_t>(kept_parent[static_cast<std::size_t>(t)])];
        out.nodes[i] = nd;
    }
    for (int t = 0; t < td.size(); ++t) {
        int o = owner[static_cast<std::size_t>(t)];
        auto& bag = out.nodes[static_cast<std::size_t>(new_id[static_cast<std::size_t>(o)])].bag;
        bag = sorted_union(bag, td.bag(t));
    }
    return renumber_preorder(out);
}

// Hypertorso of a prefix: the induced graph on the union of prefix bags, plus
// one adhesion hyperedge per boundary node.
inline Hypergraph hypertorso_of_prefix(const Graph& g, const TreeDecomposition& td,
                                       const std::vector<int>& z) {
    std::vector<char> in_z(td.nodes.size(), 0);
    for (int t : z) {
        if (t < 0 || t >= td.size()) throw Error("hypertorso: node out of range");
        in_z[static_cast<std::size_t>(t)] = 1;
    }
    for (int t : z)
        if (td.parent(t) >= 0 && !in_z[static_cast<std::size_t>(td.parent(t))])
            throw Error("hypertorso: node set is not a prefix (node " + std::to_string(t) +
                        " missing its parent)");
    DecompositionViews views(g, td);
    std::vector<int> beta;
    for (int t : z) beta = sorted_union(beta, td.bag(t));
    Hypergraph h;
    h.vertices = beta;
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.edge(e);
        if (std::binary_search(beta.begin(), beta.end(), u) &&
            std::binary_search(beta.begin(), beta.end(), v)) {
            h.edges.push_back({u, v});
            h.edge_tags.push_back("graph");
        }
    }
    for (int t = 0; t < td.size(); ++t) {
        if (in_z[static_cast<std::size_t>(t)]) continue;
        int p = td.parent(t);
        if (p >= 0 && in_z[static_cast<std::size_t>(p)]) {
            h.edges.push_back(views.adhesion(t));
            h.edge_tags.push_back("adhesion:" + std::to_string(t));
        }
    }
    return h;
}

// Path-decomposition: bags in left-to-right order, rooted at the left end.
struct PathDecomposition {
    std::vector<std::vector<int>> bags;
    std::uint64_t host_hash = 0;

    TreeDecomposition as_tree() const {
        TreeDecomposition td;
        td.host_hash = host_hash;
        for (std::size_t i = 0; i < bags.size(); ++i) {
            DecompNode nd;
            nd.id = static_cast<int>(i);
            nd.parent = i == 0 ? -1 : static_cast<int>(i) - 1;
            nd.bag = bags[i];
            std::sort(nd.bag.begin(), nd.bag.end());
            td.nodes.push_back(std::move(nd));
        }
        return td;
    }
};

inline Diagnostics validate(const Graph& g, const PathDecomposition& pd) {
    if (pd.bags.empty()) return Diagnostics::fail("path decomposition has no bags");
    return validate(g, pd.as_tree());
}

}  // namespace bn

#endif
