#ifndef BN_GENERATORS_HPP
#define BN_GENERATORS_HPP

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bn/common.hpp"
#include "bn/decomposition.hpp"
#include "bn/graph.hpp"
#include "bn/interface_semigroup.hpp"

namespace bn {

inline Graph gen_clique(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    return Graph(n, std::move(edges));
}

inline Graph gen_cycle(int n) {
    if (n < 3) throw Error("gen_cycle: need n >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return Graph(n, std::move(edges));
}

inline Graph gen_path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return Graph(n, std::move(edges));
}

inline Graph gen_complete_bipartite(int a, int b) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.push_back({i, a + j});
    return Graph(a + b, std::move(edges));
}

// Ladder with 2n vertices: two rails 0..n-1 and n..2n-1 plus rungs.
inline Graph gen_ladder(int n) {
    if (n < 2) throw Error("gen_ladder: need n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1});
        edges.push_back({n + i, n + i + 1});
    }
    for (int i = 0; i < n; ++i) edges.push_back({i, n + i});
    return Graph(2 * n, std::move(edges));
}

inline Graph gen_petersen() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5});          // outer cycle
        edges.push_back({i, i + 5});                // spokes
        edges.push_back({5 + i, 5 + (i + 2) % 5});  // inner pentagram
    }
    return Graph(10, std::move(edges));
}

// G(n, p)-style with p in percent.
inline Graph gen_random(int n, int percent, Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (static_cast<int>(rng.below(100)) < percent) edges.push_back({i, j});
    return Graph(n, std::move(edges));
}

inline Graph gen_random_connected(int n, int percent, Rng& rng) {
    std::set<std::pair<int, int>> edges;
    // random spanning tree first
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        edges.insert({u, v});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (static_cast<int>(rng.below(100)) < percent) edges.insert({i, j});
    return Graph(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

// Random cubic graph on n (even) vertices: a Hamilton cycle plus a perfect
// matching avoiding cycle edges; resamples until simple.
inline Graph gen_random_cubic(int n, Rng& rng) {
    if (n < 4 || n % 2) throw Error("gen_random_cubic: need even n >= 4");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        rng.shuffle(perm);
        std::set<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            int u = i, v = (i + 1) % n;
            edges.insert({std::min(u, v), std::max(u, v)});
        }
        bool ok = true;
        for (int i = 0; i < n && ok; i += 2) {
            int u = perm[static_cast<std::size_t>(i)], v = perm[static_cast<std::size_t>(i + 1)];
            auto e = std::make_pair(std::min(u, v), std::max(u, v));
            if (edges.count(e)) ok = false;
            edges.insert(e);
        }
        if (!ok) continue;
        return Graph(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
    }
    throw Error("gen_random_cubic: sampling failed");
}

// Cubic graph plus an apex adjacent to every vertex; vertex n is the apex.
inline std::pair<Graph, int> gen_apex_cubic(int n, Rng& rng) {
    Graph h = gen_random_cubic(n, rng);
    std::vector<std::pair<int, int>> edges = h.edges();
    for (int v = 0; v < n; ++v) edges.push_back({v, n});
    return {Graph(n + 1, std::move(edges)), n};
}

// Graph with a known path-decomposition of width pw: bags are sliding windows
// {i..i+pw}; consecutive vertices joined, chords within a window random.
inline std::pair<Graph, PathDecomposition> gen_random_pathwidth(int n, int pw, int percent,
                                                                Rng& rng) {
    if (pw < 1 || n < pw + 1) throw Error("gen_random_pathwidth: need n > pw >= 1");
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.insert({i, i + 1});
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < std::min(n, i + pw + 1); ++j)
            if (static_cast<int>(rng.below(100)) < percent) edges.insert({i, j});
    Graph g(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
    PathDecomposition pd;
    pd.host_hash = g.hash();
    for (int i = 0; i + pw < n; ++i) {
        std::vector<int> bag;
        for (int j = i; j <= i + pw; ++j) bag.push_back(j);
        pd.bags.push_back(std::move(bag));
    }
    return {g, pd};
}

// Random bi-interface graph: per slot either persistent, left-only,
// right-only, or undefined, with distinct vertices per role.
inline BiInterfaceGraph gen_random_letter(int arity, Rng& rng, int max_extra = 3,
                                          int edge_percent = 45) {
    BiInterfaceGraph big;
    big.arity = arity;
    big.lambda.assign(static_cast<std::size_t>(arity), -1);
    big.rho.assign(static_cast<std::size_t>(arity), -1);
    int next = 0;
    for (int i = 0; i < arity; ++i) {
        switch (rng.uniform(0, 3)) {
            case 0:
                big.lambda[static_cast<std::size_t>(i)] = next;
                big.rho[static_cast<std::size_t>(i)] = next;
                ++next;
                break;
            case 1:
                big.lambda[static_cast<std::size_t>(i)] = next++;
                break;
            case 2:
                big.rho[static_cast<std::size_t>(i)] = next++;
                break;
            default:
                break;
        }
    }
    int n = next + rng.uniform(std::min(1, max_extra), max_extra);
    n = std::max(n, 1);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (static_cast<int>(rng.below(100)) < edge_percent) edges.push_back({i, j});
    big.g = Graph(n, std::move(edges));
    Diagnostics d = big.validate();
    if (!d) throw Error("gen_random_letter: " + d.message);
    return big;
}

// Word of letters all sharing one idempotent abstraction: squares a random
// letter's abstraction to a fixpoint, then decorates copies with harmless
// internal structure (subdivisions and pendants keep the abstraction).
inline std::vector<BiInterfaceGraph> gen_idempotent_word(int arity, int length, Rng& rng,
                                                         ProductTable& table) {
    Abstraction e = abstraction(gen_random_letter(arity, rng));
    for (int guard = 0; guard < 64; ++guard) {
        Abstraction sq = table.product(e, e);
        if (sq == e) break;
        e = sq;
    }
    if (!table.is_idempotent(e)) throw Error("gen_idempotent_word: no idempotent reached");

    std::vector<BiInterfaceGraph> word;
    for (int i = 0; i < length; ++i) {
        BiInterfaceGraph letter = e.as_bi_interface();
        // decorate: subdivide a few edges and hang pendants
        int decorations = rng.uniform(0, 3);
        for (int d = 0; d < decorations; ++d) {
            std::vector<std::pair<int, int>> edges = letter.g.edges();
            int n = letter.g.num_vertices();
            if (!edges.empty() && rng.coin()) {
                std::size_t pick = static_cast<std::size_t>(rng.below(edges.size()));
                auto [u, v] = edges[pick];
                edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(pick));
                edges.push_back({u, n});
                edges.push_back({v, n});
            } else if (n > 0) {
                edges.push_back({rng.uniform(0, n - 1), n});
            }
            letter.g = Graph(n + 1, std::move(edges));
        }
        if (!(abstraction(letter) == e))
            throw Error("gen_idempotent_word: decoration changed the abstraction");
        word.push_back(std::move(letter));
    }
    return word;
}

// Valid tree-decomposition of an arbitrary graph from a random elimination
// order: bag(v) = {v} + later neighbors in the fill-in graph; parent = bag of
// the earliest later neighbor.
inline TreeDecomposition gen_elimination_td(const Graph& g, Rng& rng) {
    int n = g.num_vertices();
    if (n == 0) throw Error("gen_elimination_td: empty graph");
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    std::vector<std::set<int>> later(static_cast<std::size_t>(n));
    for (auto [u, v] : g.edges()) {
        if (pos[static_cast<std::size_t>(u)] < pos[static_cast<std::size_t>(v)])
            later[static_cast<std::size_t>(u)].insert(v);
        else
            later[static_cast<std::size_t>(v)].insert(u);
    }
    // eliminate in order, filling in
    for (int i = 0; i < n; ++i) {
        int v = order[static_cast<std::size_t>(i)];
        std::vector<int> nb(later[static_cast<std::size_t>(v)].begin(),
                            later[static_cast<std::size_t>(v)].end());
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                int x = nb[a], y = nb[b];
                if (pos[static_cast<std::size_t>(x)] < pos[static_cast<std::size_t>(y)])
                    later[static_cast<std::size_t>(x)].insert(y);
                else
                    later[static_cast<std::size_t>(y)].insert(x);
            }
    }

    TreeDecomposition td;
    std::vector<int> node_of(static_cast<std::size_t>(n), -1);
    // nodes in reverse elimination order, so parents exist before children
    for (int i = n - 1; i >= 0; --i) {
        int v = order[static_cast<std::size_t>(i)];
        DecompNode nd;
        nd.id = static_cast<int>(td.nodes.size());
        nd.bag.push_back(v);
        for (int w : later[static_cast<std::size_t>(v)]) nd.bag.push_back(w);
        std::sort(nd.bag.begin(), nd.bag.end());
        if (later[static_cast<std::size_t>(v)].empty()) {
            // no later neighbor: root of its component; hang onto the global
            // root to keep a single tree
            nd.parent = td.nodes.empty() ? -1 : 0;
        } else {
            int first = -1;
            for (int w : later[static_cast<std::size_t>(v)])
                if (first == -1 || pos[static_cast<std::size_t>(w)] < pos[static_cast<std::size_t>(first)])
                    first = w;
            nd.parent = node_of[static_cast<std::size_t>(first)];
        }
        node_of[static_cast<std::size_t>(v)] = nd.id;
        td.nodes.push_back(std::move(nd));
    }
    td.host_hash = g.hash();
    return renumber_preorder(td);
}

}  // namespace bn

#endif
