#ifndef BN_INTERFACE_SEMIGROUP_HPP
#define BN_INTERFACE_SEMIGROUP_HPP

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bn/decomposition.hpp"
#include "bn/graph.hpp"

namespace bn {

// Graph with two partial injective interface maps [k] -> V.
struct BiInterfaceGraph {
    Graph g;
    int arity = 0;
    std::vector<int> lambda;  // left map, -1 undefined
    std::vector<int> rho;     // right map

    Diagnostics validate() const {
        if (static_cast<int>(lambda.size()) != arity || static_cast<int>(rho.size()) != arity)
            return Diagnostics::fail("interface maps must have arity entries");
        std::set<int> seen;
        for (int i = 0; i < arity; ++i) {
            int v = lambda[static_cast<std::size_t>(i)];
            if (v == -1) continue;
            if (v < 0 || v >= g.num_vertices())
                return Diagnostics::fail("lambda(" + std::to_string(i) + ") out of range");
            if (!seen.insert(v).second)
                return Diagnostics::fail("lambda not injective at slot " + std::to_string(i));
        }
        seen.clear();
        for (int i = 0; i < arity; ++i) {
            int v = rho[static_cast<std::size_t>(i)];
            if (v == -1) continue;
            if (v < 0 || v >= g.num_vertices())
                return Diagnostics::fail("rho(" + std::to_string(i) + ") out of range");
            if (!seen.insert(v).second)
                return Diagnostics::fail("rho not injective at slot " + std::to_string(i));
        }
        for (int i = 0; i < arity; ++i)
            for (int j = 0; j < arity; ++j)
                if (lambda[static_cast<std::size_t>(i)] != -1 &&
                    lambda[static_cast<std::size_t>(i)] == rho[static_cast<std::size_t>(j)] && i != j)
                    return Diagnostics::fail("lambda(" + std::to_string(i) + ") = rho(" +
                                             std::to_string(j) + ") with different slots");
        return Diagnostics::pass();
    }

    // Slots i with lambda(i) = rho(i) defined.
    std::vector<int> persistent_slots() const {
        std::vector<int> out;
        for (int i = 0; i < arity; ++i)
            if (lambda[static_cast<std::size_t>(i)] != -1 &&
                lambda[static_cast<std::size_t>(i)] == rho[static_cast<std::size_t>(i)])
                out.push_back(i);
        return out;
    }

    std::vector<int> persistent_vertices() const {
        std::vector<int> out;
        for (int i : persistent_slots()) out.push_back(lambda[static_cast<std::size_t>(i)]);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<int> interface_vertices() const {
        std::set<int> s;
        for (int v : lambda)
            if (v != -1) s.insert(v);
        for (int v : rho)
            if (v != -1) s.insert(v);
        return {s.begin(), s.end()};
    }
};

struct GlueResult {
    BiInterfaceGraph glued;
    std::vector<int> map1;  // vertex of the left factor -> glued vertex
    std::vector<int> map2;  // vertex of the right factor -> glued vertex
};

// Disjoint union with rho1(i) identified to lambda2(i) whenever both defined;
// interfaces (lambda1, rho2). Parallel edges arising from the identification
// merge (graphs are simple).
inline GlueResult glue(const BiInterfaceGraph& a, const BiInterfaceGraph& b) {
    if (a.arity != b.arity) throw Error("glue: arity mismatch");
    int n1 = a.g.num_vertices();
    int n2 = b.g.num_vertices();
    std::vector<int> map1(static_cast<std::size_t>(n1));
    for (int v = 0; v < n1; ++v) map1[static_cast<std::size_t>(v)] = v;
    std::vector<int> map2(static_cast<std::size_t>(n2), -1);
    for (int i = 0; i < a.arity; ++i) {
        int r = a.rho[static_cast<std::size_t>(i)], l = b.lambda[static_cast<std::size_t>(i)];
        if (r != -1 && l != -1) map2[static_cast<std::size_t>(l)] = r;
    }
    int next = n1;
    for (int v = 0; v < n2; ++v)
        if (map2[static_cast<std::size_t>(v)] == -1) map2[static_cast<std::size_t>(v)] = next++;

    std::set<std::pair<int, int>> edges;
    for (auto [u, v] : a.g.edges()) edges.insert({u, v});
    for (auto [u, v] : b.g.edges()) {
        int x = map2[static_cast<std::size_t>(u)], y = map2[static_cast<std::size_t>(v)];
        if (x > y) std::swap(x, y);
        edges.insert({x, y});
    }
    GlueResult out;
    out.glued.g = Graph(next, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
    out.glued.arity = a.arity;
    out.glued.lambda.assign(static_cast<std::size_t>(a.arity), -1);
    out.glued.rho.assign(static_cast<std::size_t>(a.arity), -1);
    for (int i = 0; i < a.arity; ++i) {
        if (a.lambda[static_cast<std::size_t>(i)] != -1)
            out.glued.lambda[static_cast<std::size_t>(i)] =
                map1[static_cast<std::size_t>(a.lambda[static_cast<std::size_t>(i)])];
        if (b.rho[static_cast<std::size_t>(i)] != -1)
            out.glued.rho[static_cast<std::size_t>(i)] =
                map2[static_cast<std::size_t>(b.rho[static_cast<std::size_t>(i)])];
    }
    out.map1 = std::move(map1);
    out.map2 = std::move(map2);
    Diagnostics d = out.glued.validate();
    if (!d) throw Error("glue produced inconsistent interfaces: " + d.message);
    return out;
}

struct HatResult {
    BiInterfaceGraph hat;
    std::vector<int> vertex_map;  // original vertex -> hat vertex, -1 if removed
};

// Removes all persistent vertices.
inline HatResult hat(const BiInterfaceGraph& big) {
    std::vector<int> removed = big.persistent_vertices();
    int n = big.g.num_vertices();
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int v = 0; v < n; ++v)
        if (!std::binary_search(removed.begin(), removed.end(), v))
            map[static_cast<std::size_t>(v)] = next++;
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : big.g.edges())
        if (map[static_cast<std::size_t>(u)] >= 0 && map[static_cast<std::size_t>(v)] >= 0)
            edges.push_back({map[static_cast<std::size_t>(u)], map[static_cast<std::size_t>(v)]});
    HatResult out;
    out.hat.g = Graph(next, std::move(edges));
    out.hat.arity = big.arity;
    out.hat.lambda.assign(static_cast<std::size_t>(big.arity), -1);
    out.hat.rho.assign(static_cast<std::size_t>(big.arity), -1);
    for (int i = 0; i < big.arity; ++i) {
        int l = big.lambda[static_cast<std::size_t>(i)], r = big.rho[static_cast<std::size_t>(i)];
        if (l != -1 && map[static_cast<std::size_t>(l)] != -1)
            out.hat.lambda[static_cast<std::size_t>(i)] = map[static_cast<std::size_t>(l)];
        if (r != -1 && map[static_cast<std::size_t>(r)] != -1)
            out.hat.rho[static_cast<std::size_t>(i)] = map[static_cast<std::size_t>(r)];
    }
    out.vertex_map = std::move(map);
    return out;
}

// Canonical connectivity abstraction: the interface-only graph whose vertices
// are slot labels, with an edge where the underlying graph has a connection
// through non-interface internals. Slot labels make equality structural.
struct Abstraction {
    int arity = 0;
    // canonical vertex order: persistent slots asc, left-only asc, right-only asc
    std::vector<int> lambda, rho;
    std::vector<std::pair<int, int>> edges;
    int n = 0;

    BiInterfaceGraph as_bi_interface() const {
        BiInterfaceGraph big;
        big.g = Graph(n, edges);
        big.arity = arity;
        big.lambda = lambda;
        big.rho = rho;
        return big;
    }

    auto key() const { return std::tie(arity, n, lambda, rho, edges); }
    bool operator==(const Abstraction& o) const { return key() == o.key(); }
    bool operator<(const Abstraction& o) const { return key() < o.key(); }
};

inline Abstraction abstraction(const BiInterfaceGraph& big) {
    Diagnostics d = big.validate();
    if (!d) throw Error("abstraction: invalid bi-interface graph: " + d.message);
    std::vector<int> iface = big.interface_vertices();
    std::vector<char> is_iface(static_cast<std::size_t>(big.g.num_vertices()), 0);
    for (int v : iface) is_iface[static_cast<std::size_t>(v)] = 1;

    // canonical ids: persistent slots, then left-only, then right-only
    std::vector<int> canon(static_cast<std::size_t>(big.g.num_vertices()), -1);
    Abstraction out;
    out.arity = big.arity;
    out.lambda.assign(static_cast<std::size_t>(big.arity), -1);
    out.rho.assign(static_cast<std::size_t>(big.arity), -1);
    int next = 0;
    for (int i = 0; i < big.arity; ++i) {
        int l = big.lambda[static_cast<std::size_t>(i)];
        if (l != -1 && big.rho[static_cast<std::size_t>(i)] == l) {
            canon[static_cast<std::size_t>(l)] = next;
            out.lambda[static_cast<std::size_t>(i)] = next;
            out.rho[static_cast<std::size_t>(i)] = next;
            ++next;
        }
    }
    for (int i = 0; i < big.arity; ++i) {
        int l = big.lambda[static_cast<std::size_t>(i)];
        if (l != -1 && canon[static_cast<std::size_t>(l)] == -1) {
            canon[static_cast<std::size_t>(l)] = next;
            out.lambda[static_cast<std::size_t>(i)] = next;
            ++next;
        }
    }
    for (int i = 0; i < big.arity; ++i) {
        int r = big.rho[static_cast<std::size_t>(i)];
        if (r != -1 && canon[static_cast<std::size_t>(r)] == -1) {
            canon[static_cast<std::size_t>(r)] = next;
            out.rho[static_cast<std::size_t>(i)] = next;
            ++next;
        }
    }
    out.n = next;

    std::set<std::pair<int, int>> edges;
    // direct edges between interface vertices
    for (auto [u, v] : big.g.edges())
        if (is_iface[static_cast<std::size_t>(u)] && is_iface[static_cast<std::size_t>(v)]) {
            int a = canon[static_cast<std::size_t>(u)], b = canon[static_cast<std::size_t>(v)];
            if (a > b) std::swap(a, b);
            edges.insert({a, b});
        }
    // connections through internal components
    Subgraph internal = Subgraph::full(big.g).minus_vertices(iface);
    auto comp = internal.components();
    int pieces = internal.num_components();
    std::vector<std::set<int>> touching(static_cast<std::size_t>(std::max(pieces, 0)));
    for (int v : iface)
        for (auto [w, e] : big.g.incident(v)) {
            (void)e;
            if (!is_iface[static_cast<std::size_t>(w)])
                touching[static_cast<std::size_t>(comp[static_cast<std::size_t>(w)])].insert(
                    canon[static_cast<std::size_t>(v)]);
        }
    for (const auto& s : touching) {
        std::vector<int> t(s.begin(), s.end());
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) edges.insert({t[i], t[j]});
    }
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

// Memoised product table for the abstraction semigroup; readers are safe in
// parallel, insertion is exclusive.
class ProductTable {
public:
    Abstraction product(const Abstraction& a, const Abstraction& b) {
        if (a.arity != b.arity) throw Error("product: arity mismatch");
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = memo_.find({a, b});
            if (it != memo_.end()) return it->second;
        }
        Abstraction r = abstraction(glue(a.as_bi_interface(), b.as_bi_interface()).glued);
        std::lock_guard<std::mutex> lock(mutex_);
        memo_.emplace(std::make_pair(a, b), r);
        return r;
    }

    bool is_idempotent(const Abstraction& a) { return product(a, a) == a; }

    // Subsemigroup generated by the given elements.
    std::vector<Abstraction> reachable(const std::vector<Abstraction>& gens) {
        std::set<Abstraction> seen(gens.begin(), gens.end());
        std::vector<Abstraction> frontier(seen.begin(), seen.end());
        while (!frontier.empty()) {
            std::vector<Abstraction> next;
            std::vector<Abstraction> all(seen.begin(), seen.end());
            for (const auto& x : all)
                for (const auto& f : frontier) {
                    for (const Abstraction& p : {product(x, f), product(f, x)})
                        if (seen.insert(p).second) next.push_back(p);
                }
            frontier = std::move(next);
        }
        return {seen.begin(), seen.end()};
    }

private:
    std::mutex mutex_;
    std::map<std::pair<Abstraction, Abstraction>, Abstraction> memo_;
};

// Word of bi-interface letters carved from a path-decomposition; letter i has
// underlying graph G[bag_i] with interfaces on the two neighboring adhesions.
struct PathWord {
    std::vector<BiInterfaceGraph> letters;
    std::vector<std::vector<int>> letter_to_host;  // local vertex -> host vertex
};

inline PathWord word_from_path_decomposition(const Graph& g, const PathDecomposition& pd, int k) {
    Diagnostics d = validate(g, pd);
    if (!d) throw Error("word_from_path_decomposition: invalid decomposition: " + d.message);
    int m = static_cast<int>(pd.bags.size());
    std::vector<std::vector<int>> bags = pd.bags;
    for (auto& b : bags) std::sort(b.begin(), b.end());

    // adhesion slot maps, consistent across consecutive bags
    std::vector<std::map<int, int>> slot(static_cast<std::size_t>(m) + 1);
    for (int i = 1; i < m; ++i) {
        std::vector<int> adh = sorted_intersection(bags[static_cast<std::size_t>(i - 1)],
                                                   bags[static_cast<std::size_t>(i)]);
        if (static_cast<int>(adh.size()) > k)
            throw Error("word_from_path_decomposition: adhesion " + std::to_string(i) +
                        " exceeds arity " + std::to_string(k));
        std::set<int> used;
        for (int v : adh) {
            auto prev = slot[static_cast<std::size_t>(i - 1)].find(v);
            if (prev != slot[static_cast<std::size_t>(i - 1)].end()) {
                slot[static_cast<std::size_t>(i)][v] = prev->second;
                used.insert(prev->second);
            }
        }
        int next_free = 0;
        for (int v : adh) {
            if (slot[static_cast<std::size_t>(i)].count(v)) continue;
            while (used.count(next_free)) ++next_free;
            if (next_free >= k)
                throw Error("word_from_path_decomposition: slot overflow at adhesion " +
                            std::to_string(i));
            slot[static_cast<std::size_t>(i)][v] = next_free;
            used.insert(next_free);
        }
    }

    // outer interfaces mirror the first and last adhesions, so a vertex lying
    // in every bag is persistent in the glued word and gets added back last
    if (m >= 2) {
        slot[0] = slot[1];
        slot[static_cast<std::size_t>(m)] = slot[static_cast<std::size_t>(m - 1)];
    }

    PathWord word;
    for (int i = 0; i < m; ++i) {
        const auto& bag = bags[static_cast<std::size_t>(i)];
        std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
        for (std::size_t j = 0; j < bag.size(); ++j)
            local[static_cast<std::size_t>(bag[j])] = static_cast<int>(j);
        std::vector<std::pair<int, int>> edges;
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [u, v] = g.edge(e);
            if (local[static_cast<std::size_t>(u)] >= 0 && local[static_cast<std::size_t>(v)] >= 0)
                edges.push_back({local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]});
        }
        BiInterfaceGraph letter;
        letter.g = Graph(static_cast<int>(bag.size()), std::move(edges));
        letter.arity = k;
        letter.lambda.assign(static_cast<std::size_t>(k), -1);
        letter.rho.assign(static_cast<std::size_t>(k), -1);
        for (const auto& [v, s] : slot[static_cast<std::size_t>(i)])
            letter.lambda[static_cast<std::size_t>(s)] = local[static_cast<std::size_t>(v)];
        for (const auto& [v, s] : slot[static_cast<std::size_t>(i + 1)])
            letter.rho[static_cast<std::size_t>(s)] = local[static_cast<std::size_t>(v)];
        Diagnostics dv = letter.validate();
        if (!dv) throw Error("word_from_path_decomposition: bad letter " + std::to_string(i) +
                             ": " + dv.message);
        word.letters.push_back(std::move(letter));
        word.letter_to_host.push_back(bag);
    }
    return word;
}

struct WordGlue {
    BiInterfaceGraph glued;
    std::vector<std::vector<int>> letter_maps;  // local vertex -> glued vertex
};

inline WordGlue glue_word(const std::vector<BiInterfaceGraph>& letters) {
    if (letters.empty()) throw Error("glue_word: empty word");
    WordGlue out;
    out.glued = letters[0];
    out.letter_maps.resize(letters.size());
    out.letter_maps[0].resize(static_cast<std::size_t>(letters[0].g.num_vertices()));
    for (int v = 0; v < letters[0].g.num_vertices(); ++v)
        out.letter_maps[0][static_cast<std::size_t>(v)] = v;
    for (std::size_t i = 1; i < letters.size(); ++i) {
        GlueResult r = glue(out.glued, letters[i]);
        for (std::size_t j = 0; j < i; ++j)
            for (auto& v : out.letter_maps[j]) v = r.map1[static_cast<std::size_t>(v)];
        out.letter_maps[i] = r.map2;
        out.glued = std::move(r.glued);
    }
    return out;
}

// Factorisation tree over a word of abstraction values.
struct FactTreeNode {
    enum class Kind { Leaf, Binary, Idempotent };
    Kind kind = Kind::Leaf;
    int lo = 0, hi = 0;          // letter range covered
    std::vector<int> children;   // node ids
    Abstraction value;
};

struct FactorisationTree {
    std::vector<FactTreeNode> nodes;
    int root = -1;

    int height(int node = -1) const {
        if (node == -1) node = root;
        const auto& nd = nodes[static_cast<std::size_t>(node)];
        if (nd.kind == FactTreeNode::Kind::Leaf) return 0;
        int h = 0;
        for (int c : nd.children) h = std::max(h, height(c));
        return h + 1;
    }
};

namespace detail {

class Factoriser {
public:
    Factoriser(const std::vector<Abstraction>& values, ProductTable& table)
        : values_(values), table_(table) {
        int n = static_cast<int>(values.size());
        seg_.assign(static_cast<std::size_t>(n), {});
        for (int i = 0; i < n; ++i) {
            seg_[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n - i));
            seg_[static_cast<std::size_t>(i)][0] = values[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                seg_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)] = table.product(
                    seg_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i - 1)],
                    values[static_cast<std::size_t>(j)]);
        }
    }

    FactorisationTree run() {
        tree_ = FactorisationTree{};
        tree_.root = factor(0, static_cast<int>(values_.size()) - 1);
        return std::move(tree_);
    }

private:
    const Abstraction& val(int i, int j) const {
        return seg_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)];
    }

    int add_node(FactTreeNode nd) {
        tree_.nodes.push_back(std::move(nd));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    // Max-parts cover of [lo..hi] into segments of value e; empty if none.
    std::vector<int> idempotent_cuts(int lo, int hi, const Abstraction& e) {
        int len = hi - lo + 1;
        std::vector<int> parts(static_cast<std::size_t>(len) + 1, -1);  // parts[i]: cover of first i letters
        std::vector<int> from(static_cast<std::size_t>(len) + 1, -1);
        parts[0] = 0;
        for (int i = 1; i <= len; ++i)
            for (int j = 1; j <= i; ++j) {
                if (parts[static_cast<std::size_t>(j - 1)] < 0) continue;
                if (!(val(lo + j - 1, lo + i - 1) == e)) continue;
                if (parts[static_cast<std::size_t>(j - 1)] + 1 > parts[static_cast<std::size_t>(i)]) {
                    parts[static_cast<std::size_t>(i)] = parts[static_cast<std::size_t>(j - 1)] + 1;
                    from[static_cast<std::size_t>(i)] = j - 1;
                }
            }
        if (parts[static_cast<std::size_t>(len)] < 2) return {};
        std::vector<int> cuts;  // segment start offsets
        for (int i = len; i > 0; i = from[static_cast<std::size_t>(i)])
            cuts.push_back(from[static_cast<std::size_t>(i)]);
        std::reverse(cuts.begin(), cuts.end());
        return cuts;
    }

    int factor(int lo, int hi) {
        if (lo == hi) {
            FactTreeNode nd;
            nd.kind = FactTreeNode::Kind::Leaf;
            nd.lo = nd.hi = lo;
            nd.value = values_[static_cast<std::size_t>(lo)];
            return add_node(std::move(nd));
        }
        const Abstraction& whole = val(lo, hi);
        if (table_.product(whole, whole) == whole) {
            auto cuts = idempotent_cuts(lo, hi, whole);
            if (!cuts.empty()) {
                FactTreeNode nd;
                nd.kind = FactTreeNode::Kind::Idempotent;
                nd.lo = lo;
                nd.hi = hi;
                nd.value = whole;
                for (std::size_t c = 0; c < cuts.size(); ++c) {
                    int a = lo + cuts[c];
                    int b = (c + 1 < cuts.size()) ? lo + cuts[c + 1] - 1 : hi;
                    nd.children.push_back(factor(a, b));
                }
                return add_node(std::move(nd));
            }
        }
        // largest idempotent-coverable window, wrapped in binaries when big;
        // skipped on long ranges where the quadratic scan would dominate
        if (hi - lo + 1 >= 4 && hi - lo + 1 <= 80) {
            int best_a = -1, best_b = -1;
            for (int a = lo; a <= hi; ++a)
                for (int b = hi; b - a > best_b - best_a; --b) {
                    if (a == lo && b == hi) continue;
                    const Abstraction& v = val(a, b);
                    if (!(table_.product(v, v) == v)) continue;
                    if (idempotent_cuts(a, b, v).empty()) continue;
                    best_a = a;
                    best_b = b;
                    break;
                }
            if (best_a >= 0 && (best_b - best_a + 1) * 2 >= hi - lo + 1) {
                int window = factor(best_a, best_b);
                int node = window;
                if (best_b < hi) {
                    FactTreeNode nd;
                    nd.kind = FactTreeNode::Kind::Binary;
                    nd.lo = best_a;
                    nd.hi = hi;
                    nd.children = {node, factor(best_b + 1, hi)};
                    nd.value = val(best_a, hi);
                    node = add_node(std::move(nd));
                }
                if (best_a > lo) {
                    FactTreeNode nd;
                    nd.kind = FactTreeNode::Kind::Binary;
                    nd.lo = lo;
                    nd.hi = hi;
                    nd.children = {factor(lo, best_a - 1), node};
                    nd.value = val(lo, hi);
                    node = add_node(std::move(nd));
                }
                return node;
            }
        }
        int mid = (lo + hi) / 2;
        FactTreeNode nd;
        nd.kind = FactTreeNode::Kind::Binary;
        nd.lo = lo;
        nd.hi = hi;
        nd.children = {factor(lo, mid), factor(mid + 1, hi)};
        nd.value = whole;
        return add_node(std::move(nd));
    }

    const std::vector<Abstraction>& values_;
    ProductTable& table_;
    std::vector<std::vector<Abstraction>> seg_;
    FactorisationTree tree_;
};

}  // namespace detail

inline FactorisationTree factorise(const std::vector<Abstraction>& values, ProductTable& table) {
    if (values.empty()) throw Error("factorise: empty word");
    return detail::Factoriser(values, table).run();
}

// Structural checker: leaves spell the word in order, binary nodes have two
// children, idempotent nodes have >= 2 children sharing one idempotent value,
// and every node's value is the product of its children's values.
inline Diagnostics check_factorisation_tree(const FactorisationTree& tree,
                                            const std::vector<Abstraction>& values,
                                            ProductTable& table) {
    if (tree.root < 0 || tree.root >= static_cast<int>(tree.nodes.size()))
        return Diagnostics::fail("bad root");
    std::vector<int> leaves;
    // walk down collecting leaves and checking consistency
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        const auto& nd = tree.nodes[static_cast<std::size_t>(id)];
        if (nd.kind == FactTreeNode::Kind::Leaf) {
            if (nd.lo != nd.hi) return Diagnostics::fail("leaf covering a range");
            if (!(nd.value == values[static_cast<std::size_t>(nd.lo)]))
                return Diagnostics::fail("leaf value mismatch at " + std::to_string(nd.lo));
            leaves.push_back(nd.lo);
            continue;
        }
        if (nd.kind == FactTreeNode::Kind::Binary && nd.children.size() != 2)
            return Diagnostics::fail("binary node without exactly two children");
        if (nd.kind == FactTreeNode::Kind::Idempotent) {
            if (nd.children.size() < 2)
                return Diagnostics::fail("idempotent node with fewer than two children");
            const Abstraction& e = nd.value;
            if (!(table.product(e, e) == e))
                return Diagnostics::fail("idempotent node whose value is not idempotent");
            for (int c : nd.children)
                if (!(tree.nodes[static_cast<std::size_t>(c)].value == e))
                    return Diagnostics::fail("idempotent child value differs from e");
        }
        // node value = product of children values; ranges must tile
        Abstraction prod = tree.nodes[static_cast<std::size_t>(nd.children.front())].value;
        int expect = tree.nodes[static_cast<std::size_t>(nd.children.front())].hi + 1;
        if (tree.nodes[static_cast<std::size_t>(nd.children.front())].lo != nd.lo)
            return Diagnostics::fail("children do not start at node lo");
        for (std::size_t i = 1; i < nd.children.size(); ++i) {
            const auto& c = tree.nodes[static_cast<std::size_t>(nd.children[i])];
            if (c.lo != expect) return Diagnostics::fail("children ranges do not tile");
            expect = c.hi + 1;
            prod = table.product(prod, c.value);
        }
        if (expect != nd.hi + 1) return Diagnostics::fail("children do not end at node hi");
        if (!(prod == nd.value)) return Diagnostics::fail("node value is not the child product");
        for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it) stack.push_back(*it);
    }
    if (leaves.size() != values.size()) return Diagnostics::fail("leaf count mismatch");
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i] != static_cast<int>(i))
            return Diagnostics::fail("leaves out of word order at " + std::to_string(i));
    return Diagnostics::pass();
}

}  // namespace bn

#endif
