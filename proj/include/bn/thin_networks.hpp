#ifndef BN_THIN_NETWORKS_HPP
#define BN_THIN_NETWORKS_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bn/decomposition.hpp"
#include "bn/graph.hpp"
#include "bn/hypergraph.hpp"

namespace bn {

// Connected hypergraph with a source and a sink.
struct Network {
    Hypergraph h;
    int source = -1;
    int sink = -1;

    Diagnostics validate() const {
        Diagnostics d = h.validate();
        if (!d) return d;
        if (!h.has_vertex(source) || !h.has_vertex(sink))
            return Diagnostics::fail("source or sink missing from the hypergraph");
        if (source == sink) return Diagnostics::fail("source equals sink");
        if (!h.connected()) return Diagnostics::fail("hypergraph is not connected");
        return Diagnostics::pass();
    }
};

// Occurrence ids of the cutedges, in the order they appear on every
// source-sink path.
inline std::vector<std::size_t> cutedge_sequence(const Network& net) {
    Diagnostics d = net.validate();
    if (!d) throw Error("cutedge_sequence: invalid network: " + d.message);
    std::vector<std::size_t> cut;
    for (std::size_t i = 0; i < net.h.edges.size(); ++i) {
        std::vector<char> skip(net.h.edges.size(), 0);
        skip[i] = 1;
        if (!net.h.connects(net.source, net.sink, skip)) cut.push_back(i);
    }
    if (cut.empty()) return cut;
    auto path = hyper_shortest_path(net.h, net.source, net.sink);
    if (!path) throw Error("cutedge_sequence: no source-sink path in a connected hypergraph");
    std::vector<std::size_t> ordered;
    for (std::size_t occ : path->edge_occ)
        if (std::find(cut.begin(), cut.end(), occ) != cut.end()) ordered.push_back(occ);
    if (ordered.size() != cut.size())
        throw Error("cutedge_sequence: a cutedge is missing from a source-sink path");
    return ordered;
}

struct Zones {
    // cutedge occurrence ids in order
    std::vector<std::size_t> cutedges;
    // bridge vertex unions V_0..V_p and appendix unions W_1..W_p (index i-1)
    std::vector<std::vector<int>> bridges;
    std::vector<std::vector<int>> appendices;
};

// Components of H minus the cutedges, each classified as an (e_i, e_{i+1})
// bridge or an e_i appendix. A third shape signals a malformed network.
inline Zones classify_zones(const Network& net) {
    Zones z;
    z.cutedges = cutedge_sequence(net);
    std::size_t p = z.cutedges.size();
    z.bridges.assign(p + 1, {});
    z.appendices.assign(p, {});

    std::vector<char> skip(net.h.edges.size(), 0);
    for (std::size_t occ : z.cutedges) skip[occ] = 1;
    auto comp = net.h.components(skip);
    int pieces = 0;
    for (int c : comp) pieces = std::max(pieces, c + 1);

    // boundary sets e_0 = {s}, e_1..e_p, e_{p+1} = {t}
    std::vector<std::vector<int>> boundary;
    boundary.push_back({net.source});
    for (std::size_t occ : z.cutedges) boundary.push_back(net.h.edges[occ]);
    boundary.push_back({net.sink});

    for (int piece = 0; piece < pieces; ++piece) {
        std::vector<int> verts;
        for (std::size_t i = 0; i < net.h.vertices.size(); ++i)
            if (comp[i] == piece) verts.push_back(net.h.vertices[i]);
        std::vector<std::size_t> touches;
        for (std::size_t b = 0; b < boundary.size(); ++b) {
            bool hit = false;
            for (int v : boundary[b])
                if (std::binary_search(verts.begin(), verts.end(), v)) {
                    hit = true;
                    break;
                }
            if (hit) touches.push_back(b);
        }
        if (touches.size() == 2 && touches[1] == touches[0] + 1) {
            auto& acc = z.bridges[touches[0]];
            acc.insert(acc.end(), verts.begin(), verts.end());
        } else if (touches.size() == 1 && touches[0] >= 1 && touches[0] <= p) {
            auto& acc = z.appendices[touches[0] - 1];
            acc.insert(acc.end(), verts.begin(), verts.end());
        } else {
            throw Error("classify_zones: component touching " + std::to_string(touches.size()) +
                        " boundaries is neither a bridge nor an appendix");
        }
    }
    for (auto& vset : z.bridges) std::sort(vset.begin(), vset.end());
    for (auto& vset : z.appendices) std::sort(vset.begin(), vset.end());
    return z;
}

namespace detail {

// Small max-flow on an explicit arc list (BFS augmenting paths).
class MaxFlow {
public:
    explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

    int add_arc(int from, int to, int cap) {
        arcs_.push_back({to, head_[static_cast<std::size_t>(from)], cap});
        head_[static_cast<std::size_t>(from)] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({from, head_[static_cast<std::size_t>(to)], 0});
        head_[static_cast<std::size_t>(to)] = static_cast<int>(arcs_.size()) - 1;
        return static_cast<int>(arcs_.size()) - 2;
    }

    int run(int s, int t) {
        int total = 0;
        while (true) {
            std::vector<int> pre(head_.size(), -1);
            std::vector<int> pre_arc(head_.size(), -1);
            std::vector<int> queue{s};
            pre[static_cast<std::size_t>(s)] = s;
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                int u = queue[qi];
                for (int a = head_[static_cast<std::size_t>(u)]; a != -1;
                     a = arcs_[static_cast<std::size_t>(a)].next) {
                    const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                    if (arc.cap <= 0 || pre[static_cast<std::size_t>(arc.to)] != -1) continue;
                    pre[static_cast<std::size_t>(arc.to)] = u;
                    pre_arc[static_cast<std::size_t>(arc.to)] = a;
                    queue.push_back(arc.to);
                }
            }
            if (pre[static_cast<std::size_t>(t)] == -1) break;
            int push = 1 << 30;
            for (int v = t; v != s; v = pre[static_cast<std::size_t>(v)])
                push = std::min(push, arcs_[static_cast<std::size_t>(pre_arc[static_cast<std::size_t>(v)])].cap);
            for (int v = t; v != s; v = pre[static_cast<std::size_t>(v)]) {
                int a = pre_arc[static_cast<std::size_t>(v)];
                arcs_[static_cast<std::size_t>(a)].cap -= push;
                arcs_[static_cast<std::size_t>(a ^ 1)].cap += push;
            }
            total += push;
        }
        return total;
    }

    int flow_on(int arc_id) const {
        return arcs_[static_cast<std::size_t>(arc_id ^ 1)].cap;  // pushed amount
    }
    void consume(int arc_id) { arcs_[static_cast<std::size_t>(arc_id ^ 1)].cap -= 1; }

private:
    struct Arc {
        int to;
        int next;
        int cap;
    };
    std::vector<int> head_;
    std::vector<Arc> arcs_;
};

inline void simplify_hyperpath(HyperPath& p) {
    for (bool again = true; again;) {
        again = false;
        for (std::size_t i = 0; i < p.vertices.size() && !again; ++i)
            for (std::size_t j = i + 1; j < p.vertices.size() && !again; ++j)
                if (p.vertices[i] == p.vertices[j]) {
                    p.vertices.erase(p.vertices.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                     p.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    p.edge_occ.erase(p.edge_occ.begin() + static_cast<std::ptrdiff_t>(i),
                                     p.edge_occ.begin() + static_cast<std::ptrdiff_t>(j));
                    again = true;
                }
        for (std::size_t i = 0; i < p.edge_occ.size() && !again; ++i)
            for (std::size_t j = i + 1; j < p.edge_occ.size() && !again; ++j)
                if (p.edge_occ[i] == p.edge_occ[j]) {
                    p.vertices.erase(p.vertices.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                     p.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    p.edge_occ.erase(p.edge_occ.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                     p.edge_occ.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    again = true;
                }
    }
}

}  // namespace detail

// Two source-sink paths whose shared hyperedges are exactly the cutedges,
// via a two-unit flow with capacity 1 on non-cut hyperedges and 2 on cut ones.
inline std::pair<HyperPath, HyperPath> menger_two_paths(const Network& net) {
    std::vector<std::size_t> cut = cutedge_sequence(net);
    std::vector<char> is_cut(net.h.edges.size(), 0);
    for (std::size_t occ : cut) is_cut[occ] = 1;

    int nv = static_cast<int>(net.h.vertices.size());
    int ne = static_cast<int>(net.h.edges.size());
    // nodes: 0 = super source, 1 = super sink, then vertex in/out, edge in/out
    auto vin = [&](int i) { return 2 + 2 * i; };
    auto vout = [&](int i) { return 2 + 2 * i + 1; };
    auto ein = [&](int i) { return 2 + 2 * nv + 2 * i; };
    auto eout = [&](int i) { return 2 + 2 * nv + 2 * i + 1; };
    detail::MaxFlow flow(2 + 2 * nv + 2 * ne);

    for (int i = 0; i < nv; ++i) flow.add_arc(vin(i), vout(i), 2);
    std::map<std::pair<int, int>, int> ve_arc, ev_arc;
    std::vector<int> edge_arc(static_cast<std::size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        edge_arc[static_cast<std::size_t>(e)] =
            flow.add_arc(ein(e), eout(e), is_cut[static_cast<std::size_t>(e)] ? 2 : 1);
        for (int v : net.h.edges[static_cast<std::size_t>(e)]) {
            int vi = static_cast<int>(net.h.index_of(v));
            ve_arc[{vi, e}] = flow.add_arc(vout(vi), ein(e), 2);
            ev_arc[{e, vi}] = flow.add_arc(eout(e), vin(vi), 2);
        }
    }
    int si = static_cast<int>(net.h.index_of(net.source));
    int ti = static_cast<int>(net.h.index_of(net.sink));
    flow.add_arc(0, vin(si), 2);
    flow.add_arc(vout(ti), 1, 2);

    int value = flow.run(0, 1);
    if (value != 2)
        throw Error("menger_two_paths: expected a two-unit flow, got " + std::to_string(value));

    auto extract = [&]() {
        HyperPath p;
        int v = si;
        p.vertices.push_back(net.h.vertices[static_cast<std::size_t>(v)]);
        std::size_t guard = 0;
        while (v != ti) {
            if (++guard > net.h.edges.size() * net.h.vertices.size() + 16)
                throw Error("menger_two_paths: flow walk did not terminate");
            int chosen_e = -1;
            for (int e = 0; e < ne && chosen_e == -1; ++e) {
                auto it = ve_arc.find({v, e});
                if (it == ve_arc.end()) continue;
                if (flow.flow_on(it->second) > 0 &&
                    flow.flow_on(edge_arc[static_cast<std::size_t>(e)]) > 0)
                    chosen_e = e;
            }
            if (chosen_e == -1) throw Error("menger_two_paths: flow walk is stuck");
            flow.consume(ve_arc[{v, chosen_e}]);
            flow.consume(edge_arc[static_cast<std::size_t>(chosen_e)]);
            int next_v = -1;
            for (int w : net.h.edges[static_cast<std::size_t>(chosen_e)]) {
                int wi = static_cast<int>(net.h.index_of(w));
                auto it = ev_arc.find({chosen_e, wi});
                if (it == ev_arc.end()) continue;
                if (flow.flow_on(it->second) > 0) {
                    next_v = wi;
                    break;
                }
            }
            if (next_v == -1) throw Error("menger_two_paths: flow walk lost the edge exit");
            flow.consume(ev_arc[{chosen_e, next_v}]);
            p.edge_occ.push_back(static_cast<std::size_t>(chosen_e));
            p.vertices.push_back(net.h.vertices[static_cast<std::size_t>(next_v)]);
            v = next_v;
        }
        detail::simplify_hyperpath(p);
        return p;
    };
    HyperPath p1 = extract();
    HyperPath p2 = extract();

    // post-condition: shared hyperedges are exactly the cutedges
    for (HyperPath* p : {&p1, &p2}) {
        Diagnostics d = p->validate(net.h);
        if (!d) throw Error("menger_two_paths: invalid path: " + d.message);
        if (p->vertices.front() != net.source || p->vertices.back() != net.sink)
            throw Error("menger_two_paths: path endpoints wrong");
    }
    std::set<std::size_t> s1(p1.edge_occ.begin(), p1.edge_occ.end());
    std::set<std::size_t> shared;
    for (std::size_t occ : p2.edge_occ)
        if (s1.count(occ)) shared.insert(occ);
    if (shared != std::set<std::size_t>(cut.begin(), cut.end()))
        throw Error("menger_two_paths: shared hyperedges differ from the cutedge set");
    return {p1, p2};
}

// Membership oracle for a downwards-closed set family over the vertices.
struct SetFamilyOracle {
    virtual ~SetFamilyOracle() = default;
    virtual bool contains(const std::vector<int>& sorted_set) const = 0;
    // U in family^{+k}: removable by deleting at most k elements. The default
    // is exact for small sets and greedy beyond.
    virtual bool contains_plus(const std::vector<int>& sorted_set, int k) const {
        if (contains(sorted_set)) return true;
        if (k <= 0) return false;
        if (sorted_set.size() <= 20 || k <= 2) {
            for (std::size_t i = 0; i < sorted_set.size(); ++i) {
                std::vector<int> sub = sorted_set;
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
                if (contains_plus(sub, k - 1)) return true;
            }
            return false;
        }
        std::vector<int> sub = sorted_set;
        sub.pop_back();
        return contains_plus(sub, k - 1);
    }
};

// The family of all subsets of the bags of a decomposition; the +k test is
// exact (min uncovered count over bags).
struct BagSubsetOracle : SetFamilyOracle {
    std::vector<std::vector<int>> bags;  // sorted

    explicit BagSubsetOracle(const TreeDecomposition& td) {
        for (const auto& nd : td.nodes) bags.push_back(nd.bag);
    }
    BagSubsetOracle() = default;

    bool contains(const std::vector<int>& s) const override {
        if (s.empty()) return true;
        for (const auto& b : bags)
            if (std::includes(b.begin(), b.end(), s.begin(), s.end())) return true;
        return false;
    }
    bool contains_plus(const std::vector<int>& s, int k) const override {
        if (s.empty()) return true;
        std::size_t best = s.size();
        for (const auto& b : bags) {
            std::vector<int> rest;
            std::set_difference(s.begin(), s.end(), b.begin(), b.end(), std::back_inserter(rest));
            best = std::min(best, rest.size());
        }
        return best <= static_cast<std::size_t>(k);
    }
};

// Path decomposition of a hypergraph zone: explicit bags.
using ZonePd = std::vector<std::vector<int>>;

struct ThinnessWitness {
    std::vector<std::vector<int>> cutedges;  // vertex sets, in sequence order
    std::vector<ZonePd> bridge_pds;          // one per V_0..V_p
    std::vector<ZonePd> appendix_pds;        // one per W_1..W_p
};

namespace detail {

// Validates a path-decomposition of an induced zone of the hypergraph.
inline Diagnostics check_zone_pd(const Hypergraph& h, const std::vector<int>& zone,
                                 const ZonePd& pd, int adhesion_limit,
                                 const std::vector<int>& left_required,
                                 const std::vector<int>& right_required,
                                 const std::function<bool(const std::vector<int>&)>& bag_ok,
                                 const std::string& where) {
    if (zone.empty()) {
        if (!pd.empty() && !(pd.size() == 1 && pd[0].empty()))
            return Diagnostics::fail(where + ": empty zone with nonempty bags");
        return Diagnostics::pass();
    }
    if (pd.empty()) return Diagnostics::fail(where + ": missing decomposition");
    for (const auto& bag : pd) {
        for (int v : bag)
            if (!std::binary_search(zone.begin(), zone.end(), v))
                return Diagnostics::fail(where + ": bag vertex " + std::to_string(v) +
                                         " outside the zone");
        if (!bag_ok(bag)) return Diagnostics::fail(where + ": bag outside the set family");
    }
    // cover, traces, adhesions
    std::map<int, std::pair<int, int>> span;  // vertex -> [first, last]
    for (std::size_t i = 0; i < pd.size(); ++i)
        for (int v : pd[i]) {
            auto it = span.find(v);
            if (it == span.end())
                span[v] = {static_cast<int>(i), static_cast<int>(i)};
            else
                it->second.second = static_cast<int>(i);
        }
    for (int v : zone)
        if (!span.count(v))
            return Diagnostics::fail(where + ": zone vertex " + std::to_string(v) + " uncovered");
    for (const auto& [v, se] : span)
        for (int i = se.first; i <= se.second; ++i)
            if (!std::binary_search(pd[static_cast<std::size_t>(i)].begin(),
                                    pd[static_cast<std::size_t>(i)].end(), v))
                return Diagnostics::fail(where + ": trace of vertex " + std::to_string(v) +
                                         " has a gap");
    for (std::size_t i = 0; i + 1 < pd.size(); ++i) {
        std::vector<int> adh = sorted_intersection(pd[i], pd[i + 1]);
        if (static_cast<int>(adh.size()) > adhesion_limit)
            return Diagnostics::fail(where + ": adhesion " + std::to_string(adh.size()) +
                                     " exceeds " + std::to_string(adhesion_limit));
    }
    // induced hyperedges inside some bag
    Hypergraph hz = h.induced(zone);
    for (const auto& e : hz.edges) {
        bool inside = false;
        for (const auto& bag : pd)
            if (std::includes(bag.begin(), bag.end(), e.begin(), e.end())) {
                inside = true;
                break;
            }
        if (!inside) return Diagnostics::fail(where + ": induced hyperedge not inside any bag");
    }
    for (int v : left_required)
        if (!std::binary_search(pd.front().begin(), pd.front().end(), v))
            return Diagnostics::fail(where + ": leftmost bag misses required vertex " +
                                     std::to_string(v));
    for (int v : right_required)
        if (!std::binary_search(pd.back().begin(), pd.back().end(), v))
            return Diagnostics::fail(where + ": rightmost bag misses required vertex " +
                                     std::to_string(v));
    return Diagnostics::pass();
}

}  // namespace detail

// Full check of the thinness conditions for a witness.
inline Diagnostics check_thinness(const Network& net, const ThinnessWitness& w, int k,
                                  const SetFamilyOracle& oracle) {
    Diagnostics nd = net.validate();
    if (!nd) return nd;
    for (std::size_t i = 0; i < net.h.edges.size(); ++i)
        if (static_cast<int>(net.h.edges[i].size()) > k)
            return Diagnostics::fail("hyperedge " + std::to_string(i) + " has size above k");

    Zones z = classify_zones(net);
    std::vector<std::vector<int>> seq;
    for (std::size_t occ : z.cutedges) seq.push_back(net.h.edges[occ]);
    if (seq != w.cutedges) return Diagnostics::fail("witness cutedge sequence is stale");
    std::size_t p = z.cutedges.size();
    if (w.bridge_pds.size() != p + 1 || w.appendix_pds.size() != p)
        return Diagnostics::fail("witness zone count mismatch");

    std::vector<std::vector<int>> boundary;
    boundary.push_back({net.source});
    for (std::size_t occ : z.cutedges) boundary.push_back(net.h.edges[occ]);
    boundary.push_back({net.sink});

    for (std::size_t i = 0; i <= p; ++i) {
        std::vector<int> left = sorted_intersection(z.bridges[i], boundary[i]);
        std::vector<int> right = sorted_intersection(z.bridges[i], boundary[i + 1]);
        Diagnostics d = detail::check_zone_pd(
            net.h, z.bridges[i], w.bridge_pds[i], 2 * k, left, right,
            [&](const std::vector<int>& bag) { return oracle.contains_plus(bag, k); },
            "bridge zone " + std::to_string(i));
        if (!d) return d;
    }
    for (std::size_t i = 1; i <= p; ++i) {
        std::vector<int> left = sorted_intersection(z.appendices[i - 1], boundary[i]);
        Diagnostics d = detail::check_zone_pd(
            net.h, z.appendices[i - 1], w.appendix_pds[i - 1], k, left, {},
            [&](const std::vector<int>& bag) { return oracle.contains(bag); },
            "appendix zone " + std::to_string(i));
        if (!d) return d;
    }
    return Diagnostics::pass();
}

// Witness with one bag per zone; valid whenever the whole vertex set is in
// the family.
inline ThinnessWitness trivial_witness(const Network& net) {
    ThinnessWitness w;
    Zones z = classify_zones(net);
    for (std::size_t occ : z.cutedges) w.cutedges.push_back(net.h.edges[occ]);
    for (const auto& zone : z.bridges)
        w.bridge_pds.push_back(zone.empty() ? ZonePd{} : ZonePd{zone});
    for (const auto& zone : z.appendices)
        w.appendix_pds.push_back(zone.empty() ? ZonePd{} : ZonePd{zone});
    return w;
}

namespace detail {

inline ZonePd restrict_pd(const ZonePd& pd, const std::vector<int>& keep) {
    ZonePd out;
    for (const auto& bag : pd) out.push_back(sorted_intersection(bag, keep));
    return out;
}

inline ZonePd add_to_all(const ZonePd& pd, const std::vector<int>& add) {
    ZonePd out;
    for (const auto& bag : pd) out.push_back(sorted_union(bag, add));
    return out;
}

inline ZonePd concat(std::initializer_list<ZonePd> parts) {
    ZonePd out;
    for (const auto& part : parts)
        for (const auto& bag : part) out.push_back(bag);
    return out;
}

}  // namespace detail

// Substitution of a hypergraph K for a cutedge e (vertex overlap exactly e):
// rebuilds the witness by splicing K's bag ahead of the old appendix zone and
// restricting to the new zones.
inline std::pair<Network, ThinnessWitness> substitute(const Network& net, std::size_t e_occ,
                                                      const Hypergraph& kgraph_in,
                                                      const ThinnessWitness& w, int k,
                                                      const SetFamilyOracle& oracle) {
    Hypergraph kgraph = kgraph_in;
    kgraph.normalize();
    Diagnostics wd = check_thinness(net, w, k, oracle);
    if (!wd) throw Error("substitute: input witness fails: " + wd.message);
    for (const auto& e : kgraph.edges)
        if (static_cast<int>(e.size()) > k)
            throw Error("substitute: K has a hyperedge of size above k");
    if (!oracle.contains(kgraph.vertices))
        throw Error("substitute: V(K) is not in the set family");

    Zones z = classify_zones(net);
    std::size_t ell = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < z.cutedges.size(); ++i)
        if (z.cutedges[i] == e_occ) ell = i;
    if (ell == static_cast<std::size_t>(-1)) throw Error("substitute: edge is not a cutedge");
    const std::vector<int> e = net.h.edges[e_occ];
    {
        std::vector<int> shared;
        std::set_intersection(net.h.vertices.begin(), net.h.vertices.end(),
                              kgraph.vertices.begin(), kgraph.vertices.end(),
                              std::back_inserter(shared));
        if (shared != e) throw Error("substitute: V(H) and V(K) must overlap exactly in e");
    }

    // the substituted network
    Network out;
    out.source = net.source;
    out.sink = net.sink;
    out.h = net.h.without_edge_occurrence(e_occ);
    out.h.vertices = sorted_union(out.h.vertices, kgraph.vertices);
    for (std::size_t i = 0; i < kgraph.edges.size(); ++i) {
        out.h.edges.push_back(kgraph.edges[i]);
        out.h.edge_tags.push_back(i < kgraph.edge_tags.size() ? kgraph.edge_tags[i] : "");
    }
    Diagnostics od = out.validate();
    if (!od) throw Error("substitute: result is not a network: " + od.message);

    // old zone decompositions around e
    const ZonePd& old_w = w.appendix_pds[ell];    // W_ell
    const ZonePd& old_vl = w.bridge_pds[ell];     // V_{ell-1}
    const ZonePd& old_vr = w.bridge_pds[ell + 1]; // V_ell

    // P': bag V(K) prepended to the appendix decomposition
    ZonePd pprime;
    pprime.push_back(kgraph.vertices);
    for (const auto& bag : old_w) pprime.push_back(bag);

    Zones nz = classify_zones(out);
    // new sequence must be (e_1..e_{l-1}, f_1..f_q, e_{l+1}..e_p)
    std::size_t p_old = z.cutedges.size();
    std::size_t p_new = nz.cutedges.size();
    if (p_new + 1 < p_old) throw Error("substitute: cutedge sequence lost members");
    std::size_t q = p_new - (p_old - 1);
    for (std::size_t i = 0; i < ell; ++i)
        if (net.h.edges[z.cutedges[i]] != out.h.edges[nz.cutedges[i]])
            throw Error("substitute: cutedge prefix changed");
    for (std::size_t i = ell + 1; i < p_old; ++i)
        if (net.h.edges[z.cutedges[i]] != out.h.edges[nz.cutedges[i - 1 + q]])
            throw Error("substitute: cutedge suffix changed");

    ThinnessWitness nw;
    for (std::size_t occ : nz.cutedges) nw.cutedges.push_back(out.h.edges[occ]);
    nw.bridge_pds.assign(p_new + 1, {});
    nw.appendix_pds.assign(p_new, {});
    // zones away from e are untouched
    for (std::size_t i = 0; i < p_old + 1; ++i) {
        if (i == ell || i == ell + 1) continue;
        std::size_t j = i < ell ? i : i - 1 + q;
        nw.bridge_pds[j] = w.bridge_pds[i];
    }
    for (std::size_t i = 0; i < p_old; ++i) {
        if (i == ell) continue;
        std::size_t j = i < ell ? i : i - 1 + q;
        nw.appendix_pds[j] = w.appendix_pds[i];
    }

    if (q == 0) {
        // single merged bridge zone: V_{l-1} . (W_l + e) . [V(K)] . V_l
        std::vector<int> x0 = nz.bridges[ell];
        ZonePd mid = detail::add_to_all(old_w, e);
        ZonePd assembled = detail::concat({old_vl, mid, ZonePd{kgraph.vertices}, old_vr});
        nw.bridge_pds[ell] = detail::restrict_pd(assembled, x0);
    } else {
        const std::vector<int>& f1 = out.h.edges[nz.cutedges[ell]];
        const std::vector<int>& fq = out.h.edges[nz.cutedges[ell + q - 1]];
        // X_0: V_{l-1} then P' + f1
        {
            std::vector<int> x0 = nz.bridges[ell];
            ZonePd assembled = detail::concat({old_vl, detail::add_to_all(pprime, f1)});
            nw.bridge_pds[ell] = detail::restrict_pd(assembled, x0);
        }
        // middle bridges X_j: P' restricted, f_{j+1} added everywhere
        for (std::size_t j = 1; j < q; ++j) {
            std::vector<int> xj = nz.bridges[ell + j];
            const std::vector<int>& fnext = out.h.edges[nz.cutedges[ell + j]];
            ZonePd assembled = detail::add_to_all(detail::restrict_pd(pprime, xj), fnext);
            nw.bridge_pds[ell + j] = detail::restrict_pd(assembled, xj);
        }
        // X_q: reversed P' + fq, then V_l
        {
            std::vector<int> xq = nz.bridges[ell + q];
            ZonePd rev = detail::add_to_all(pprime, fq);
            std::reverse(rev.begin(), rev.end());
            ZonePd assembled = detail::concat({rev, old_vr});
            nw.bridge_pds[ell + q] = detail::restrict_pd(assembled, xq);
        }
        // new appendices Y_j: P' restricted
        for (std::size_t j = 0; j < q; ++j) {
            std::vector<int> yj = nz.appendices[ell + j];
            nw.appendix_pds[ell + j] = detail::restrict_pd(pprime, yj);
        }
    }
    // drop placeholder bags for genuinely empty zones
    for (std::size_t i = 0; i <= p_new; ++i)
        if (nz.bridges[i].empty()) nw.bridge_pds[i].clear();
    for (std::size_t i = 0; i < p_new; ++i)
        if (nz.appendices[i].empty()) nw.appendix_pds[i].clear();

    Diagnostics after = check_thinness(out, nw, k, oracle);
    if (!after) throw Error("substitute: rebuilt witness fails: " + after.message);
    return {out, nw};
}

// Assembles the witness zones into one path-decomposition of the whole
// network hypergraph: bridge pds in order, cutedge bags between, appendix pds
// widened by their cutedge.
inline ZonePd assemble_witness_pd(const Network& net, const ThinnessWitness& w) {
    Zones z = classify_zones(net);
    ZonePd out;
    for (std::size_t i = 0; i <= z.cutedges.size(); ++i) {
        if (!z.bridges[i].empty())
            for (const auto& bag : w.bridge_pds[i]) out.push_back(bag);
        if (i < z.cutedges.size()) {
            const auto& e = net.h.edges[z.cutedges[i]];
            out.push_back(e);
            if (!z.appendices[i].empty())
                for (const auto& bag : detail::add_to_all(w.appendix_pds[i], e))
                    out.push_back(bag);
        }
    }
    return out;
}

// Validity of a hypergraph path-decomposition (cover, hyperedges in bags,
// interval traces), plus adhesion and bag-family conditions.
inline Diagnostics check_hyper_pd(const Hypergraph& h, const ZonePd& pd, int adhesion_limit,
                                  const std::function<bool(const std::vector<int>&)>& bag_ok) {
    std::vector<int> all = h.vertices;
    ZonePd sorted = pd;
    for (auto& bag : sorted) std::sort(bag.begin(), bag.end());
    Diagnostics d = detail::check_zone_pd(h, all, sorted, adhesion_limit, {}, {}, bag_ok,
                                          "assembled decomposition");
    return d;
}

struct GrowPrefixResult {
    std::vector<int> prefix;   // node ids of the tree-decomposition
    Network network;           // the final hypertorso network
    ThinnessWitness witness;
    ZonePd decomposition;      // path-decomposition of the hypertorso
    HyperPath p1, p2;
    int iterations = 0;
};

// Grows a prefix of a sane tree-decomposition from the root until the two
// flow paths avoid sharing any adhesion hyperedge; thinness of the hypertorso
// network is maintained and checked at every step.
inline GrowPrefixResult grow_prefix(const Graph& g, const TreeDecomposition& td, int u, int v) {
    Diagnostics sd = check_sane(g, td);
    if (!sd) throw Error("grow_prefix: decomposition is not sane: " + sd.message);
    int root = td.root();
    const auto& root_bag = td.bag(root);
    if (!std::binary_search(root_bag.begin(), root_bag.end(), u) ||
        !std::binary_search(root_bag.begin(), root_bag.end(), v))
        throw Error("grow_prefix: endpoints must lie in the root bag");
    if (u == v) throw Error("grow_prefix: endpoints must differ");

    // graph edges enter the hypertorsos as 2-element hyperedges, so the
    // thinness size bound is at least 2
    auto [width, adhesion] = width_and_adhesion(g, td);
    (void)width;
    int k = std::max(adhesion, 2);
    BagSubsetOracle oracle(td);
    DecompositionViews views(g, td);

    GrowPrefixResult result;
    result.prefix = {root};

    Network net;
    net.source = u;
    net.sink = v;
    net.h = hypertorso_of_prefix(g, td, result.prefix);
    ThinnessWitness w = trivial_witness(net);
    Diagnostics d0 = check_thinness(net, w, k, oracle);
    if (!d0) throw Error("grow_prefix: initial hypertorso is not thin: " + d0.message);

    std::vector<char> in_prefix(td.nodes.size(), 0);
    in_prefix[static_cast<std::size_t>(root)] = 1;

    while (true) {
        ++result.iterations;
        auto [p1, p2] = menger_two_paths(net);
        // shared hyperedges are the cutedges; look for one carrying an adhesion
        std::vector<std::size_t> cut = cutedge_sequence(net);
        int grow_node = -1;
        for (std::size_t occ : cut) {
            if (!p1.uses_occurrence(occ) || !p2.uses_occurrence(occ)) continue;
            const std::string& tag = net.h.edge_tags[occ];
            if (tag.rfind("adhesion:", 0) == 0) {
                grow_node = std::stoi(tag.substr(9));
                break;
            }
        }
        if (grow_node == -1) {
            result.network = net;
            result.witness = w;
            result.p1 = p1;
            result.p2 = p2;
            result.decomposition = assemble_witness_pd(net, w);
            Diagnostics pd_ok = check_hyper_pd(
                net.h, result.decomposition, 2 * k,
                [&](const std::vector<int>& bag) { return oracle.contains_plus(bag, k); });
            if (!pd_ok)
                throw Error("grow_prefix: assembled decomposition fails: " + pd_ok.message);
            return result;
        }

        // K: hypertorso of the new node, skipping graph edges already present
        std::size_t e_occ = static_cast<std::size_t>(-1);
        for (std::size_t occ : cut)
            if (net.h.edge_tags[occ] == "adhesion:" + std::to_string(grow_node)) e_occ = occ;
        const std::vector<int>& adh = views.adhesion(grow_node);
        Hypergraph kgraph;
        kgraph.vertices = td.bag(grow_node);
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [x, y] = g.edge(e);
            if (!std::binary_search(kgraph.vertices.begin(), kgraph.vertices.end(), x) ||
                !std::binary_search(kgraph.vertices.begin(), kgraph.vertices.end(), y))
                continue;
            if (std::binary_search(adh.begin(), adh.end(), x) &&
                std::binary_search(adh.begin(), adh.end(), y))
                continue;  // already a graph edge of the current hypertorso
            kgraph.edges.push_back({std::min(x, y), std::max(x, y)});
            kgraph.edge_tags.push_back("graph");
        }
        for (int c : views.children(grow_node)) {
            kgraph.edges.push_back(views.adhesion(c));
            kgraph.edge_tags.push_back("adhesion:" + std::to_string(c));
        }

        auto [net2, w2] = substitute(net, e_occ, kgraph, w, k, oracle);
        net = std::move(net2);
        w = std::move(w2);
        in_prefix[static_cast<std::size_t>(grow_node)] = 1;
        result.prefix.push_back(grow_node);

        // loop invariant: the network is exactly the hypertorso of the prefix
        Hypergraph expect = hypertorso_of_prefix(g, td, result.prefix);
        auto canon = [](Hypergraph h) {
            std::sort(h.edges.begin(), h.edges.end());
            return h;
        };
        Hypergraph a = canon(net.h), b = canon(expect);
        if (a.vertices != b.vertices || a.edges != b.edges)
            throw Error("grow_prefix: substituted network differs from the prefix hypertorso");
    }
}

}  // namespace bn

#endif
