#ifndef BN_ORACLE_HPP
#define BN_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "bn/cycle_space.hpp"
#include "bn/graph.hpp"

namespace bn {

// Every simple cycle of g as an edge vector, ordered by length and then by the
// lexicographic list of edge ids. Enumerates per smallest cycle vertex with a
// DFS over larger-id vertices; orientation fixed by second < last vertex.
inline CycleFamily enumerate_simple_cycles(const Graph& g, long long limit = 500000) {
    CycleFamily fam(g);
    int n = g.num_vertices();
    std::vector<int> stack_vertices;
    std::vector<int> stack_edges;
    std::vector<char> on_path(static_cast<std::size_t>(n), 0);

    std::vector<std::pair<std::pair<int, std::vector<int>>, EdgeVector>> found;
    long long count = 0;

    for (int s = 0; s < n; ++s) {
        stack_vertices = {s};
        on_path[static_cast<std::size_t>(s)] = 1;

        // iterative DFS with explicit neighbor cursors
        std::vector<std::size_t> cursor{0};
        while (!stack_vertices.empty()) {
            int u = stack_vertices.back();
            const auto& inc = g.incident(u);
            if (cursor.back() >= inc.size()) {
                on_path[static_cast<std::size_t>(u)] = 0;
                stack_vertices.pop_back();
                cursor.pop_back();
                if (!stack_edges.empty()) stack_edges.pop_back();
                continue;
            }
            auto [w, e] = inc[cursor.back()++];
            if (w == s && stack_vertices.size() >= 3) {
                // close a cycle; count each once via second < last
                if (stack_vertices[1] < stack_vertices.back()) {
                    std::vector<int> edge_list = stack_edges;
                    edge_list.push_back(e);
                    std::sort(edge_list.begin(), edge_list.end());
                    if (++count > limit)
                        throw Error("cycle enumeration exceeded limit of " +
                                    std::to_string(limit) + " (partial count " +
                                    std::to_string(count - 1) + ")");
                    found.push_back({{static_cast<int>(edge_list.size()), edge_list},
                                     EdgeVector::from_edges(g, edge_list)});
                }
                continue;
            }
            if (w <= s || on_path[static_cast<std::size_t>(w)]) continue;
            stack_vertices.push_back(w);
            stack_edges.push_back(e);
            on_path[static_cast<std::size_t>(w)] = 1;
            cursor.push_back(0);
        }
        on_path[static_cast<std::size_t>(s)] = 0;
    }

    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& f : found) fam.members.push_back(std::move(f.second));
    return fam;
}

struct OracleResult {
    int bn = 0;
    BasisCertificate witness;
    long long explored_nodes = 0;
    bool timed_out = false;
};

namespace detail {

// Feasibility search: dim independent cycles with per-edge usage <= cap.
// Deterministic include-first branching over the (length, lex)-sorted cycles.
class BasisSearch {
public:
    BasisSearch(const Graph& g, const CycleFamily& cycles, int dim, long long budget)
        : g_(g), cycles_(cycles), dim_(dim), budget_(budget) {
        int n = cycles_.size();
        lengths_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            lengths_[static_cast<std::size_t>(i)] = cycles_.members[static_cast<std::size_t>(i)].popcount();
        // rank of each suffix, for the remaining-rank prune
        suffix_rank_.assign(static_cast<std::size_t>(n) + 1, 0);
        Eliminator el;
        for (int i = n - 1; i >= 0; --i) {
            el.insert(cycles_.members[static_cast<std::size_t>(i)]);
            suffix_rank_[static_cast<std::size_t>(i)] = el.rank();
        }
        // prefix sums of lengths, for the edge-slot counting prune
        slot_prefix_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i)
            slot_prefix_[static_cast<std::size_t>(i) + 1] =
                slot_prefix_[static_cast<std::size_t>(i)] + lengths_[static_cast<std::size_t>(i)];
    }

    // Returns true and fills chosen when a basis within the cap exists.
    bool run(int cap, long long budget, std::vector<int>& chosen, long long& nodes,
             bool& exhausted) {
        cap_ = cap;
        budget_ = budget;
        usage_.assign(static_cast<std::size_t>(g_.num_edges()), 0);
        chosen_.clear();
        eliminator_ = Eliminator();
        nodes_ = 0;
        out_of_budget_ = false;
        slots_used_ = 0;
        bool ok = dfs(0);
        chosen = chosen_;
        nodes = nodes_;
        exhausted = !out_of_budget_;
        return ok;
    }

private:
    // Chooses the next cycle to include from position `start` on; the skip
    // branch is the loop continuation, so depth stays at most dim.
    bool dfs(int start) {
        if (eliminator_.rank() == dim_) return true;
        if (out_of_budget_) return false;
        int need = dim_ - eliminator_.rank();
        int n = cycles_.size();
        long long capacity = static_cast<long long>(cap_) * g_.num_edges();
        for (int idx = start; idx < n; ++idx) {
            if (++nodes_ > budget_) {
                out_of_budget_ = true;
                return false;
            }
            // both bounds are monotone along the sorted cycle order
            if (suffix_rank_[static_cast<std::size_t>(idx)] < need) return false;
            if (idx + need <= n) {
                long long cheapest = slot_prefix_[static_cast<std::size_t>(idx + need)] -
                                     slot_prefix_[static_cast<std::size_t>(idx)];
                if (slots_used_ + cheapest > capacity) return false;
            } else {
                return false;
            }

            const EdgeVector& cand = cycles_.members[static_cast<std::size_t>(idx)];
            bool fits = true;
            for (int e : cand.edge_ids())
                if (usage_[static_cast<std::size_t>(e)] + 1 > cap_) {
                    fits = false;
                    break;
                }
            if (!fits || eliminator_.contains(cand)) continue;
            Eliminator saved = eliminator_;
            eliminator_.insert(cand);
            chosen_.push_back(idx);
            for (int e : cand.edge_ids()) ++usage_[static_cast<std::size_t>(e)];
            slots_used_ += lengths_[static_cast<std::size_t>(idx)];
            if (dfs(idx + 1)) return true;
            slots_used_ -= lengths_[static_cast<std::size_t>(idx)];
            for (int e : cand.edge_ids()) --usage_[static_cast<std::size_t>(e)];
            chosen_.pop_back();
            eliminator_ = std::move(saved);
            if (out_of_budget_) return false;
        }
        return false;
    }

    const Graph& g_;
    const CycleFamily& cycles_;
    int dim_;
    long long budget_;
    int cap_ = 1;
    std::vector<int> lengths_;
    std::vector<int> suffix_rank_;
    std::vector<long long> slot_prefix_;
    std::vector<int> usage_;
    std::vector<int> chosen_;
    Eliminator eliminator_;
    long long nodes_ = 0;
    long long slots_used_ = 0;
    bool out_of_budget_ = false;
};

// Greedy basis from the sorted cycle pool, always extending with the
// independent cycle that keeps the running congestion lowest. Good upper
// bound; the exact search then only has to refute the caps below it.
inline CycleFamily greedy_low_congestion_basis(const Graph& g, const CycleFamily& cycles,
                                               int dim) {
    CycleFamily fam(g);
    Eliminator el;
    std::vector<int> usage(static_cast<std::size_t>(g.num_edges()), 0);
    while (el.rank() < dim) {
        int best = -1;
        std::pair<int, int> best_key{1 << 30, 1 << 30};
        for (int i = 0; i < cycles.size(); ++i) {
            const EdgeVector& cand = cycles.members[static_cast<std::size_t>(i)];
            int peak = 0;
            for (int e : cand.edge_ids())
                peak = std::max(peak, usage[static_cast<std::size_t>(e)] + 1);
            std::pair<int, int> key{peak, cand.popcount()};
            if (key >= best_key) continue;
            if (el.contains(cand)) continue;
            best = i;
            best_key = key;
        }
        if (best < 0) throw Error("greedy basis: cycle pool does not span the cycle space");
        const EdgeVector& chosen = cycles.members[static_cast<std::size_t>(best)];
        el.insert(chosen);
        for (int e : chosen.edge_ids()) ++usage[static_cast<std::size_t>(e)];
        fam.members.push_back(chosen);
    }
    return fam;
}

// Deterministic descent: repeatedly swap a member crossing a peak edge for a
// pool cycle that keeps the family a basis and lowers the usage profile.
inline void improve_basis(const Graph& g, const CycleFamily& pool, CycleFamily& basis) {
    int m = g.num_edges();
    auto usage_of = [&](const CycleFamily& fam) {
        std::vector<int> usage(static_cast<std::size_t>(m), 0);
        for (const auto& member : fam.members)
            for (int e : member.edge_ids()) ++usage[static_cast<std::size_t>(e)];
        return usage;
    };
    auto profile = [&](const std::vector<int>& usage) {
        int peak = 0;
        for (int u : usage) peak = std::max(peak, u);
        int at_peak = 0;
        for (int u : usage)
            if (u == peak) ++at_peak;
        return std::pair<int, int>(peak, at_peak);
    };

    for (int pass = 0; pass < 64; ++pass) {
        std::vector<int> usage = usage_of(basis);
        auto [peak, at_peak] = profile(usage);
        if (peak <= 1) return;
        bool improved = false;
        for (std::size_t i = 0; i < basis.members.size() && !improved; ++i) {
            bool crosses = false;
            for (int e : basis.members[i].edge_ids())
                if (usage[static_cast<std::size_t>(e)] == peak) crosses = true;
            if (!crosses) continue;
            // span of the family without member i
            Eliminator rest;
            for (std::size_t j = 0; j < basis.members.size(); ++j)
                if (j != i) rest.insert(basis.members[j]);
            std::vector<int> usage_without = usage;
            for (int e : basis.members[i].edge_ids())
                --usage_without[static_cast<std::size_t>(e)];
            for (const auto& cand : pool.members) {
                if (cand == basis.members[i]) continue;
                int cand_peak = 0;
                for (int e : cand.edge_ids())
                    cand_peak = std::max(cand_peak, usage_without[static_cast<std::size_t>(e)] + 1);
                if (cand_peak > peak) continue;
                std::vector<int> next_usage = usage_without;
                for (int e : cand.edge_ids()) ++next_usage[static_cast<std::size_t>(e)];
                auto next = profile(next_usage);
                if (next >= std::make_pair(peak, at_peak)) continue;
                if (rest.contains(cand)) continue;  // would lose rank
                basis.members[i] = cand;
                improved = true;
                break;
            }
        }
        if (!improved) return;
    }
}

// Fundamental-cycle basis w.r.t. the BFS spanning forest; cheap upper bound.
inline CycleFamily fundamental_basis(const Graph& g) {
    CycleFamily fam(g);
    auto forest = spanning_forest(g);
    std::vector<char> in_forest(static_cast<std::size_t>(g.num_edges()), 0);
    for (int e : forest) in_forest[static_cast<std::size_t>(e)] = 1;
    Subgraph fsub = Subgraph::empty(g).plus_edges(forest);
    for (int v = 0; v < g.num_vertices(); ++v)
        fsub.vin[static_cast<std::size_t>(v)] = 1;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (in_forest[static_cast<std::size_t>(e)]) continue;
        auto [u, v] = g.edge(e);
        auto path = shortest_path_in(fsub, u, v);
        if (!path) throw Error("internal: forest does not span component");
        EdgeVector vec = EdgeVector::from_edges(g, path->edge_ids);
        vec.flip(e);
        fam.members.push_back(std::move(vec));
    }
    return fam;
}

}  // namespace detail

// Exact minimum-congestion cycle basis by iterative deepening over the target
// congestion, searching over simple cycles only.
inline OracleResult exact_basis_number(const Graph& g, long long budget = 10000000,
                                       long long cycle_limit = 500000) {
    OracleResult result;
    int dim = cycle_space_dimension(g);
    if (dim == 0) {
        result.bn = 0;
        result.witness = make_certificate(CycleFamily(g), 0, 0, {"exact_oracle", "bn(G)", 0, {}});
        return result;
    }

    CycleFamily cycles = enumerate_simple_cycles(g, cycle_limit);
    CycleFamily fallback = detail::greedy_low_congestion_basis(g, cycles, dim);
    detail::improve_basis(g, cycles, fallback);
    int upper = congestion(fallback);

    int start = 1;
    if (girth(g) >= 0) start = std::max<long long>(1, girth_lower_bound(g).ceil());

    detail::BasisSearch search(g, cycles, dim, budget);
    for (int cap = start; cap < upper; ++cap) {
        std::vector<int> chosen;
        long long nodes = 0;
        bool exhausted = false;
        bool ok = search.run(cap, budget - result.explored_nodes, chosen, nodes, exhausted);
        result.explored_nodes += nodes;
        if (ok) {
            CycleFamily basis(g);
            for (int i : chosen) basis.members.push_back(cycles.members[static_cast<std::size_t>(i)]);
            result.bn = cap;
            result.witness =
                make_certificate(basis, cap, dim, {"exact_oracle", "bn(G)", cap, {}});
            return result;
        }
        if (!exhausted) {
            // budget ran out: report the best-known upper bound
            result.bn = upper;
            result.timed_out = true;
            result.witness = make_certificate(fallback, upper, dim,
                                              {"exact_oracle/timeout", "bn(G) <= bound", upper, {}});
            return result;
        }
    }
    // every cap below the greedy congestion is refuted, so the greedy basis
    // is optimal
    result.bn = upper;
    result.witness = make_certificate(fallback, upper, dim, {"exact_oracle", "bn(G)", upper, {}});
    return result;
}

// Certificate check against a concrete graph: members are F2-cycles of g,
// rank matches dim(g), measured within claimed.
inline Diagnostics verify_certificate(const Graph& g, const BasisCertificate& cert) {
    if (!cert.family.members.empty() && cert.family.host_hash != g.hash())
        return Diagnostics::fail("certificate host hash does not match graph");
    if (cert.cycle_space_dim != cycle_space_dimension(g))
        return Diagnostics::fail("certificate dimension " + std::to_string(cert.cycle_space_dim) +
                                 " != graph cycle space dimension " +
                                 std::to_string(cycle_space_dimension(g)));
    return check_certificate(g, cert);
}

}  // namespace bn

#endif
