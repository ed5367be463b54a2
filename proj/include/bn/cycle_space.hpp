#ifndef BN_CYCLE_SPACE_HPP
#define BN_CYCLE_SPACE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "bn/graph.hpp"
#include "bn/subgraph.hpp"

namespace bn {

// GF(2) vector over the edge indices of one host graph. XOR is the only
// combining operation.
class EdgeVector {
public:
    EdgeVector() : host_hash_(0), size_(0) {}
    explicit EdgeVector(const Graph& g)
        : host_hash_(g.hash()),
          size_(g.num_edges()),
          w_(static_cast<std::size_t>((g.num_edges() + 63) / 64), 0) {}

    static EdgeVector from_edges(const Graph& g, const std::vector<int>& edge_ids) {
        EdgeVector v(g);
        for (int e : edge_ids) v.set(e);
        return v;
    }

    std::uint64_t host_hash() const { return host_hash_; }
    int size() const { return size_; }

    bool test(int e) const { return (w_[static_cast<std::size_t>(e >> 6)] >> (e & 63)) & 1; }
    void set(int e) { w_[static_cast<std::size_t>(e >> 6)] |= 1ULL << (e & 63); }
    void reset(int e) { w_[static_cast<std::size_t>(e >> 6)] &= ~(1ULL << (e & 63)); }
    void flip(int e) { w_[static_cast<std::size_t>(e >> 6)] ^= 1ULL << (e & 63); }

    EdgeVector& operator^=(const EdgeVector& o) {
        check_host(o);
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend EdgeVector operator^(EdgeVector a, const EdgeVector& b) {
        a ^= b;
        return a;
    }

    bool operator==(const EdgeVector& o) const {
        return host_hash_ == o.host_hash_ && w_ == o.w_;
    }

    bool empty() const {
        for (std::uint64_t x : w_)
            if (x) return false;
        return true;
    }

    int popcount() const {
        int c = 0;
        for (std::uint64_t x : w_) c += std::popcount(x);
        return c;
    }

    // Lowest set edge id, or -1.
    int lowest() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64) + std::countr_zero(w_[i]);
        return -1;
    }

    std::vector<int> edge_ids() const {
        std::vector<int> out;
        for (int e = 0; e < size_; ++e)
            if (test(e)) out.push_back(e);
        return out;
    }

    void check_host(const EdgeVector& o) const {
        if (host_hash_ != o.host_hash_) throw Error("edge vectors of different host graphs");
    }
    void check_host(const Graph& g) const {
        if (host_hash_ != g.hash()) throw Error("edge vector does not belong to this graph");
    }

private:
    std::uint64_t host_hash_;
    int size_;
    std::vector<std::uint64_t> w_;
};

// Ordered list of edge vectors over one host graph.
struct CycleFamily {
    std::uint64_t host_hash = 0;
    std::vector<EdgeVector> members;

    CycleFamily() = default;
    explicit CycleFamily(const Graph& g) : host_hash(g.hash()) {}

    void add(EdgeVector v) {
        if (host_hash == 0 && members.empty()) host_hash = v.host_hash();
        if (v.host_hash() != host_hash) throw Error("cycle family host mismatch");
        members.push_back(std::move(v));
    }
    int size() const { return static_cast<int>(members.size()); }
};

inline bool is_f2_cycle(const Graph& g, const EdgeVector& v) {
    v.check_host(g);
    std::vector<int> deg(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int e : v.edge_ids()) {
        auto [a, b] = g.edge(e);
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    for (int d : deg)
        if (d % 2) return false;
    return true;
}

// First odd-degree vertex of v, or -1 when v is an F2-cycle.
inline int odd_degree_vertex(const Graph& g, const EdgeVector& v) {
    std::vector<int> deg(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int e : v.edge_ids()) {
        auto [a, b] = g.edge(e);
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    for (int u = 0; u < g.num_vertices(); ++u)
        if (deg[static_cast<std::size_t>(u)] % 2) return u;
    return -1;
}

inline int cycle_space_dimension(const Graph& g) {
    return g.num_edges() - g.num_vertices() + num_components(g);
}

// Incremental GF(2) eliminator; pivots on the lowest set edge id, so reduced
// forms are deterministic.
class Eliminator {
public:
    // Reduces v against the current basis; if nonzero remains it is inserted
    // and true returned.
    bool insert(EdgeVector v) {
        reduce(v);
        if (v.empty()) return false;
        int p = v.lowest();
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        // keep rows ordered by pivot
        for (std::size_t i = rows_.size() - 1; i > 0 && pivots_[i - 1] > pivots_[i]; --i) {
            std::swap(rows_[i - 1], rows_[i]);
            std::swap(pivots_[i - 1], pivots_[i]);
        }
        return true;
    }

    void reduce(EdgeVector& v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (v.test(pivots_[i])) v ^= rows_[i];
    }

    bool contains(EdgeVector v) const {
        reduce(v);
        return v.empty();
    }

    int rank() const { return static_cast<int>(rows_.size()); }

private:
    std::vector<EdgeVector> rows_;
    std::vector<int> pivots_;
};

inline int rank(const CycleFamily& fam) {
    Eliminator el;
    for (const auto& v : fam.members) el.insert(v);
    return el.rank();
}

inline bool generates_cycle_space(const Graph& g, const CycleFamily& fam) {
    if (!fam.members.empty() && fam.host_hash != g.hash())
        throw Error("cycle family does not belong to this graph");
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        int u = odd_degree_vertex(g, fam.members[i]);
        if (u >= 0)
            throw Error("family member " + std::to_string(i) + " is not an F2-cycle: vertex " +
                        std::to_string(u) + " has odd degree");
    }
    return rank(fam) == cycle_space_dimension(g);
}

// Same test against the cycle space of a subgraph (the family must be
// supported inside it).
inline bool generates_cycle_space(const Subgraph& g, const CycleFamily& fam) {
    for (std::size_t i = 0; i < fam.members.size(); ++i)
        for (int e : fam.members[i].edge_ids())
            if (!g.has_edge(e))
                throw Error("family member " + std::to_string(i) +
                            " uses edge outside the subgraph");
    return rank(fam) == g.cycle_space_dim();
}

// Max over edges of the membership count, with multiplicity.
inline int congestion(const CycleFamily& fam) {
    if (fam.members.empty()) return 0;
    std::vector<int> count(static_cast<std::size_t>(fam.members[0].size()), 0);
    int best = 0;
    for (const auto& v : fam.members)
        for (int e : v.edge_ids()) best = std::max(best, ++count[static_cast<std::size_t>(e)]);
    return best;
}

// Greedy keep-first independent subsequence spanning the same subspace.
inline CycleFamily prune_to_basis(const CycleFamily& fam, int expected_dim = -1) {
    CycleFamily out;
    out.host_hash = fam.host_hash;
    Eliminator el;
    for (const auto& v : fam.members)
        if (el.insert(v)) out.members.push_back(v);
    if (expected_dim >= 0 && el.rank() != expected_dim)
        throw Error("family does not generate: rank " + std::to_string(el.rank()) + " < " +
                    std::to_string(expected_dim));
    return out;
}

// Girth by per-vertex BFS; -1 for forests.
inline int girth(const Graph& g) {
    int best = -1;
    int n = g.num_vertices();
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::vector<int> par_edge(static_cast<std::size_t>(n), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (auto [w, e] : g.incident(u)) {
                if (e == par_edge[static_cast<std::size_t>(u)]) continue;
                if (dist[static_cast<std::size_t>(w)] == -1) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    par_edge[static_cast<std::size_t>(w)] = e;
                    queue.push_back(w);
                } else {
                    int len = dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(w)] + 1;
                    if (best == -1 || len < best) best = len;
                }
            }
        }
    }
    return best;
}

// (1 - 2/d) * girth with d the average degree, as an exact rational.
inline Rational girth_lower_bound(const Graph& g) {
    int gamma = girth(g);
    if (gamma < 0) throw Error("girth_lower_bound: no cycle");
    long long m = g.num_edges(), n = g.num_vertices();
    return Rational((m - n) * gamma, m);
}

// Audit of the derivation of a certificate: which construction produced it and
// from which sub-bounds.
struct Derivation {
    std::string rule;
    std::string bound_formula;  // stated bound of the construction
    long long claimed = 0;      // concrete bound this step contributes
    std::vector<Derivation> children;
};

// A cycle family together with its measured congestion, a rank witness, and
// the bound the construction claims.
struct BasisCertificate {
    CycleFamily family;
    long long claimed_congestion = 0;
    int measured_congestion = 0;
    int rank = 0;
    int cycle_space_dim = 0;
    Derivation derivation;
};

inline BasisCertificate make_certificate(const CycleFamily& fam, long long claimed, int dim,
                                         Derivation deriv = {}) {
    BasisCertificate cert;
    cert.family = fam;
    cert.claimed_congestion = claimed;
    cert.measured_congestion = congestion(fam);
    cert.rank = rank(fam);
    cert.cycle_space_dim = dim;
    cert.derivation = std::move(deriv);
    if (cert.derivation.claimed == 0) cert.derivation.claimed = claimed;
    return cert;
}

// Full check: members are F2-cycles, rank equals the stated dimension, and
// measured congestion stays within the claim.
inline Diagnostics check_certificate(const Graph& g, const BasisCertificate& cert) {
    for (std::size_t i = 0; i < cert.family.members.size(); ++i) {
        int u = odd_degree_vertex(g, cert.family.members[i]);
        if (u >= 0)
            return Diagnostics::fail("member " + std::to_string(i) + " not an F2-cycle: vertex " +
                                     std::to_string(u) + " has odd degree");
    }
    int r = rank(cert.family);
    if (r != cert.rank)
        return Diagnostics::fail("stored rank " + std::to_string(cert.rank) + " != recomputed " +
                                 std::to_string(r));
    if (r != cert.cycle_space_dim)
        return Diagnostics::fail("rank " + std::to_string(r) + " < " +
                                 std::to_string(cert.cycle_space_dim));
    int mc = congestion(cert.family);
    if (mc != cert.measured_congestion)
        return Diagnostics::fail("stored congestion " + std::to_string(cert.measured_congestion) +
                                 " != recomputed " + std::to_string(mc));
    if (mc > cert.claimed_congestion)
        return Diagnostics::fail("measured congestion " + std::to_string(mc) +
                                 " exceeds claimed " + std::to_string(cert.claimed_congestion));
    return Diagnostics::pass();
}

}  // namespace bn

#endif
