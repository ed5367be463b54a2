#ifndef BN_PIPELINE_HPP
#define BN_PIPELINE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bn/captured_basis.hpp"
#include "bn/combinators.hpp"
#include "bn/cycle_space.hpp"
#include "bn/interface_semigroup.hpp"
#include "bn/oracle.hpp"

namespace bn {

// Produces a generating family for an arbitrary subgraph target; used for the
// leaf parts of the recursion.
using PartBasisProvider = std::function<BasisCertificate(const Subgraph&)>;

// Default provider: exact search on the materialized part, mapped back into
// host coordinates.
inline PartBasisProvider oracle_part_provider(long long budget = 10000000) {
    return [budget](const Subgraph& sub) {
        auto [part, verts] = sub.materialize();
        OracleResult res = exact_basis_number(part, budget);
        if (res.timed_out)
            throw Error("part basis provider: oracle budget exhausted on a part with " +
                        std::to_string(part.num_vertices()) + " vertices");
        CycleFamily fam;
        fam.host_hash = sub.host->hash();
        for (const auto& member : res.witness.family.members) {
            std::vector<int> edges;
            for (int le : member.edge_ids()) {
                auto [lu, lv] = part.edge(le);
                int e = sub.host->edge_id(verts[static_cast<std::size_t>(lu)],
                                          verts[static_cast<std::size_t>(lv)]);
                if (e < 0) throw Error("part basis provider: edge lost in translation");
                edges.push_back(e);
            }
            fam.members.push_back(EdgeVector::from_edges(*sub.host, edges));
        }
        return make_certificate(fam, res.bn, sub.cycle_space_dim(),
                                {"part_oracle", "bn(part)", res.bn, {}});
    };
}

// Shared coordinates for one glued word: every letter, every range of letters,
// and all certificates live inside the one host graph.
class WordContext {
public:
    WordContext(std::vector<BiInterfaceGraph> letters, ProductTable& table)
        : letters_(std::move(letters)), table_(&table) {
        WordGlue wg = glue_word(letters_);
        full_ = std::move(wg.glued);
        maps_ = std::move(wg.letter_maps);
        for (const auto& l : letters_) values_.push_back(abstraction(l));
        // range abstraction cache filled lazily through the product table
    }

    int word_length() const { return static_cast<int>(letters_.size()); }
    const BiInterfaceGraph& full() const { return full_; }
    const Graph& host() const { return full_.g; }
    const std::vector<Abstraction>& letter_values() const { return values_; }
    const std::vector<int>& letter_map(int i) const { return maps_[static_cast<std::size_t>(i)]; }
    ProductTable& table() const { return *table_; }

    Abstraction range_value(int lo, int hi) const {
        Abstraction v = values_[static_cast<std::size_t>(lo)];
        for (int i = lo + 1; i <= hi; ++i)
            v = table_->product(v, values_[static_cast<std::size_t>(i)]);
        return v;
    }

    // Interface vertex of a slot at the range boundary, in host coordinates.
    int range_left(int lo, int slot) const {
        int l = letters_[static_cast<std::size_t>(lo)].lambda[static_cast<std::size_t>(slot)];
        return l == -1 ? -1 : maps_[static_cast<std::size_t>(lo)][static_cast<std::size_t>(l)];
    }
    int range_right(int hi, int slot) const {
        int r = letters_[static_cast<std::size_t>(hi)].rho[static_cast<std::size_t>(slot)];
        return r == -1 ? -1 : maps_[static_cast<std::size_t>(hi)][static_cast<std::size_t>(r)];
    }

    std::vector<int> range_persistent(int lo, int hi) const {
        std::vector<int> out;
        for (int s = 0; s < full_.arity; ++s) {
            int l = range_left(lo, s), r = range_right(hi, s);
            if (l != -1 && l == r) out.push_back(l);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Edge-explicit image of a letter range.
    Subgraph range_subgraph(int lo, int hi) const {
        Subgraph s = Subgraph::empty(host());
        for (int i = lo; i <= hi; ++i) {
            const auto& m = maps_[static_cast<std::size_t>(i)];
            const Graph& lg = letters_[static_cast<std::size_t>(i)].g;
            for (int v = 0; v < lg.num_vertices(); ++v)
                s.vin[static_cast<std::size_t>(m[static_cast<std::size_t>(v)])] = 1;
            for (auto [u, v] : lg.edges()) {
                int e = host().edge_id(m[static_cast<std::size_t>(u)], m[static_cast<std::size_t>(v)]);
                if (e < 0) throw Error("range_subgraph: missing glued edge");
                s.ein[static_cast<std::size_t>(e)] = 1;
            }
        }
        return s;
    }

    Subgraph hat_subgraph(int lo, int hi) const {
        return range_subgraph(lo, hi).minus_vertices(range_persistent(lo, hi));
    }

private:
    std::vector<BiInterfaceGraph> letters_;
    ProductTable* table_;
    BiInterfaceGraph full_;
    std::vector<std::vector<int>> maps_;
    std::vector<Abstraction> values_;
};

namespace detail {

// Re-adds the vertices of `missing` (ascending) to grow `from` into `target`,
// chaining add_vertex certificates.
inline BasisCertificate add_back_vertices(const Subgraph& target, const std::vector<int>& missing,
                                          BasisCertificate cert) {
    std::vector<int> order = missing;
    std::sort(order.begin(), order.end());
    for (std::size_t j = 0; j < order.size(); ++j) {
        std::vector<int> rest(order.begin() + static_cast<std::ptrdiff_t>(j) + 1, order.end());
        Subgraph step = target.minus_vertices(rest);
        BasisCertificate next = add_vertex(step, order[j], cert.family);
        next.claimed_congestion = cert.claimed_congestion + 2;
        next.derivation =
            Derivation{"add_vertex", "bn(G-v) + 2", next.claimed_congestion, {cert.derivation}};
        cert = std::move(next);
    }
    return cert;
}

}  // namespace detail

// Binary step: re-add the interface vertices that stopped being persistent,
// then split across the bounded separator.
inline BasisCertificate binary_combine(const WordContext& ctx, int lo, int mid, int hi,
                                       const BasisCertificate& left,
                                       const BasisCertificate& right) {
    std::vector<int> pi = ctx.range_persistent(lo, hi);

    auto lift_side = [&](int a, int b, const BasisCertificate& cert) {
        Subgraph side_full = ctx.range_subgraph(a, b);
        Subgraph side_target = side_full.minus_vertices(pi);
        std::vector<int> side_pers = ctx.range_persistent(a, b);
        std::vector<int> missing;
        for (int v : side_pers)
            if (!std::binary_search(pi.begin(), pi.end(), v)) missing.push_back(v);
        return detail::add_back_vertices(side_target, missing, cert);
    };
    BasisCertificate cl = lift_side(lo, mid, left);
    BasisCertificate cr = lift_side(mid + 1, hi, right);

    Subgraph gl = ctx.range_subgraph(lo, mid).minus_vertices(pi);
    Subgraph gr = ctx.range_subgraph(mid + 1, hi).minus_vertices(pi);
    Subgraph target = ctx.hat_subgraph(lo, hi);

    int separator = 0;
    for (std::size_t v = 0; v < gl.vin.size(); ++v)
        if (gl.vin[v] && gr.vin[v]) ++separator;

    BasisCertificate out;
    if (separator == 0) {
        CycleFamily fam = cl.family;
        for (const auto& m : cr.family.members) fam.members.push_back(m);
        long long claimed = cl.claimed_congestion + cr.claimed_congestion;
        out = make_certificate(fam, claimed, target.cycle_space_dim(),
                               {"binary_combine/disjoint", "bn(G1) + bn(G2)", claimed,
                                {cl.derivation, cr.derivation}});
        if (out.rank != out.cycle_space_dim)
            throw Error("binary_combine: disjoint union family does not generate");
    } else {
        out = split_small_separator(target, gl, gr, cl.family, cr.family);
        out.claimed_congestion = cl.claimed_congestion + cr.claimed_congestion +
                                 2LL * std::max(0, separator - 1);
        out.derivation = Derivation{"binary_combine", "2b + O(k)", out.claimed_congestion,
                                    {cl.derivation, cr.derivation}};
        if (out.measured_congestion > out.claimed_congestion)
            throw Error("binary_combine: measured congestion exceeds the claim");
    }
    return out;
}

// Idempotent step: all factors share one idempotent abstraction; capturing
// paths live inside two consecutive bags, torsos extend the factor bases by
// at most k*k interface edges.
inline BasisCertificate idempotent_combine(const WordContext& ctx, const std::vector<int>& cuts,
                                           int lo, int hi,
                                           const std::vector<BasisCertificate>& certs) {
    int m = static_cast<int>(cuts.size());
    if (m < 2) throw Error("idempotent_combine: need at least two factors");
    auto bounds = [&](int j) {
        int a = cuts[static_cast<std::size_t>(j)];
        int b = (j + 1 < m) ? cuts[static_cast<std::size_t>(j + 1)] - 1 : hi;
        return std::pair<int, int>(a, b);
    };
    (void)lo;

    // all factor abstractions equal and idempotent
    Abstraction e = ctx.range_value(bounds(0).first, bounds(0).second);
    if (!ctx.table().is_idempotent(e))
        throw Error("idempotent_combine: factor abstraction is not idempotent");
    for (int j = 1; j < m; ++j) {
        auto [a, b] = bounds(j);
        if (!(ctx.range_value(a, b) == e))
            throw Error("idempotent_combine: factor abstractions differ");
    }

    Subgraph target = ctx.hat_subgraph(lo, hi);
    int k = ctx.full().arity;

    // factor hats and their per-factor certificates in host coordinates
    std::vector<Subgraph> fhat;
    for (int j = 0; j < m; ++j) {
        auto [a, b] = bounds(j);
        fhat.push_back(ctx.hat_subgraph(a, b));
    }
    // the union of the factor hats must be the range hat
    {
        Subgraph un = fhat[0];
        for (int j = 1; j < m; ++j) un = Subgraph::unite(un, fhat[static_cast<std::size_t>(j)]);
        if (un.vin != target.vin || un.ein != target.ein)
            throw Error("idempotent_combine: factor hats do not assemble the range hat");
    }

    if (target.num_vertices() == 0) {
        CycleFamily fam;
        fam.host_hash = ctx.host().hash();
        return make_certificate(fam, 0, 0, {"idempotent_combine", "empty hat", 0, {}});
    }

    auto comp = target.components();
    int pieces = target.num_components();

    CycleFamily fam;
    fam.host_hash = ctx.host().hash();
    long long claimed = 0;
    int dim_total = target.cycle_space_dim();
    Derivation deriv{"idempotent_combine", "(2c+1)(b'+1), paths inside two bags", 0, {}};

    for (int piece = 0; piece < pieces; ++piece) {
        Subgraph targetC = Subgraph::empty(ctx.host());
        for (std::size_t v = 0; v < target.vin.size(); ++v)
            if (target.vin[v] && comp[v] == piece) targetC.vin[v] = 1;
        for (int eid : target.edge_ids()) {
            auto [u, v] = ctx.host().edge(eid);
            if (targetC.has_vertex(u) && targetC.has_vertex(v))
                targetC.ein[static_cast<std::size_t>(eid)] = 1;
        }

        // bags: factor hats cut to the component
        std::vector<std::vector<int>> bags(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            for (int v : fhat[static_cast<std::size_t>(j)].vertices())
                if (targetC.has_vertex(v)) bags[static_cast<std::size_t>(j)].push_back(v);
        PathDecomposition pd;
        pd.bags = bags;
        TreeDecomposition td = pd.as_tree();

        // capturing paths found inside two consecutive bags
        CapturingPathFamily pf;
        for (int j = 1; j < m; ++j) {
            std::vector<int> adh = sorted_intersection(bags[static_cast<std::size_t>(j - 1)],
                                                       bags[static_cast<std::size_t>(j)]);
            if (adh.empty()) continue;
            std::vector<int> window_verts =
                sorted_union(bags[static_cast<std::size_t>(j - 1)], bags[static_cast<std::size_t>(j)]);
            Subgraph window = Subgraph::empty(ctx.host());
            for (int v : window_verts) window.vin[static_cast<std::size_t>(v)] = 1;
            for (int eid : targetC.edge_ids()) {
                auto [u, v] = ctx.host().edge(eid);
                if (window.has_vertex(u) && window.has_vertex(v))
                    window.ein[static_cast<std::size_t>(eid)] = 1;
            }
            for (std::size_t x = 0; x < adh.size(); ++x)
                for (std::size_t y = x + 1; y < adh.size(); ++y) {
                    auto path = shortest_path_in(window, adh[x], adh[y]);
                    if (!path)
                        throw Error("idempotent_combine: idempotence premise violated (no "
                                    "two-bag path between " + std::to_string(adh[x]) + " and " +
                                    std::to_string(adh[y]) + ")");
                    pf.entries[{j, adh[x], adh[y]}] = *path;
                }
        }
        int pfc = path_family_congestion(targetC, pf);
        if (pfc > 2 * k * k)
            throw Error("idempotent_combine: capturing family congestion " + std::to_string(pfc) +
                        " exceeds 2k^2");

        // torso bases: project the factor bases onto the component and add the
        // remaining interface edges through fundamental cycles
        std::map<int, CycleFamily> torso_bases;
        long long torso_claim_max = 0;
        for (int j = 0; j < m; ++j) {
            auto [torso, verts] = torso_graph(targetC, td, j);
            std::vector<int> local(targetC.vin.size(), -1);
            for (std::size_t i = 0; i < verts.size(); ++i)
                local[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);

            // factor edges inside the component, in torso coordinates
            Subgraph factor_part = Subgraph::empty(torso);
            factor_part.vin.assign(static_cast<std::size_t>(torso.num_vertices()), 1);
            for (int eid : fhat[static_cast<std::size_t>(j)].edge_ids()) {
                if (!targetC.has_edge(eid)) continue;
                auto [u, v] = ctx.host().edge(eid);
                int te = torso.edge_id(local[static_cast<std::size_t>(u)],
                                       local[static_cast<std::size_t>(v)]);
                if (te < 0) throw Error("idempotent_combine: factor edge missing from torso");
                factor_part.ein[static_cast<std::size_t>(te)] = 1;
            }
            std::vector<int> added;
            for (int te = 0; te < torso.num_edges(); ++te)
                if (!factor_part.has_edge(te)) added.push_back(te);

            // project the factor certificate onto the component
            CycleFamily projected(torso);
            for (const auto& member : certs[static_cast<std::size_t>(j)].family.members) {
                std::vector<int> edges;
                for (int eid : member.edge_ids()) {
                    if (!targetC.has_edge(eid)) continue;
                    auto [u, v] = ctx.host().edge(eid);
                    edges.push_back(torso.edge_id(local[static_cast<std::size_t>(u)],
                                                  local[static_cast<std::size_t>(v)]));
                }
                projected.members.push_back(EdgeVector::from_edges(torso, edges));
            }

            BasisCertificate torso_cert =
                add_edges_fallback(Subgraph::full(torso), added, projected);
            torso_claim_max = std::max(torso_claim_max, torso_cert.claimed_congestion);
            torso_bases[j] = torso_cert.family;
        }

        CapturedBasisResult cap = captured_adhesion_basis(targetC, td, torso_bases, pf);
        for (const auto& member : cap.certificate.family.members) fam.members.push_back(member);
        claimed = std::max(claimed, cap.certificate.claimed_congestion);
        deriv.children.push_back(cap.certificate.derivation);
    }

    deriv.claimed = claimed;
    BasisCertificate out = make_certificate(fam, claimed, dim_total, deriv);
    if (out.rank != out.cycle_space_dim)
        throw Error("idempotent_combine: assembled family does not generate (rank " +
                    std::to_string(out.rank) + " < " + std::to_string(out.cycle_space_dim) + ")");
    return out;
}

// Recursion over a factorisation tree; the certificate is verified at every
// node against the hat of its letter range.
inline BasisCertificate basis_from_tree(const WordContext& ctx, const FactorisationTree& tree,
                                        int node, const PartBasisProvider& provider) {
    const FactTreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
    BasisCertificate cert;
    if (nd.kind == FactTreeNode::Kind::Leaf) {
        Subgraph sub = ctx.hat_subgraph(nd.lo, nd.hi);
        cert = provider(sub);
        if (!generates_cycle_space(sub, cert.family))
            throw Error("basis_from_tree: leaf basis does not generate its part");
    } else if (nd.kind == FactTreeNode::Kind::Binary) {
        const auto& l = tree.nodes[static_cast<std::size_t>(nd.children[0])];
        BasisCertificate cl = basis_from_tree(ctx, tree, nd.children[0], provider);
        BasisCertificate cr = basis_from_tree(ctx, tree, nd.children[1], provider);
        cert = binary_combine(ctx, nd.lo, l.hi, nd.hi, cl, cr);
    } else {
        std::vector<int> cuts;
        std::vector<BasisCertificate> certs;
        for (int c : nd.children) {
            cuts.push_back(tree.nodes[static_cast<std::size_t>(c)].lo);
            certs.push_back(basis_from_tree(ctx, tree, c, provider));
        }
        cert = idempotent_combine(ctx, cuts, nd.lo, nd.hi, certs);
    }
    // soundness at every recursion node
    Subgraph sub = ctx.hat_subgraph(nd.lo, nd.hi);
    if (cert.rank != sub.cycle_space_dim())
        throw Error("basis_from_tree: node certificate rank mismatch");
    if (cert.measured_congestion > cert.claimed_congestion)
        throw Error("basis_from_tree: node certificate exceeds its claim");
    return cert;
}

struct PipelineResult {
    BasisCertificate certificate;  // in the coordinates of the input graph
    int word_length = 0;
    int tree_height = 0;
    int reachable_semigroup = 0;
};

// End-to-end run: word, factorisation forest, recursive combination, and the
// persistent vertices added back at the top.
inline PipelineResult bn_path_decomposition(const Graph& g, const PathDecomposition& pd, int k,
                                            const PartBasisProvider& provider,
                                            ProductTable& table) {
    PathWord word = word_from_path_decomposition(g, pd, k);
    WordContext ctx(word.letters, table);

    FactorisationTree tree = factorise(ctx.letter_values(), table);
    Diagnostics td = check_factorisation_tree(tree, ctx.letter_values(), table);
    if (!td) throw Error("bn_path_decomposition: invalid factorisation tree: " + td.message);

    PipelineResult result;
    result.word_length = ctx.word_length();
    result.tree_height = tree.height();
    result.reachable_semigroup =
        static_cast<int>(table.reachable(ctx.letter_values()).size());

    BasisCertificate cert = basis_from_tree(ctx, tree, tree.root, provider);

    // the glued graph must mirror g through the bag maps
    const Graph& full = ctx.host();
    std::vector<int> to_host(static_cast<std::size_t>(full.num_vertices()), -1);
    for (int i = 0; i < ctx.word_length(); ++i) {
        const auto& bag = word.letter_to_host[static_cast<std::size_t>(i)];
        const auto& map = ctx.letter_map(i);
        for (std::size_t j = 0; j < bag.size(); ++j) {
            int& slot = to_host[static_cast<std::size_t>(map[j])];
            if (slot != -1 && slot != bag[j])
                throw Error("bn_path_decomposition: glued graph does not match the input");
            slot = bag[j];
        }
    }
    if (full.num_vertices() != g.num_vertices() || full.num_edges() != g.num_edges())
        throw Error("bn_path_decomposition: glued graph size mismatch");

    // add the globally persistent vertices back
    std::vector<int> pi = ctx.range_persistent(0, ctx.word_length() - 1);
    Subgraph whole = Subgraph::full(full);
    cert = detail::add_back_vertices(whole, pi, cert);

    // translate into the coordinates of g
    CycleFamily fam(g);
    for (const auto& member : cert.family.members) {
        std::vector<int> edges;
        for (int eid : member.edge_ids()) {
            auto [u, v] = full.edge(eid);
            int e = g.edge_id(to_host[static_cast<std::size_t>(u)],
                              to_host[static_cast<std::size_t>(v)]);
            if (e < 0) throw Error("bn_path_decomposition: edge missing in the input graph");
            edges.push_back(e);
        }
        fam.members.push_back(EdgeVector::from_edges(g, edges));
    }
    Derivation top{"bn_path_decomposition",
                   "b * 2^(2^(O(k^2)))  (asymptotic form; the concrete bound is the composed "
                   "certificate chain)",
                   cert.claimed_congestion,
                   {cert.derivation}};
    result.certificate =
        make_certificate(fam, cert.claimed_congestion, cycle_space_dimension(g), top);
    if (result.certificate.rank != result.certificate.cycle_space_dim)
        throw Error("bn_path_decomposition: final certificate does not generate");
    if (result.certificate.measured_congestion > result.certificate.claimed_congestion)
        throw Error("bn_path_decomposition: final certificate exceeds its claim");
    return result;
}

}  // namespace bn

#endif
