#ifndef BN_JSON_IO_HPP
#define BN_JSON_IO_HPP

#include <json.hpp>

#include <iomanip>
#include <sstream>
#include <string>

#include "bn/captured_basis.hpp"
#include "bn/cycle_space.hpp"
#include "bn/decomposition.hpp"
#include "bn/graph.hpp"
#include "bn/graph_io.hpp"
#include "bn/oracle.hpp"
#include "bn/thin_networks.hpp"

namespace bn {

using json = nlohmann::json;

inline std::string hash_string(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

// ---- cycle families and certificates ----

inline json to_json(const CycleFamily& fam) {
    json j;
    j["graph_hash"] = hash_string(fam.host_hash);
    json cycles = json::array();
    for (const auto& m : fam.members) cycles.push_back(m.edge_ids());
    j["cycles"] = std::move(cycles);
    return j;
}

inline CycleFamily family_from_json(const json& j, const Graph& g) {
    if (j.at("graph_hash").get<std::string>() != hash_string(g.hash()))
        throw Error("cycle family belongs to a different graph");
    CycleFamily fam(g);
    for (const auto& cycle : j.at("cycles"))
        fam.members.push_back(EdgeVector::from_edges(g, cycle.get<std::vector<int>>()));
    return fam;
}

inline json to_json(const Derivation& d) {
    json j;
    j["rule"] = d.rule;
    j["bound"] = d.bound_formula;
    j["claimed"] = d.claimed;
    json children = json::array();
    for (const auto& c : d.children) children.push_back(to_json(c));
    j["from"] = std::move(children);
    return j;
}

// Certificates embed the graph so they can be verified standalone.
inline json to_json(const Graph& g, const BasisCertificate& cert) {
    json j;
    j["graph6"] = encode_graph6(g);
    j["family"] = to_json(cert.family);
    j["claimed_congestion"] = cert.claimed_congestion;
    j["measured_congestion"] = cert.measured_congestion;
    j["rank"] = cert.rank;
    j["cycle_space_dim"] = cert.cycle_space_dim;
    j["derivation"] = to_json(cert.derivation);
    return j;
}

inline std::pair<Graph, BasisCertificate> certificate_from_json(const json& j) {
    Graph g = parse_graph6(j.at("graph6").get<std::string>());
    BasisCertificate cert;
    cert.family = family_from_json(j.at("family"), g);
    cert.claimed_congestion = j.at("claimed_congestion").get<long long>();
    cert.measured_congestion = j.at("measured_congestion").get<int>();
    cert.rank = j.at("rank").get<int>();
    cert.cycle_space_dim = j.at("cycle_space_dim").get<int>();
    return {std::move(g), std::move(cert)};
}

inline json to_json(const Graph& g, const OracleResult& res) {
    json j;
    j["bn"] = res.bn;
    j["timed_out"] = res.timed_out;
    j["explored_nodes"] = res.explored_nodes;
    j["witness"] = to_json(g, res.witness);
    return j;
}

// ---- decompositions ----

inline json to_json(const TreeDecomposition& td) {
    json j;
    j["root"] = td.root();
    json nodes = json::array();
    for (const auto& nd : td.nodes) {
        json n;
        n["id"] = nd.id;
        n["parent"] = nd.parent < 0 ? json(nullptr) : json(nd.parent);
        n["bag"] = nd.bag;
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

inline TreeDecomposition decomposition_from_json(const json& j) {
    TreeDecomposition td;
    for (const auto& n : j.at("nodes")) {
        DecompNode nd;
        nd.id = n.at("id").get<int>();
        nd.parent = n.at("parent").is_null() ? -1 : n.at("parent").get<int>();
        nd.bag = n.at("bag").get<std::vector<int>>();
        std::sort(nd.bag.begin(), nd.bag.end());
        td.nodes.push_back(std::move(nd));
    }
    std::sort(td.nodes.begin(), td.nodes.end(),
              [](const DecompNode& a, const DecompNode& b) { return a.id < b.id; });
    for (int i = 0; i < td.size(); ++i)
        if (td.nodes[static_cast<std::size_t>(i)].id != i)
            throw Error("decomposition JSON: node ids must be 0..k-1");
    return td;
}

inline json to_json(const PathDecomposition& pd) {
    json j;
    j["bags"] = pd.bags;
    return j;
}

inline PathDecomposition path_decomposition_from_json(const json& j) {
    PathDecomposition pd;
    if (j.contains("bags")) {
        pd.bags = j.at("bags").get<std::vector<std::vector<int>>>();
    } else {
        // accept the tree schema when the tree is a path rooted at one end
        TreeDecomposition td = decomposition_from_json(j);
        int cur = td.root();
        auto ch = td.children();
        while (true) {
            pd.bags.push_back(td.bag(cur));
            const auto& c = ch[static_cast<std::size_t>(cur)];
            if (c.empty()) break;
            if (c.size() > 1) throw Error("decomposition is not a path");
            cur = c[0];
        }
        if (static_cast<int>(pd.bags.size()) != td.size())
            throw Error("decomposition is not a path");
    }
    return pd;
}

// ---- capturing path families ----

inline json to_json(const CapturingPathFamily& pf) {
    json entries = json::array();
    for (const auto& [key, path] : pf.entries) {
        auto [t, u, v] = key;
        json e;
        e["node"] = t;
        e["pair"] = {u, v};
        e["path"] = path.vertices;
        entries.push_back(std::move(e));
    }
    json j;
    j["entries"] = std::move(entries);
    return j;
}

inline CapturingPathFamily path_family_from_json(const json& j, const Graph& g) {
    CapturingPathFamily pf;
    for (const auto& e : j.at("entries")) {
        int t = e.at("node").get<int>();
        auto pair = e.at("pair").get<std::vector<int>>();
        if (pair.size() != 2) throw Error("path family entry: pair must have two vertices");
        VertexPath path;
        path.vertices = e.at("path").get<std::vector<int>>();
        for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
            int eid = g.edge_id(path.vertices[i], path.vertices[i + 1]);
            if (eid < 0)
                throw Error("path family entry: step " + std::to_string(i) + " is not an edge");
            path.edge_ids.push_back(eid);
        }
        int u = std::min(pair[0], pair[1]), v = std::max(pair[0], pair[1]);
        pf.entries[{t, u, v}] = std::move(path);
    }
    return pf;
}

// ---- hypergraphs, networks, thinness witnesses ----

inline json to_json(const Hypergraph& h) {
    json j;
    j["vertices"] = h.vertices;
    j["edges"] = h.edges;
    j["tags"] = h.edge_tags;
    return j;
}

inline Hypergraph hypergraph_from_json(const json& j) {
    Hypergraph h;
    h.vertices = j.at("vertices").get<std::vector<int>>();
    h.edges = j.at("edges").get<std::vector<std::vector<int>>>();
    if (j.contains("tags")) h.edge_tags = j.at("tags").get<std::vector<std::string>>();
    h.normalize();
    Diagnostics d = h.validate();
    if (!d) throw Error("hypergraph JSON: " + d.message);
    return h;
}

inline json to_json(const Network& net) {
    json j = to_json(net.h);
    j["source"] = net.source;
    j["sink"] = net.sink;
    return j;
}

inline Network network_from_json(const json& j) {
    Network net;
    net.h = hypergraph_from_json(j);
    net.source = j.at("source").get<int>();
    net.sink = j.at("sink").get<int>();
    return net;
}

inline json to_json(const ThinnessWitness& w) {
    json j;
    j["cutedges"] = w.cutedges;
    j["bridge_pds"] = w.bridge_pds;
    j["appendix_pds"] = w.appendix_pds;
    return j;
}

inline ThinnessWitness witness_from_json(const json& j) {
    ThinnessWitness w;
    w.cutedges = j.at("cutedges").get<std::vector<std::vector<int>>>();
    w.bridge_pds = j.at("bridge_pds").get<std::vector<ZonePd>>();
    w.appendix_pds = j.at("appendix_pds").get<std::vector<ZonePd>>();
    return w;
}

inline json to_json(const HyperPath& p) {
    json j;
    j["vertices"] = p.vertices;
    j["edge_occurrences"] = p.edge_occ;
    return j;
}

}  // namespace bn

#endif
