// bn: basis-number toolkit. Builds certified low edge-congestion cycle bases,
// checks certificates and thinness witnesses, and generates test fixtures.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bn/generators.hpp"
#include "bn/json_io.hpp"
#include "bn/pipeline.hpp"

using namespace bn;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Graph load_graph(const std::string& path, const std::string& format) {
    std::string text = read_file(path);
    std::string fmt = format;
    if (fmt.empty()) {
        auto dot = path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
        fmt = (ext == "el" || ext == "txt" || ext == "edges") ? "edgelist" : "g6";
    }
    if (fmt == "edgelist") return parse_edge_list(text);
    return parse_graph6(text);
}

json load_json(const std::string& path) { return json::parse(read_file(path)); }

long long budget_from_env(long long fallback) {
    const char* env = std::getenv("BN_BUDGET");
    if (!env) return fallback;
    return std::atoll(env);
}

void emit(const json& j, bool as_json, const std::string& human) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human << "\n";
}

void write_out(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

int cmd_exact(const std::string& graph_path, const std::string& format, long long budget,
              bool as_json, const std::string& out_path) {
    Graph g = load_graph(graph_path, format);
    OracleResult res = exact_basis_number(g, budget_from_env(budget));
    Diagnostics check = verify_certificate(g, res.witness);
    json j = to_json(g, res);
    j["verified"] = check.ok;
    if (!out_path.empty()) write_out(out_path, to_json(g, res.witness));
    std::ostringstream human;
    human << "bn" << (res.timed_out ? " <= " : " = ") << res.bn << "  (dim "
          << res.witness.cycle_space_dim << ", nodes " << res.explored_nodes << ", "
          << (check.ok ? "certificate ok" : "CERTIFICATE FAILED") << ")";
    emit(j, as_json, human.str());
    return check.ok ? 0 : 1;
}

int cmd_lowerbound(const std::string& graph_path, const std::string& format, bool as_json) {
    Graph g = load_graph(graph_path, format);
    Rational bound = girth_lower_bound(g);
    json j;
    j["lower_bound"] = bound.str();
    j["girth"] = girth(g);
    emit(j, as_json, bound.str());
    return 0;
}

int cmd_verify(const std::string& cert_path, bool as_json) {
    auto [g, cert] = certificate_from_json(load_json(cert_path));
    Diagnostics d = verify_certificate(g, cert);
    json j;
    j["verified"] = d.ok;
    j["reason"] = d.message;
    emit(j, as_json, d.ok ? "certificate ok" : "certificate FAILED: " + d.message);
    return d.ok ? 0 : 1;
}

int cmd_construct_tree_paths(const std::string& td_path, const std::string& paths_path,
                             const std::string& graph_path, const std::string& format,
                             long long budget, bool as_json, const std::string& out_path) {
    Graph g = load_graph(graph_path, format);
    TreeDecomposition td = decomposition_from_json(load_json(td_path));
    Diagnostics valid = validate(g, td);
    if (!valid) throw Error("invalid decomposition: " + valid.message);
    Subgraph full = Subgraph::full(g);
    CapturingPathFamily pf = paths_path.empty()
                                 ? default_path_family(full, td)
                                 : path_family_from_json(load_json(paths_path), g);

    std::map<int, CycleFamily> torso_bases;
    long long oracle_budget = budget_from_env(budget);
    for (int t = 0; t < td.size(); ++t) {
        auto [torso, verts] = torso_graph(full, td, t);
        (void)verts;
        OracleResult res = exact_basis_number(torso, oracle_budget);
        if (res.timed_out) throw Error("torso " + std::to_string(t) + " exceeded the budget");
        torso_bases[t] = res.witness.family;
        torso_bases[t].host_hash = torso.hash();
    }
    CapturedBasisResult res = captured_adhesion_basis(full, td, torso_bases, pf);
    Diagnostics check = verify_certificate(g, res.certificate);
    json j = to_json(g, res.certificate);
    j["path_congestion"] = res.path_congestion;
    j["max_torso_congestion"] = res.max_torso_congestion;
    j["verified"] = check.ok;
    if (!out_path.empty()) write_out(out_path, j);
    std::ostringstream human;
    human << "constructed family of " << res.certificate.family.size() << " cycles, congestion "
          << res.certificate.measured_congestion << " <= claimed "
          << res.certificate.claimed_congestion << " = (2*" << res.path_congestion << "+1)*("
          << res.max_torso_congestion << "+1), " << (check.ok ? "verified" : "FAILED");
    emit(j, as_json, human.str());
    return check.ok ? 0 : 1;
}

int cmd_construct_path_decomp(const std::string& pd_path, const std::string& graph_path,
                              const std::string& format, int arity, long long budget,
                              bool as_json, const std::string& out_path) {
    Graph g = load_graph(graph_path, format);
    PathDecomposition pd = path_decomposition_from_json(load_json(pd_path));
    pd.host_hash = g.hash();
    Diagnostics valid = validate(g, pd);
    if (!valid) throw Error("invalid path decomposition: " + valid.message);
    if (arity <= 0) {
        auto [w, adh] = width_and_adhesion(g, pd.as_tree());
        (void)w;
        arity = std::max(adh, 1);
    }
    ProductTable table;
    PipelineResult res =
        bn_path_decomposition(g, pd, arity, oracle_part_provider(budget_from_env(budget)), table);
    Diagnostics check = verify_certificate(g, res.certificate);
    json j = to_json(g, res.certificate);
    j["word_length"] = res.word_length;
    j["tree_height"] = res.tree_height;
    j["reachable_semigroup"] = res.reachable_semigroup;
    j["verified"] = check.ok;
    if (!out_path.empty()) write_out(out_path, j);
    std::ostringstream human;
    human << "constructed family of " << res.certificate.family.size() << " cycles, congestion "
          << res.certificate.measured_congestion << " <= claimed "
          << res.certificate.claimed_congestion << " (word " << res.word_length << ", height "
          << res.tree_height << ", |S| " << res.reachable_semigroup << "), "
          << (check.ok ? "verified" : "FAILED");
    emit(j, as_json, human.str());
    return check.ok ? 0 : 1;
}

int cmd_thin_check(const std::string& path, bool as_json) {
    json j = load_json(path);
    Network net = network_from_json(j.at("network"));
    ThinnessWitness w = witness_from_json(j.at("witness"));
    int k = j.at("k").get<int>();
    BagSubsetOracle oracle;
    oracle.bags = j.at("family_bags").get<std::vector<std::vector<int>>>();
    for (auto& b : oracle.bags) std::sort(b.begin(), b.end());
    Diagnostics d = check_thinness(net, w, k, oracle);
    json out;
    out["thin"] = d.ok;
    out["reason"] = d.message;
    emit(out, as_json, d.ok ? "witness ok" : "witness FAILED: " + d.message);
    return d.ok ? 0 : 1;
}

int cmd_grow_prefix(const std::string& td_path, const std::string& graph_path,
                    const std::string& format, int u, int v, bool as_json,
                    const std::string& out_path) {
    Graph g = load_graph(graph_path, format);
    TreeDecomposition td = decomposition_from_json(load_json(td_path));
    Diagnostics valid = validate(g, td);
    if (!valid) throw Error("invalid decomposition: " + valid.message);
    if (!check_sane(g, td)) td = make_sane(g, td);
    GrowPrefixResult res = grow_prefix(g, td, u, v);
    json j;
    j["prefix"] = res.prefix;
    j["iterations"] = res.iterations;
    j["network"] = to_json(res.network);
    j["witness"] = to_json(res.witness);
    j["decomposition_bags"] = res.decomposition;
    j["p1"] = to_json(res.p1);
    j["p2"] = to_json(res.p2);
    if (!out_path.empty()) write_out(out_path, j);
    std::ostringstream human;
    human << "prefix of " << res.prefix.size() << " nodes after " << res.iterations
          << " iterations; decomposition has " << res.decomposition.size() << " bags";
    emit(j, as_json, human.str());
    return 0;
}

int cmd_factorise(const std::string& pd_path, const std::string& graph_path,
                  const std::string& format, int arity, bool as_json) {
    Graph g = load_graph(graph_path, format);
    PathDecomposition pd = path_decomposition_from_json(load_json(pd_path));
    pd.host_hash = g.hash();
    Diagnostics valid = validate(g, pd);
    if (!valid) throw Error("invalid path decomposition: " + valid.message);
    if (arity <= 0) {
        auto [w, adh] = width_and_adhesion(g, pd.as_tree());
        (void)w;
        arity = std::max(adh, 1);
    }
    PathWord word = word_from_path_decomposition(g, pd, arity);
    ProductTable table;
    std::vector<Abstraction> values;
    for (const auto& l : word.letters) values.push_back(abstraction(l));
    FactorisationTree tree = factorise(values, table);
    Diagnostics d = check_factorisation_tree(tree, values, table);
    if (!d) throw Error("factorisation checker failed: " + d.message);
    int reach = static_cast<int>(table.reachable(values).size());
    json j;
    j["word_length"] = static_cast<int>(values.size());
    j["height"] = tree.height();
    j["reachable_semigroup"] = reach;
    j["within_bound"] = tree.height() <= 3 * reach;
    j["nodes"] = static_cast<int>(tree.nodes.size());
    std::ostringstream human;
    human << "word " << values.size() << ", height " << tree.height() << " <= 3*" << reach
          << (tree.height() <= 3 * reach ? " ok" : " VIOLATED");
    emit(j, as_json, human.str());
    return tree.height() <= 3 * reach ? 0 : 1;
}

int cmd_gen(const std::string& kind, int n, int pw, int percent, std::uint64_t seed, bool as_json,
            const std::string& out_path) {
    Rng rng(seed);
    json j;
    Graph g;
    if (kind == "clique") {
        g = gen_clique(n);
    } else if (kind == "cycle") {
        g = gen_cycle(n);
    } else if (kind == "path") {
        g = gen_path(n);
    } else if (kind == "ladder") {
        g = gen_ladder(n);
    } else if (kind == "petersen") {
        g = gen_petersen();
    } else if (kind == "k33") {
        g = gen_complete_bipartite(3, 3);
    } else if (kind == "apex-cubic") {
        auto [graph, apex] = gen_apex_cubic(n, rng);
        g = graph;
        j["apex"] = apex;
    } else if (kind == "random") {
        g = gen_random(n, percent, rng);
    } else if (kind == "random-connected") {
        g = gen_random_connected(n, percent, rng);
    } else if (kind == "random-pathwidth") {
        auto [graph, pd] = gen_random_pathwidth(n, pw, percent, rng);
        g = graph;
        j["path_decomposition"] = to_json(pd);
    } else if (kind == "random-td") {
        g = gen_random_connected(n, percent, rng);
        TreeDecomposition td = gen_elimination_td(g, rng);
        j["tree_decomposition"] = to_json(td);
    } else {
        throw Error("unknown fixture kind: " + kind);
    }
    j["graph6"] = encode_graph6(g);
    j["n"] = g.num_vertices();
    j["m"] = g.num_edges();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cannot write " + out_path);
        out << encode_graph6(g) << "\n";
    }
    emit(j, as_json, encode_graph6(g));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified low edge-congestion cycle bases"};
    app.require_subcommand(1);
    bool as_json = false;

    std::string graph_path, format, td_path, paths_path, pd_path, cert_path, out_path, kind;
    long long budget = 10000000;
    int arity = 0, u = 0, v = 0, n = 5, pw = 2, percent = 50;
    std::uint64_t seed = 1;

    auto* exact = app.add_subcommand("exact", "exact basis number of a small graph");
    exact->add_flag("--json", as_json);
    exact->add_option("graph", graph_path)->required();
    exact->add_option("--budget", budget);
    exact->add_option("--format", format);
    exact->add_option("--out", out_path);

    auto* lower = app.add_subcommand("lowerbound", "girth-based lower bound");
    lower->add_flag("--json", as_json);
    lower->add_option("graph", graph_path)->required();
    lower->add_option("--format", format);

    auto* verify = app.add_subcommand("verify", "check a certificate file");
    verify->add_flag("--json", as_json);
    verify->add_option("certificate", cert_path)->required();

    auto* construct = app.add_subcommand("construct", "build a certified generating family");
    construct->add_flag("--json", as_json);
    construct->add_option("--tree-paths", td_path,
                          "tree-decomposition JSON; takes the path-family file as an extra "
                          "positional or via --paths (default: BFS family)");
    construct->add_option("--paths", paths_path, "capturing path family JSON");
    construct->add_option("--path-decomp", pd_path, "path-decomposition JSON");
    std::vector<std::string> construct_files;
    construct->add_option("files", construct_files, "[paths.json] graph")->expected(1, 2);
    construct->add_option("--arity", arity);
    construct->add_option("--budget", budget);
    construct->add_option("--format", format);
    construct->add_option("--out", out_path);

    auto* thin = app.add_subcommand("thin-check", "validate a thinness witness file");
    thin->add_flag("--json", as_json);
    thin->add_option("witness", cert_path)->required();

    auto* grow = app.add_subcommand("grow-prefix", "grow a prefix with two clean flow paths");
    grow->add_flag("--json", as_json);
    grow->add_option("decomposition", td_path)->required();
    grow->add_option("graph", graph_path)->required();
    grow->add_option("--u", u)->required();
    grow->add_option("--v", v)->required();
    grow->add_option("--format", format);
    grow->add_option("--out", out_path);

    auto* fact = app.add_subcommand("factorise", "factorisation forest of a path decomposition");
    fact->add_flag("--json", as_json);
    fact->add_option("decomposition", pd_path)->required();
    fact->add_option("graph", graph_path)->required();
    fact->add_option("--arity", arity);
    fact->add_option("--format", format);

    auto* gen = app.add_subcommand("gen", "generate fixture graphs");
    gen->add_flag("--json", as_json);
    gen->add_option("kind", kind)->required();
    gen->add_option("--n", n);
    gen->add_option("--pw", pw);
    gen->add_option("--percent", percent);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (exact->parsed()) return cmd_exact(graph_path, format, budget, as_json, out_path);
        if (lower->parsed()) return cmd_lowerbound(graph_path, format, as_json);
        if (verify->parsed()) return cmd_verify(cert_path, as_json);
        if (construct->parsed()) {
            if (construct_files.size() == 2) {
                paths_path = construct_files[0];
                graph_path = construct_files[1];
            } else {
                graph_path = construct_files.at(0);
            }
            if (!td_path.empty())
                return cmd_construct_tree_paths(td_path, paths_path, graph_path, format, budget,
                                                as_json, out_path);
            if (!pd_path.empty())
                return cmd_construct_path_decomp(pd_path, graph_path, format, arity, budget,
                                                 as_json, out_path);
            throw Error("construct needs --tree-paths or --path-decomp");
        }
        if (thin->parsed()) return cmd_thin_check(cert_path, as_json);
        if (grow->parsed())
            return cmd_grow_prefix(td_path, graph_path, format, u, v, as_json, out_path);
        if (fact->parsed()) return cmd_factorise(pd_path, graph_path, format, arity, as_json);
        if (gen->parsed()) return cmd_gen(kind, n, pw, percent, seed, as_json, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
