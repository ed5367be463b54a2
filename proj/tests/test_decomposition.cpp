#include <catch2/catch_amalgamated.hpp>

#include "bn/decomposition.hpp"
#include "bn/generators.hpp"

using namespace bn;

namespace {

TreeDecomposition td_of(const Graph& g, std::vector<std::pair<int, std::vector<int>>> nodes) {
    TreeDecomposition td;
    td.host_hash = g.hash();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        DecompNode nd;
        nd.id = static_cast<int>(i);
        nd.parent = nodes[i].first;
        nd.bag = nodes[i].second;
        std::sort(nd.bag.begin(), nd.bag.end());
        td.nodes.push_back(std::move(nd));
    }
    return td;
}

}  // namespace

TEST_CASE("validation catches each condition") {
    Graph k4 = gen_clique(4);
    TreeDecomposition one = td_of(k4, {{-1, {0, 1, 2, 3}}});
    REQUIRE(validate(k4, one).ok);

    // T1: vertex missing from all bags
    TreeDecomposition t1 = td_of(k4, {{-1, {0, 1, 2}}});
    Diagnostics d1 = validate(k4, t1);
    REQUIRE_FALSE(d1.ok);
    REQUIRE(d1.message.find("T1") != std::string::npos);
    REQUIRE(d1.message.find("3") != std::string::npos);

    // T2: edge in no bag
    Graph p3 = gen_path(3);
    TreeDecomposition t2 = td_of(p3, {{-1, {0, 1}}, {0, {2}}});
    Diagnostics d2 = validate(p3, t2);
    REQUIRE_FALSE(d2.ok);
    REQUIRE(d2.message.find("T2") != std::string::npos);

    // T3: split trace
    Graph p4 = gen_path(4);
    TreeDecomposition t3 =
        td_of(p4, {{-1, {0, 1}}, {0, {1, 2}}, {1, {2, 3}}, {2, {0, 3}}});
    Diagnostics d3 = validate(p4, t3);
    REQUIRE_FALSE(d3.ok);
    REQUIRE(d3.message.find("T3") != std::string::npos);
}

TEST_CASE("width and adhesion") {
    Graph k4 = gen_clique(4);
    auto [w1, a1] = width_and_adhesion(k4, td_of(k4, {{-1, {0, 1, 2, 3}}}));
    REQUIRE(w1 == 3);
    REQUIRE(a1 == 0);

    Graph p4 = gen_path(4);
    auto [w2, a2] =
        width_and_adhesion(p4, td_of(p4, {{-1, {0, 1}}, {0, {1, 2}}, {1, {2, 3}}}));
    REQUIRE(w2 == 1);
    REQUIRE(a2 == 1);
}

TEST_CASE("derived views on a small decomposition") {
    // path 0-1-2-3-4 decomposed into three bags
    Graph p5 = gen_path(5);
    TreeDecomposition td = td_of(p5, {{-1, {0, 1}}, {0, {1, 2, 3}}, {1, {3, 4}}});
    DecompositionViews views(p5, td);
    REQUIRE(views.adhesion(0).empty());
    REQUIRE(views.adhesion(1) == std::vector<int>{1});
    REQUIRE(views.adhesion(2) == std::vector<int>{3});
    REQUIRE(views.margin(1) == std::vector<int>{2, 3});
    REQUIRE(views.component(1) == std::vector<int>{2, 3, 4});
    REQUIRE(views.component(0) == std::vector<int>{0, 1, 2, 3, 4});

    auto [torso1, verts1] = views.torso(1);
    REQUIRE(verts1 == std::vector<int>{1, 2, 3});
    REQUIRE(torso1.num_edges() == 2);  // nothing cliquified beyond real edges

    auto [marg1, mverts1] = views.marginal_graph(1);
    REQUIRE(mverts1 == std::vector<int>{2, 3});
    REQUIRE(marg1.num_edges() == 1);
}

TEST_CASE("torso cliquifies adhesions of the node and its children") {
    // star with center 0, leaves 1..3; root bag {1,2,3}, child {0,1,2,3}
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    TreeDecomposition td = td_of(star, {{-1, {1, 2, 3}}, {0, {0, 1, 2, 3}}});
    DecompositionViews views(star, td);
    auto [torso0, verts0] = views.torso(0);
    (void)verts0;
    REQUIRE(torso0.num_edges() == 3);  // the cliquified child adhesion {1,2,3}
}

TEST_CASE("make_sane is idempotent and certifies the three conditions") {
    Rng rng(101);
    for (int it = 0; it < 60; ++it) {
        Graph g = gen_random_connected(rng.uniform(3, 12), rng.uniform(15, 60), rng);
        TreeDecomposition td = gen_elimination_td(g, rng);
        REQUIRE(validate(g, td).ok);
        TreeDecomposition sane = make_sane(g, td);
        REQUIRE(validate(g, sane).ok);
        REQUIRE(check_sane(g, sane).ok);

        // idempotence
        TreeDecomposition again = make_sane(g, sane);
        REQUIRE(again.size() == sane.size());
        for (int t = 0; t < sane.size(); ++t) REQUIRE(again.bag(t) == sane.bag(t));

        // every output bag inside some input bag; adhesions inside input adhesions
        DecompositionViews vin(g, td), vout(g, sane);
        for (int t = 0; t < sane.size(); ++t) {
            bool bag_ok = false;
            for (int s = 0; s < td.size(); ++s)
                if (std::includes(td.bag(s).begin(), td.bag(s).end(), sane.bag(t).begin(),
                                  sane.bag(t).end()))
                    bag_ok = true;
            REQUIRE(bag_ok);
            bool adh_ok = vout.adhesion(t).empty();
            for (int s = 0; s < td.size() && !adh_ok; ++s)
                if (std::includes(vin.adhesion(s).begin(), vin.adhesion(s).end(),
                                  vout.adhesion(t).begin(), vout.adhesion(t).end()))
                    adh_ok = true;
            REQUIRE(adh_ok);
        }
    }
}

TEST_CASE("make_sane removes duplicate bags and splits disconnected components") {
    Graph p4 = gen_path(4);
    // duplicate bag gives an empty margin
    TreeDecomposition dup =
        td_of(p4, {{-1, {0, 1}}, {0, {0, 1}}, {1, {1, 2}}, {2, {2, 3}}});
    TreeDecomposition sane = make_sane(p4, dup);
    REQUIRE(check_sane(p4, sane).ok);
    REQUIRE(sane.size() == 3);

    // node whose component splits: bag {0,3} under root {0,1,2,3}... build a
    // decomposition of two triangles joined at a vertex where one node holds
    // both wings
    Graph bowtie(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    TreeDecomposition wide = td_of(bowtie, {{-1, {2}}, {0, {0, 1, 2, 3, 4}}});
    TreeDecomposition sane2 = make_sane(bowtie, wide);
    REQUIRE(check_sane(bowtie, sane2).ok);
}

TEST_CASE("quotient preserves adhesions and components of kept nodes") {
    Rng rng(103);
    for (int it = 0; it < 40; ++it) {
        Graph g = gen_random_connected(rng.uniform(4, 12), rng.uniform(15, 60), rng);
        TreeDecomposition td = gen_elimination_td(g, rng);

        // identity quotient
        std::vector<int> all;
        for (int t = 0; t < td.size(); ++t) all.push_back(t);
        TreeDecomposition same = quotient(td, all);
        REQUIRE(same.size() == td.size());

        // root-only quotient collapses to one bag holding everything
        TreeDecomposition one = quotient(td, {td.root()});
        REQUIRE(one.size() == 1);
        REQUIRE(static_cast<int>(one.bag(0).size()) == g.num_vertices());

        // random subset containing the root
        std::vector<int> x{td.root()};
        for (int t = 0; t < td.size(); ++t)
            if (t != td.root() && rng.coin()) x.push_back(t);
        TreeDecomposition q = quotient(td, x);
        REQUIRE(validate(g, q).ok);
        auto [w_td, a_td] = width_and_adhesion(g, td);
        auto [w_q, a_q] = width_and_adhesion(g, q);
        (void)w_td;
        (void)w_q;
        REQUIRE(a_q <= a_td);

        // adhesion and component preservation for kept nodes
        DecompositionViews v_td(g, td), v_q(g, q);
        std::vector<int> sorted_x = x;
        std::sort(sorted_x.begin(), sorted_x.end());
        for (std::size_t i = 0; i < sorted_x.size(); ++i) {
            // node ids in the quotient follow the order of kept nodes
            int orig = sorted_x[i];
            int kept = static_cast<int>(i);
            // renumber_preorder may permute; locate by matching components
            (void)kept;
            (void)orig;
        }
        // locate kept nodes by bag containment of the original margin instead
        for (int orig : sorted_x) {
            bool found = false;
            for (int t = 0; t < q.size() && !found; ++t)
                if (v_q.component(t) == v_td.component(orig) &&
                    v_q.adhesion(t) == v_td.adhesion(orig))
                    found = true;
            REQUIRE(found);
        }
    }
    // root must be in the set
    Graph g = gen_path(3);
    TreeDecomposition td = td_of(g, {{-1, {0, 1}}, {0, {1, 2}}});
    REQUIRE_THROWS_AS(quotient(td, {1}), Error);
}

TEST_CASE("hypertorso of a prefix") {
    Graph p5 = gen_path(5);
    TreeDecomposition td = td_of(p5, {{-1, {0, 1}}, {0, {1, 2}}, {1, {2, 3}}, {2, {3, 4}}});

    // whole tree: just the graph edges
    Hypergraph whole = hypertorso_of_prefix(p5, td, {0, 1, 2, 3});
    REQUIRE(whole.edges.size() == 4);

    // root only: one adhesion hyperedge for its child
    Hypergraph root_only = hypertorso_of_prefix(p5, td, {0});
    REQUIRE(root_only.vertices == std::vector<int>{0, 1});
    int adh_edges = 0;
    for (const auto& tag : root_only.edge_tags)
        if (tag.rfind("adhesion:", 0) == 0) ++adh_edges;
    REQUIRE(adh_edges == 1);

    // two children with the same adhesion produce hyperedge multiplicity 2
    Graph star(3, {{0, 1}, {0, 2}});
    TreeDecomposition std_ = td_of(star, {{-1, {0}}, {0, {0, 1}}, {0, {0, 2}}});
    Hypergraph h = hypertorso_of_prefix(star, std_, {0});
    int count = 0;
    for (const auto& e : h.edges)
        if (e == std::vector<int>{0}) ++count;
    REQUIRE(count == 2);

    // non-prefix is rejected
    REQUIRE_THROWS_WITH(hypertorso_of_prefix(p5, td, {0, 2}),
                        Catch::Matchers::ContainsSubstring("prefix"));
}

TEST_CASE("path decomposition round trip through the tree form") {
    Graph p4 = gen_path(4);
    PathDecomposition pd;
    pd.host_hash = p4.hash();
    pd.bags = {{0, 1}, {1, 2}, {2, 3}};
    REQUIRE(validate(p4, pd).ok);
    TreeDecomposition td = pd.as_tree();
    REQUIRE(td.root() == 0);
    REQUIRE(td.parent(2) == 1);
}
