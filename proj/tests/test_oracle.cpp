#include <catch2/catch_amalgamated.hpp>

#include "bn/generators.hpp"
#include "bn/oracle.hpp"

using namespace bn;

TEST_CASE("simple cycle enumeration") {
    CycleFamily k4 = enumerate_simple_cycles(gen_clique(4));
    REQUIRE(k4.size() == 7);  // 4 triangles + 3 quadrilaterals
    // ordered by length first
    REQUIRE(k4.members[0].popcount() == 3);
    REQUIRE(k4.members[3].popcount() == 3);
    REQUIRE(k4.members[4].popcount() == 4);

    REQUIRE(enumerate_simple_cycles(gen_cycle(6)).size() == 1);
    REQUIRE(enumerate_simple_cycles(gen_path(5)).size() == 0);
    REQUIRE_THROWS_WITH(enumerate_simple_cycles(gen_clique(6), 5),
                        Catch::Matchers::ContainsSubstring("limit"));
}

TEST_CASE("enumeration agrees with a brute-force subset check") {
    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        Graph g = gen_random(rng.uniform(4, 7), rng.uniform(30, 90), rng);
        CycleFamily cycles = enumerate_simple_cycles(g);
        // brute force: every subset of edges that is a connected 2-regular graph
        int m = g.num_edges();
        int count = 0;
        for (int mask = 1; mask < (1 << m); ++mask) {
            std::vector<int> edges;
            for (int e = 0; e < m; ++e)
                if (mask & (1 << e)) edges.push_back(e);
            EdgeVector vec = EdgeVector::from_edges(g, edges);
            if (!is_f2_cycle(g, vec)) continue;
            // connected and all degrees exactly 2?
            std::vector<int> deg(static_cast<std::size_t>(g.num_vertices()), 0);
            for (int e : edges) {
                auto [a, b] = g.edge(e);
                ++deg[static_cast<std::size_t>(a)];
                ++deg[static_cast<std::size_t>(b)];
            }
            bool simple = true;
            for (int d : deg)
                if (d != 0 && d != 2) simple = false;
            if (!simple) continue;
            Subgraph sub = Subgraph::empty(g).plus_edges(edges);
            if (sub.num_components() != 1) continue;
            ++count;
        }
        REQUIRE(cycles.size() == count);
    }
}

TEST_CASE("exact basis numbers of the named fixtures") {
    OracleResult k5 = exact_basis_number(gen_clique(5));
    REQUIRE_FALSE(k5.timed_out);
    REQUIRE(k5.bn == 3);
    REQUIRE(verify_certificate(gen_clique(5), k5.witness).ok);

    OracleResult k4 = exact_basis_number(gen_clique(4));
    REQUIRE_FALSE(k4.timed_out);
    REQUIRE(k4.bn == 2);

    for (int n = 3; n <= 8; ++n) REQUIRE(exact_basis_number(gen_cycle(n)).bn == 1);
    REQUIRE(exact_basis_number(gen_path(6)).bn == 0);

    OracleResult k33 = exact_basis_number(gen_complete_bipartite(3, 3));
    REQUIRE_FALSE(k33.timed_out);
    REQUIRE(k33.bn >= 3);
}

TEST_CASE("oracle agrees with naive subset search on tiny graphs") {
    Rng rng(37);
    int checked = 0;
    for (int it = 0; it < 60 && checked < 25; ++it) {
        Graph g = gen_random(rng.uniform(4, 7), rng.uniform(25, 80), rng);
        int dim = cycle_space_dimension(g);
        CycleFamily cycles = enumerate_simple_cycles(g);
        if (cycles.size() > 20 || dim == 0) continue;
        ++checked;
        OracleResult res = exact_basis_number(g);
        REQUIRE_FALSE(res.timed_out);

        // naive: try all dim-subsets of the cycles
        int n = cycles.size();
        int best = 1 << 20;
        std::vector<int> idx(static_cast<std::size_t>(dim));
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == dim) {
                CycleFamily fam(g);
                for (int i = 0; i < dim; ++i)
                    fam.members.push_back(cycles.members[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
                if (rank(fam) == dim) best = std::min(best, congestion(fam));
                return;
            }
            for (int i = start; i < n; ++i) {
                idx[static_cast<std::size_t>(depth)] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        REQUIRE(res.bn == best);
    }
    REQUIRE(checked >= 10);
}

TEST_CASE("oracle certificate verification and tampering") {
    Graph k5 = gen_clique(5);
    OracleResult res = exact_basis_number(k5);
    REQUIRE(verify_certificate(k5, res.witness).ok);

    BasisCertificate tampered = res.witness;
    tampered.family.members.pop_back();
    tampered.rank = rank(tampered.family);
    tampered.measured_congestion = congestion(tampered.family);
    Diagnostics d = verify_certificate(k5, tampered);
    REQUIRE_FALSE(d.ok);
    REQUIRE(d.message.find("rank 5 < 6") != std::string::npos);

    Graph tree = gen_path(5);
    BasisCertificate empty = make_certificate(CycleFamily(tree), 0, 0);
    REQUIRE(verify_certificate(tree, empty).ok);
}

TEST_CASE("oracle respects the sanity envelope") {
    Rng rng(41);
    for (int it = 0; it < 25; ++it) {
        Graph g = gen_random(rng.uniform(4, 8), rng.uniform(30, 80), rng);
        OracleResult res = exact_basis_number(g);
        if (res.timed_out) continue;
        if (cycle_space_dimension(g) == 0) {
            REQUIRE(res.bn == 0);
            continue;
        }
        REQUIRE(girth_lower_bound(g) <= Rational(res.bn, 1));
        REQUIRE(res.bn <= g.num_edges());
        REQUIRE(verify_certificate(g, res.witness).ok);
    }
}

TEST_CASE("budget exhaustion reports an upper bound") {
    Graph g = gen_petersen();
    OracleResult tight = exact_basis_number(g, 10);
    REQUIRE(tight.timed_out);
    REQUIRE(tight.bn >= 1);
    REQUIRE(check_certificate(g, tight.witness).ok);

    OracleResult full = exact_basis_number(g);
    REQUIRE_FALSE(full.timed_out);
    REQUIRE(full.bn == 3);  // non-planar, so at least 3; a 3-basis exists
    REQUIRE(full.bn <= tight.bn);
}
