#include <catch2/catch_amalgamated.hpp>

#include "bn/cycle_space.hpp"
#include "bn/generators.hpp"
#include "bn/oracle.hpp"

using namespace bn;

TEST_CASE("f2 cycle recognition") {
    Graph k3 = gen_clique(3);
    REQUIRE(is_f2_cycle(k3, EdgeVector::from_edges(k3, {0, 1, 2})));
    REQUIRE_FALSE(is_f2_cycle(k3, EdgeVector::from_edges(k3, {0})));
    // host mismatch is an error
    Graph k4 = gen_clique(4);
    REQUIRE_THROWS_AS(is_f2_cycle(k4, EdgeVector(k3)), Error);
}

TEST_CASE("f2 cycles are closed under xor") {
    Rng rng(17);
    Graph g = gen_clique(6);
    CycleFamily cycles = enumerate_simple_cycles(g);
    for (int it = 0; it < 100; ++it) {
        const auto& a = cycles.members[static_cast<std::size_t>(rng.below(cycles.members.size()))];
        const auto& b = cycles.members[static_cast<std::size_t>(rng.below(cycles.members.size()))];
        REQUIRE(is_f2_cycle(g, a ^ b));
    }
}

TEST_CASE("cycle space dimension") {
    REQUIRE(cycle_space_dimension(gen_clique(5)) == 6);
    REQUIRE(cycle_space_dimension(gen_path(7)) == 0);
    Graph two_triangles(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    REQUIRE(cycle_space_dimension(two_triangles) == 2);
}

TEST_CASE("rank over GF(2)") {
    Graph k4 = gen_clique(4);
    CycleFamily empty(k4);
    REQUIRE(rank(empty) == 0);

    EdgeVector tri = EdgeVector::from_edges(k4, {0, 1, 3});  // 01,02,12
    CycleFamily dup(k4);
    dup.add(tri);
    dup.add(tri);
    REQUIRE(rank(dup) == 1);

    CycleFamily all = enumerate_simple_cycles(k4);
    REQUIRE(all.size() == 7);
    REQUIRE(rank(all) == cycle_space_dimension(k4));
}

TEST_CASE("generation test and its error path") {
    Graph k4 = gen_clique(4);
    // edges of K4 sorted: 01=0,02=1,03=2,12=3,13=4,23=5
    CycleFamily faces(k4);
    faces.add(EdgeVector::from_edges(k4, {0, 1, 3}));  // 012
    faces.add(EdgeVector::from_edges(k4, {0, 2, 4}));  // 013
    faces.add(EdgeVector::from_edges(k4, {1, 2, 5}));  // 023
    REQUIRE(generates_cycle_space(k4, faces));

    CycleFamily two(k4);
    two.add(faces.members[0]);
    two.add(faces.members[1]);
    REQUIRE_FALSE(generates_cycle_space(k4, two));

    Graph tree = gen_path(4);
    CycleFamily none(tree);
    REQUIRE(generates_cycle_space(tree, none));

    CycleFamily bad(k4);
    bad.add(EdgeVector::from_edges(k4, {0}));
    REQUIRE_THROWS_WITH(generates_cycle_space(k4, bad),
                        Catch::Matchers::ContainsSubstring("member 0"));
}

TEST_CASE("congestion counts multiplicity") {
    Graph k4 = gen_clique(4);
    EdgeVector tri = EdgeVector::from_edges(k4, {0, 1, 3});
    CycleFamily one(k4);
    one.add(tri);
    REQUIRE(congestion(one) == 1);
    CycleFamily twice(k4);
    twice.add(tri);
    twice.add(tri);
    REQUIRE(congestion(twice) == 2);

    CycleFamily faces(k4);
    faces.add(EdgeVector::from_edges(k4, {0, 1, 3}));
    faces.add(EdgeVector::from_edges(k4, {0, 2, 4}));
    faces.add(EdgeVector::from_edges(k4, {1, 2, 5}));
    faces.add(EdgeVector::from_edges(k4, {3, 4, 5}));
    REQUIRE(congestion(faces) == 2);

    // reordering members never changes congestion
    CycleFamily reordered(k4);
    reordered.add(faces.members[2]);
    reordered.add(faces.members[0]);
    reordered.add(faces.members[3]);
    reordered.add(faces.members[1]);
    REQUIRE(congestion(reordered) == congestion(faces));
}

TEST_CASE("prune to basis keeps the first independent members") {
    Graph k4 = gen_clique(4);
    EdgeVector c1 = EdgeVector::from_edges(k4, {0, 1, 3});
    EdgeVector c2 = EdgeVector::from_edges(k4, {0, 2, 4});
    CycleFamily fam(k4);
    fam.add(c1);
    fam.add(c2);
    fam.add(c1 ^ c2);
    CycleFamily pruned = prune_to_basis(fam);
    REQUIRE(pruned.size() == 2);
    REQUIRE(pruned.members[0] == c1);
    REQUIRE(pruned.members[1] == c2);

    REQUIRE_THROWS_WITH(prune_to_basis(fam, 3), Catch::Matchers::ContainsSubstring("rank 2 < 3"));
}

TEST_CASE("prune to basis properties on random generating families") {
    Rng rng(23);
    for (int it = 0; it < 30; ++it) {
        Graph g = gen_random_connected(rng.uniform(5, 9), rng.uniform(20, 70), rng);
        CycleFamily cycles = enumerate_simple_cycles(g);
        if (rank(cycles) != cycle_space_dimension(g)) continue;
        CycleFamily pruned = prune_to_basis(cycles, cycle_space_dimension(g));
        REQUIRE(congestion(pruned) <= congestion(cycles));
        REQUIRE(rank(pruned) == cycle_space_dimension(g));
        // double elimination: pruned spans the same subspace
        Eliminator el;
        for (const auto& m : pruned.members) el.insert(m);
        for (const auto& m : cycles.members) REQUIRE(el.contains(m));
    }
}

TEST_CASE("girth lower bound formula") {
    REQUIRE(girth(gen_petersen()) == 5);
    REQUIRE(girth_lower_bound(gen_petersen()) == Rational(5, 3));
    REQUIRE(girth_lower_bound(gen_cycle(5)) == Rational(0, 1));
    REQUIRE(girth_lower_bound(gen_clique(4)) == Rational(1, 1));
    REQUIRE_THROWS_WITH(girth_lower_bound(gen_path(4)),
                        Catch::Matchers::ContainsSubstring("no cycle"));
}

TEST_CASE("girth lower bound never exceeds the exact basis number") {
    Rng rng(31);
    int checked = 0;
    for (int it = 0; it < 60 && checked < 40; ++it) {
        Graph g = gen_random(rng.uniform(4, 9), rng.uniform(20, 80), rng);
        if (cycle_space_dimension(g) == 0) continue;
        OracleResult res = exact_basis_number(g);
        REQUIRE_FALSE(res.timed_out);
        REQUIRE(girth_lower_bound(g) <= Rational(res.bn, 1));
        ++checked;
    }
    REQUIRE(checked >= 20);
}
