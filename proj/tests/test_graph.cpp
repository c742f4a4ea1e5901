#include <doctest.h>

#include <numeric>
#include <sstream>

#include "shs/datasets.hpp"
#include "shs/error.hpp"
#include "shs/graph.hpp"
#include "shs/rng.hpp"
#include "test_util.hpp"

using namespace shs;

TEST_CASE("add_edge inserts, is idempotent, and rejects bad input") {
    Graph g(3);
    CHECK(g.add_edge(0, 1));
    CHECK(g.edge_count() == 1);
    CHECK(g.neighbors(0) == std::vector<int>{1});

    CHECK_FALSE(g.add_edge(0, 1));  // flagged no-op
    CHECK_FALSE(g.add_edge(1, 0));
    CHECK(g.edge_count() == 1);

    CHECK_THROWS_AS(g.add_edge(0, 0), InvalidEdgeError);
    CHECK_THROWS_AS(g.add_edge(0, 3), InvalidEdgeError);
    CHECK_THROWS_AS(g.add_edge(-1, 2), InvalidEdgeError);
}

TEST_CASE("remove_edge deletes, flags absent edges, and rejects bad ids") {
    Graph g = test::triangle();
    CHECK(g.remove_edge(0, 1));
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(0, 2));

    Graph p = test::path_graph(3);
    CHECK_FALSE(p.remove_edge(0, 2));  // not present
    CHECK(p.edge_count() == 2);

    CHECK_THROWS_AS(p.remove_edge(5, 0), InvalidEdgeError);
}

TEST_CASE("adjacency stays sorted and symmetric") {
    Graph g(6);
    g.add_edge(3, 1);
    g.add_edge(3, 5);
    g.add_edge(3, 0);
    CHECK(g.neighbors(3) == std::vector<int>{0, 1, 5});
    for (int j : g.neighbors(3)) {
        CHECK(g.has_edge(j, 3));
    }
    std::int64_t degree_sum = 0;
    for (int i = 0; i < g.node_count(); ++i) {
        degree_sum += g.degree(i);
    }
    CHECK(degree_sum == 2 * g.edge_count());
}

TEST_CASE("connected_components on hand graphs") {
    const auto one = connected_components(test::triangle());
    CHECK(one.component_sizes == std::vector<int>{3});

    Graph g(5);
    g.add_edge(0, 1);
    g.add_edge(2, 3);
    const auto three = connected_components(g);
    CHECK(three.component_sizes.size() == 3);
    const int total = std::accumulate(three.component_sizes.begin(),
                                      three.component_sizes.end(), 0);
    CHECK(total == 5);
    CHECK(three.component_id[0] == three.component_id[1]);
    CHECK(three.component_id[2] == three.component_id[3]);
    CHECK(three.component_id[0] != three.component_id[2]);
    CHECK(three.component_id[4] != three.component_id[0]);
    CHECK(three.component_id[4] != three.component_id[2]);
}

TEST_CASE("connected_components agrees with all-pairs BFS on random graphs") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 8 + static_cast<int>(seed % 57);
        const double p = (seed % 5) * 0.07;
        const Graph g = generate_er(n, p, seed * 31 + 1);
        const auto labeling = connected_components(g);
        const auto reach = test::reachability_matrix(g);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CHECK((labeling.component_id[i] == labeling.component_id[j]) ==
                      static_cast<bool>(reach[i][j]));
            }
        }
        const int total = std::accumulate(labeling.component_sizes.begin(),
                                          labeling.component_sizes.end(), 0);
        CHECK(total == n);
        CHECK(labeling.component_sizes.size() ==
              static_cast<std::size_t>(1 + *std::max_element(labeling.component_id.begin(),
                                                             labeling.component_id.end())));
    }
}

TEST_CASE("add then remove restores the exact edge set") {
    Rng rng(99);
    Graph g = generate_er(24, 0.2, 5);
    const auto before = g.edges();
    for (int trial = 0; trial < 200; ++trial) {
        const int i = rng.next_int(24);
        const int j = rng.next_int(24);
        if (i == j) {
            continue;
        }
        if (g.has_edge(i, j)) {
            CHECK(g.remove_edge(i, j));
            CHECK(g.add_edge(i, j));
        } else {
            CHECK(g.add_edge(i, j));
            CHECK(g.remove_edge(i, j));
        }
        CHECK(g.edges() == before);
    }
}

TEST_CASE("induced_subgraph_without isolates but keeps ids") {
    const Graph path = test::path_graph(3);
    const Graph cut = induced_subgraph_without(path, {1});
    CHECK(cut.node_count() == 3);
    CHECK(cut.edge_count() == 0);
    CHECK(path.edge_count() == 2);  // original untouched

    const Graph same = induced_subgraph_without(test::triangle(), {});
    CHECK(same == test::triangle());

    const Graph k4 = test::complete_graph(4);
    const Graph pair = induced_subgraph_without(k4, {0, 1});
    CHECK(pair.edge_count() == 1);
    CHECK(pair.has_edge(2, 3));
}

TEST_CASE("edge-list round trip and parse errors") {
    const Graph g = generate_er(17, 0.25, 42);
    std::ostringstream out;
    write_edge_list(g, out);
    std::istringstream in(out.str());
    const Graph back = parse_edge_list(in, "roundtrip");
    CHECK(back == g);

    SUBCASE("comments and duplicate lines") {
        std::istringstream text("# comment\nn 4\n0 1\n1 0\n2 3\n");
        const Graph parsed = parse_edge_list(text, "dup");
        CHECK(parsed.edge_count() == 2);
    }
    SUBCASE("malformed tokens") {
        std::istringstream text("n 3\na b\n");
        CHECK_THROWS_WITH_AS(parse_edge_list(text, "bad"),
                             doctest::Contains("bad:2"), ParseError);
    }
    SUBCASE("missing header") {
        std::istringstream text("0 1\n");
        CHECK_THROWS_AS(parse_edge_list(text, "nohdr"), ParseError);
    }
    SUBCASE("out of range id") {
        std::istringstream text("n 3\n0 7\n");
        CHECK_THROWS_AS(parse_edge_list(text, "range"), ParseError);
    }
}
