#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shs/datasets.hpp"
#include "shs/error.hpp"
#include "test_util.hpp"

using namespace shs;

#ifndef SHS_DATA_DIR
#define SHS_DATA_DIR "data"
#endif

TEST_CASE("generate_pa yields a connected tree with m = n - 1") {
    for (int n : {2, 50, 500, 1500}) {
        const Graph g = generate_pa(n, 7);
        CHECK(g.edge_count() == n - 1);
        CHECK(connected_components(g).component_sizes == std::vector<int>{n});
    }
    CHECK(generate_pa(2, 1).has_edge(0, 1));
    CHECK_THROWS_AS(generate_pa(1, 0), InvalidConfigError);
}

TEST_CASE("generate_er degenerate probabilities") {
    CHECK(generate_er(30, 0.0, 5).edge_count() == 0);
    CHECK(generate_er(12, 1.0, 5).edge_count() == 12 * 11 / 2);
    CHECK_THROWS_AS(generate_er(10, 1.5, 0), InvalidConfigError);
}

TEST_CASE("generate_er edge count stays within 3 sigma of the binomial mean") {
    // ER(250, 0.5): mean 15562.5, sigma ~ 88.2
    const double mean = 0.5 * 250 * 249 / 2;
    const double sigma = std::sqrt(250 * 249 / 2 * 0.25);
    for (std::uint64_t seed : {1ULL, 17ULL, 992ULL}) {
        const auto m = static_cast<double>(generate_er(250, 0.5, seed).edge_count());
        CHECK(std::abs(m - mean) <= 3.0 * sigma);
    }
}

TEST_CASE("generate_er empirical mean over 200 seeds is unbiased") {
    const int n = 120;
    const double p = 0.05;
    const double expected = p * n * (n - 1) / 2;
    const double sigma_one = std::sqrt(n * (n - 1) / 2 * p * (1 - p));
    double sum = 0.0;
    const int runs = 200;
    for (int s = 0; s < runs; ++s) {
        sum += static_cast<double>(generate_er(n, p, 5000 + s).edge_count());
    }
    const double mean = sum / runs;
    const double standard_error = sigma_one / std::sqrt(static_cast<double>(runs));
    CHECK(std::abs(mean - expected) <= 3.0 * standard_error);
}

TEST_CASE("same seed gives byte-identical serialized graphs") {
    for (int variant = 0; variant < 2; ++variant) {
        const Graph a = variant == 0 ? generate_pa(200, 99) : generate_er(80, 0.1, 99);
        const Graph b = variant == 0 ? generate_pa(200, 99) : generate_er(80, 0.1, 99);
        std::ostringstream sa;
        std::ostringstream sb;
        write_edge_list(a, sa);
        write_edge_list(b, sb);
        CHECK(sa.str() == sb.str());
        const Graph c = variant == 0 ? generate_pa(200, 100) : generate_er(80, 0.1, 100);
        std::ostringstream sc;
        write_edge_list(c, sc);
        CHECK(sa.str() != sc.str());
    }
}

TEST_CASE("vendored stand-in datasets match the declared counts") {
    const Graph dolphins = load_edge_list(std::string(SHS_DATA_DIR) + "/dolphins-standin.edges");
    CHECK(dolphins.node_count() == 62);
    CHECK(dolphins.edge_count() == 159);

    const Graph football = load_edge_list(std::string(SHS_DATA_DIR) + "/football-standin.edges");
    CHECK(football.node_count() == 115);
    CHECK(football.edge_count() == 613);
}

TEST_CASE("realize dispatches on the dataset kind") {
    DatasetSpec pa{DatasetKind::pa, 40, 0.0, 3, ""};
    CHECK(realize(pa).edge_count() == 39);
    CHECK(dataset_name(pa) == "pa-40");

    DatasetSpec er{DatasetKind::er, 30, 0.2, 3, ""};
    CHECK(realize(er).node_count() == 30);
    CHECK(dataset_name(er) == "er-30-0.2");

    DatasetSpec file{DatasetKind::file, 0, 0.0, 0,
                     std::string(SHS_DATA_DIR) + "/dolphins-standin.edges"};
    CHECK(realize(file).node_count() == 62);
    CHECK(dataset_name(file) == "dolphins-standin.edges");
}

TEST_CASE("fnv1a64 matches the reference vector") {
    // FNV-1a 64 of "a" is af63dc4c8601ec8c
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
}
