#pragma once

// Exact pairwise-connectivity math and the top-k spanner oracles. P(G) sums
// u(i,j) over ordered pairs i != j, so one component of size s contributes
// s*(s-1); the argmax node set is the same under the unordered convention.

#include <cstdint>
#include <string>
#include <vector>

#include "shs/graph.hpp"

namespace shs {

struct ConnectivityScore {
    int node = 0;
    std::int64_t score = 0;  // P(G) - P(G \ {node}), always >= 0
};

struct ShsResult {
    std::vector<int> spanners;               // selection order
    std::int64_t residual_connectivity = 0;  // P after all removals
};

// 1 iff i and j are in the same component; i == j is rejected.
int pairwise_connectivity(const Graph& g, int i, int j);

std::int64_t total_pairwise_connectivity(const ComponentLabeling& labeling);
std::int64_t total_pairwise_connectivity(const Graph& g);

ConnectivityScore connectivity_score(const Graph& g, int j);

// One score per node, ordered by node id. Nodes may be evaluated on several
// threads; the output does not depend on the thread count.
std::vector<ConnectivityScore> score_all_nodes(const Graph& g, int threads = 1);

// One-shot labeler: the k highest static scores, ties to the lower id.
ShsResult label_top_k(const Graph& g, int k, int threads = 1);

// Greedy heuristic: repeatedly remove the argmax-score node of the residual
// graph, k rounds, O(k n (m + n)).
ShsResult greedy_top_k(const Graph& g, int k, int threads = 1);

// Dense 0/1 label vector from a spanner set.
std::vector<int> labels_from_spanners(const std::vector<int>& spanners, int n);

// Labels file: one "<node-id> <0|1>" line per node.
void write_labels_file(const std::vector<int>& labels, const std::string& path);
std::vector<int> read_labels_file(const std::string& path);

}  // namespace shs
