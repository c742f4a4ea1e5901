#include "shs/connectivity.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "shs/error.hpp"

namespace shs {

int pairwise_connectivity(const Graph& g, int i, int j) {
    if (i == j) {
        throw InvalidPairError("pairwise connectivity needs i != j, got (" + std::to_string(i) +
                               ", " + std::to_string(j) + ")");
    }
    const auto labeling = connected_components(g);
    return labeling.component_id.at(i) == labeling.component_id.at(j) ? 1 : 0;
}

std::int64_t total_pairwise_connectivity(const ComponentLabeling& labeling) {
    std::int64_t total = 0;
    for (int size : labeling.component_sizes) {
        total += static_cast<std::int64_t>(size) * (size - 1);
    }
    return total;
}

std::int64_t total_pairwise_connectivity(const Graph& g) {
    return total_pairwise_connectivity(connected_components(g));
}

ConnectivityScore connectivity_score(const Graph& g, int j) {
    if (j < 0 || j >= g.node_count()) {
        throw InvalidEdgeError("node id " + std::to_string(j) + " out of range");
    }
    const std::int64_t whole = total_pairwise_connectivity(g);
    const std::int64_t without = total_pairwise_connectivity(induced_subgraph_without(g, {j}));
    return {j, whole - without};
}

namespace {

// Scores every node in [0, n) against a fixed P(G); each worker writes its
// own slots, so the result is independent of the thread count.
std::vector<ConnectivityScore> score_nodes(const Graph& g, std::int64_t whole, int threads) {
    const int n = g.node_count();
    std::vector<ConnectivityScore> scores(n);
    auto score_range = [&](int begin, int end) {
        for (int j = begin; j < end; ++j) {
            const std::int64_t without =
                total_pairwise_connectivity(induced_subgraph_without(g, {j}));
            scores[j] = {j, whole - without};
        }
    };
    if (threads <= 1 || n < 2) {
        score_range(0, n);
        return scores;
    }
    const int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back(score_range, begin, end);
        }
    }
    for (auto& t : pool) {
        t.join();
    }
    return scores;
}

// Highest score first, ties to the lower node id.
bool score_before(const ConnectivityScore& a, const ConnectivityScore& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.node < b.node;
}

void check_k(int k, int n) {
    if (k < 1 || k > n) {
        throw InvalidKError("k must be in [1, " + std::to_string(n) + "], got " +
                            std::to_string(k));
    }
}

}  // namespace

std::vector<ConnectivityScore> score_all_nodes(const Graph& g, int threads) {
    return score_nodes(g, total_pairwise_connectivity(g), threads);
}

ShsResult label_top_k(const Graph& g, int k, int threads) {
    check_k(k, g.node_count());
    auto scores = score_all_nodes(g, threads);
    std::sort(scores.begin(), scores.end(), score_before);
    ShsResult result;
    result.spanners.reserve(k);
    for (int rank = 0; rank < k; ++rank) {
        result.spanners.push_back(scores[rank].node);
    }
    result.residual_connectivity =
        total_pairwise_connectivity(induced_subgraph_without(g, result.spanners));
    return result;
}

ShsResult greedy_top_k(const Graph& g, int k, int threads) {
    const int n = g.node_count();
    check_k(k, n);
    Graph residual = g;
    std::vector<char> taken(n, 0);
    ShsResult result;
    result.spanners.reserve(k);
    for (int round = 0; round < k; ++round) {
        const std::int64_t current = total_pairwise_connectivity(residual);
        const auto scores = score_nodes(residual, current, threads);
        int best = -1;
        for (int j = 0; j < n; ++j) {
            if (taken[j]) {
                continue;
            }
            if (best == -1 || score_before(scores[j], scores[best])) {
                best = j;
            }
        }
        taken[best] = 1;
        residual.isolate(best);
        result.spanners.push_back(best);
    }
    result.residual_connectivity = total_pairwise_connectivity(residual);
    return result;
}

std::vector<int> labels_from_spanners(const std::vector<int>& spanners, int n) {
    std::vector<int> labels(n, 0);
    for (int node : spanners) {
        labels.at(node) = 1;
    }
    return labels;
}

void write_labels_file(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i << " " << labels[i] << "\n";
    }
}

std::vector<int> read_labels_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        int node = 0;
        int label = 0;
        fields >> node >> label;
        if (fields.fail() || node != static_cast<int>(labels.size()) ||
            (label != 0 && label != 1)) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected '<node-id> <0|1>' with consecutive ids");
        }
        labels.push_back(label);
    }
    return labels;
}

}  // namespace shs
