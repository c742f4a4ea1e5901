#pragma once

// Undirected simple graph over a fixed node set 0..n-1. Only edges mutate;
// adjacency lists are kept sorted so iteration order (and every downstream
// tie-break) is deterministic. Read-only operations are pure and safe to run
// concurrently on a shared graph.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace shs {

struct ComponentLabeling {
    std::vector<int> component_id;     // one entry per node
    std::vector<int> component_sizes;  // indexed by component id; sums to n
};

class Graph {
public:
    Graph() = default;
    explicit Graph(int node_count) : adjacency_(node_count) {}

    int node_count() const { return static_cast<int>(adjacency_.size()); }
    std::int64_t edge_count() const { return edge_count_; }

    const std::vector<int>& neighbors(int i) const;
    int degree(int i) const;
    bool has_edge(int i, int j) const;

    // Both return false (flagged no-op) when the edge was already
    // present / already absent.
    bool add_edge(int i, int j);
    bool remove_edge(int i, int j);

    // Drops every edge incident to i; the node id stays valid.
    void isolate(int i);

    // All edges as (i, j) with i < j, in lexicographic order.
    std::vector<std::pair<int, int>> edges() const;

    bool operator==(const Graph& other) const = default;

private:
    void check_node(int i) const;

    std::vector<std::vector<int>> adjacency_;
    std::int64_t edge_count_ = 0;
};

// Component labeling by traversal, O(n + m).
ComponentLabeling connected_components(const Graph& g);

// Copy of g with the given nodes isolated (ids preserved, not re-indexed).
Graph induced_subgraph_without(const Graph& g, const std::vector<int>& removed);

// Edge-list text format: '#' comment lines, a "n <count>" header fixing the
// node count, then one "i j" pair per line. UTF-8, LF.
Graph parse_edge_list(std::istream& in, const std::string& name);
Graph read_edge_list(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace shs
