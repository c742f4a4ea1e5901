#include "shs/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "shs/error.hpp"

namespace shs {

void Graph::check_node(int i) const {
    if (i < 0 || i >= node_count()) {
        throw InvalidEdgeError("node id " + std::to_string(i) + " out of range [0, " +
                               std::to_string(node_count()) + ")");
    }
}

const std::vector<int>& Graph::neighbors(int i) const {
    check_node(i);
    return adjacency_[i];
}

int Graph::degree(int i) const {
    check_node(i);
    return static_cast<int>(adjacency_[i].size());
}

bool Graph::has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    const auto& adj = adjacency_[i];
    return std::binary_search(adj.begin(), adj.end(), j);
}

bool Graph::add_edge(int i, int j) {
    check_node(i);
    check_node(j);
    if (i == j) {
        throw InvalidEdgeError("self-loop (" + std::to_string(i) + ", " + std::to_string(i) +
                               ") not allowed");
    }
    auto& ai = adjacency_[i];
    auto pos = std::lower_bound(ai.begin(), ai.end(), j);
    if (pos != ai.end() && *pos == j) {
        return false;
    }
    ai.insert(pos, j);
    auto& aj = adjacency_[j];
    aj.insert(std::lower_bound(aj.begin(), aj.end(), i), i);
    ++edge_count_;
    return true;
}

bool Graph::remove_edge(int i, int j) {
    check_node(i);
    check_node(j);
    auto& ai = adjacency_[i];
    auto pos = std::lower_bound(ai.begin(), ai.end(), j);
    if (pos == ai.end() || *pos != j) {
        return false;
    }
    ai.erase(pos);
    auto& aj = adjacency_[j];
    aj.erase(std::lower_bound(aj.begin(), aj.end(), i));
    --edge_count_;
    return true;
}

void Graph::isolate(int i) {
    check_node(i);
    for (int j : adjacency_[i]) {
        auto& aj = adjacency_[j];
        aj.erase(std::lower_bound(aj.begin(), aj.end(), i));
    }
    edge_count_ -= static_cast<std::int64_t>(adjacency_[i].size());
    adjacency_[i].clear();
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int i = 0; i < node_count(); ++i) {
        for (int j : adjacency_[i]) {
            if (i < j) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

ComponentLabeling connected_components(const Graph& g) {
    const int n = g.node_count();
    ComponentLabeling labeling;
    labeling.component_id.assign(n, -1);

    std::vector<int> queue;
    queue.reserve(n);
    for (int start = 0; start < n; ++start) {
        if (labeling.component_id[start] != -1) {
            continue;
        }
        const int id = static_cast<int>(labeling.component_sizes.size());
        int size = 0;
        queue.clear();
        queue.push_back(start);
        labeling.component_id[start] = id;
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            ++size;
            for (int v : g.neighbors(u)) {
                if (labeling.component_id[v] == -1) {
                    labeling.component_id[v] = id;
                    queue.push_back(v);
                }
            }
        }
        labeling.component_sizes.push_back(size);
    }
    return labeling;
}

Graph induced_subgraph_without(const Graph& g, const std::vector<int>& removed) {
    Graph sub = g;
    for (int node : removed) {
        sub.isolate(node);
    }
    return sub;
}

Graph parse_edge_list(std::istream& in, const std::string& name) {
    std::string line;
    int line_no = 0;
    int n = -1;
    Graph g;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        if (n < 0) {
            std::string tag;
            fields >> tag >> n;
            if (tag != "n" || fields.fail() || n < 0) {
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": expected header 'n <count>'");
            }
            g = Graph(n);
            continue;
        }
        int i = 0;
        int j = 0;
        fields >> i >> j;
        if (fields.fail()) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected two node ids");
        }
        if (i < 0 || i >= n || j < 0 || j >= n) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": node id out of range (n=" +
                             std::to_string(n) + ")");
        }
        if (i == j) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": self-loop not allowed");
        }
        g.add_edge(i, j);  // duplicate lines collapse
    }
    if (n < 0) {
        throw ParseError(name + ": missing 'n <count>' header");
    }
    return g;
}

Graph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return parse_edge_list(in, path);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "n " << g.node_count() << "\n";
    for (const auto& [i, j] : g.edges()) {
        out << i << " " << j << "\n";
    }
}

void write_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    write_edge_list(g, out);
}

}  // namespace shs
