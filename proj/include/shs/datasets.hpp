#pragma once

// Seeded synthetic generators (preferential attachment, Erdos-Renyi) and
// edge-list loaders. Same spec + seed always yields the same graph,
// byte-for-byte after serialization.

#include <cstdint>
#include <string>

#include "shs/graph.hpp"

namespace shs {

enum class DatasetKind { pa, er, file };

struct DatasetSpec {
    DatasetKind kind = DatasetKind::pa;
    int n = 0;
    double p = 0.0;        // er only
    std::uint64_t seed = 0;
    std::string path;      // file only
};

// Preferential attachment, one edge per arriving node: the new node picks an
// existing endpoint with probability proportional to its degree. Exactly
// n - 1 edges, connected.
Graph generate_pa(int n, std::uint64_t seed);

// Every unordered pair included independently with probability p.
Graph generate_er(int n, double p, std::uint64_t seed);

Graph load_edge_list(const std::string& path);

Graph realize(const DatasetSpec& spec);
std::string dataset_name(const DatasetSpec& spec);

// FNV-1a 64 over raw bytes; used by the manifests.
std::uint64_t fnv1a64(const void* bytes, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

// JSON manifest next to a generated/served graph: name, parameters, seed,
// realized n/m, checksum of the edge-list file.
void write_dataset_manifest(const DatasetSpec& spec, const Graph& g,
                            const std::string& graph_path, const std::string& manifest_path);

}  // namespace shs
