#include "shs/datasets.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "shs/error.hpp"
#include "shs/rng.hpp"

namespace shs {

Graph generate_pa(int n, std::uint64_t seed) {
    if (n < 2) {
        throw InvalidConfigError("generate_pa: need n >= 2");
    }
    Graph g(n);
    g.add_edge(0, 1);
    // One entry per edge endpoint, so a uniform pick is degree-proportional.
    std::vector<int> endpoints = {0, 1};
    endpoints.reserve(2 * static_cast<std::size_t>(n));
    Rng rng(seed);
    for (int v = 2; v < n; ++v) {
        const int target = endpoints[rng.next_below(endpoints.size())];
        g.add_edge(v, target);
        endpoints.push_back(v);
        endpoints.push_back(target);
    }
    return g;
}

Graph generate_er(int n, double p, std::uint64_t seed) {
    if (n < 1) {
        throw InvalidConfigError("generate_er: need n >= 1");
    }
    if (p < 0.0 || p > 1.0) {
        throw InvalidConfigError("generate_er: p must be in [0, 1]");
    }
    Graph g(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.next_real() < p) {
                g.add_edge(i, j);
            }
        }
    }
    return g;
}

Graph load_edge_list(const std::string& path) {
    return read_edge_list(path);
}

Graph realize(const DatasetSpec& spec) {
    switch (spec.kind) {
        case DatasetKind::pa:
            return generate_pa(spec.n, spec.seed);
        case DatasetKind::er:
            return generate_er(spec.n, spec.p, spec.seed);
        case DatasetKind::file:
            return load_edge_list(spec.path);
    }
    throw InvalidConfigError("realize: unknown dataset kind");
}

std::string dataset_name(const DatasetSpec& spec) {
    char buf[96];
    switch (spec.kind) {
        case DatasetKind::pa:
            std::snprintf(buf, sizeof(buf), "pa-%d", spec.n);
            return buf;
        case DatasetKind::er:
            std::snprintf(buf, sizeof(buf), "er-%d-%g", spec.n, spec.p);
            return buf;
        case DatasetKind::file: {
            const auto slash = spec.path.find_last_of('/');
            return slash == std::string::npos ? spec.path : spec.path.substr(slash + 1);
        }
    }
    return "unknown";
}

std::uint64_t fnv1a64(const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::uint64_t h = 14695981039346656037ULL;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

void write_dataset_manifest(const DatasetSpec& spec, const Graph& g,
                            const std::string& graph_path, const std::string& manifest_path) {
    nlohmann::json j;
    j["name"] = dataset_name(spec);
    switch (spec.kind) {
        case DatasetKind::pa:
            j["kind"] = "pa";
            j["params"] = {{"n", spec.n}};
            break;
        case DatasetKind::er:
            j["kind"] = "er";
            j["params"] = {{"n", spec.n}, {"p", spec.p}};
            break;
        case DatasetKind::file:
            j["kind"] = "file";
            j["params"] = {{"path", spec.path}};
            break;
    }
    j["seed"] = spec.seed;
    j["nodes"] = g.node_count();
    j["edges"] = g.edge_count();
    char checksum[32];
    std::snprintf(checksum, sizeof(checksum), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(graph_path)));
    j["checksum_fnv1a64"] = checksum;
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + manifest_path);
    }
    out << j.dump(2) << "\n";
}

}  // namespace shs
