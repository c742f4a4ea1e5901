#pragma once

// Per-node input features from the one-hop ego network: effective size,
// efficiency, degree. Isolated nodes get the all-zero row.

#include <array>
#include <string>

#include "shs/graph.hpp"
#include "shs/matrix.hpp"

namespace shs {

inline constexpr int kFeatureCount = 3;

struct FeatureStats {
    std::array<double, kFeatureCount> min{};
    std::array<double, kFeatureCount> max{};

    bool operator==(const FeatureStats&) const = default;
};

struct FeatureMatrix {
    Matrix values;       // n x 3, raw: [effective_size, efficiency, degree]
    FeatureStats stats;  // column min/max captured when the matrix was built
};

// Burt's effective size in the unweighted closed form d - 2 t / d, where t is
// the number of edges among the neighbors; 0 for isolated nodes.
double effective_size(const Graph& g, int i);

// effective_size / degree; 0 for isolated nodes.
double efficiency(const Graph& g, int i);

FeatureMatrix build_features(const Graph& g);

// Min-max scaling per column into [0,1] with the matrix's own stats;
// constant columns map to 0.
FeatureMatrix normalize(const FeatureMatrix& fm);

// Same scaling with stats captured from the training graph; values outside
// the training range clamp to the boundary.
FeatureMatrix normalize_with(const FeatureMatrix& fm, const FeatureStats& stats);

// CSV dump: header "node,effective_size,efficiency,degree".
void write_features_csv(const FeatureMatrix& fm, const std::string& path);

}  // namespace shs
