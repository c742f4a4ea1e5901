#include "shs/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "shs/error.hpp"

namespace shs {

namespace {

// Number of edges among the neighbors of i, via sorted-list intersections.
// Each ego edge {a, b} is seen from both a and b, hence the halving.
std::int64_t ego_edge_count(const Graph& g, int i) {
    const auto& nbrs = g.neighbors(i);
    std::int64_t twice = 0;
    for (int j : nbrs) {
        const auto& nj = g.neighbors(j);
        auto a = nbrs.begin();
        auto b = nj.begin();
        while (a != nbrs.end() && b != nj.end()) {
            if (*a < *b) {
                ++a;
            } else if (*b < *a) {
                ++b;
            } else {
                ++twice;
                ++a;
                ++b;
            }
        }
    }
    return twice / 2;
}

}  // namespace

double effective_size(const Graph& g, int i) {
    const int d = g.degree(i);
    if (d == 0) {
        return 0.0;
    }
    return d - 2.0 * static_cast<double>(ego_edge_count(g, i)) / d;
}

double efficiency(const Graph& g, int i) {
    const int d = g.degree(i);
    if (d == 0) {
        return 0.0;
    }
    return effective_size(g, i) / d;
}

FeatureMatrix build_features(const Graph& g) {
    const int n = g.node_count();
    FeatureMatrix fm;
    fm.values = Matrix(n, kFeatureCount);
    for (int i = 0; i < n; ++i) {
        const int d = g.degree(i);
        double es = 0.0;
        if (d > 0) {
            es = d - 2.0 * static_cast<double>(ego_edge_count(g, i)) / d;
        }
        double* row = fm.values.row(i);
        row[0] = es;
        row[1] = d > 0 ? es / d : 0.0;
        row[2] = d;
    }
    for (int c = 0; c < kFeatureCount; ++c) {
        double lo = n > 0 ? fm.values(0, c) : 0.0;
        double hi = lo;
        for (int i = 1; i < n; ++i) {
            lo = std::min(lo, fm.values(i, c));
            hi = std::max(hi, fm.values(i, c));
        }
        fm.stats.min[c] = lo;
        fm.stats.max[c] = hi;
    }
    return fm;
}

FeatureMatrix normalize_with(const FeatureMatrix& fm, const FeatureStats& stats) {
    FeatureMatrix out;
    out.values = Matrix(fm.values.rows(), kFeatureCount);
    out.stats = stats;
    for (int c = 0; c < kFeatureCount; ++c) {
        const double lo = stats.min[c];
        const double range = stats.max[c] - lo;
        for (int i = 0; i < fm.values.rows(); ++i) {
            if (range <= 0.0) {
                out.values(i, c) = 0.0;  // constant column
            } else {
                out.values(i, c) = std::clamp((fm.values(i, c) - lo) / range, 0.0, 1.0);
            }
        }
    }
    return out;
}

FeatureMatrix normalize(const FeatureMatrix& fm) {
    return normalize_with(fm, fm.stats);
}

void write_features_csv(const FeatureMatrix& fm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << "node,effective_size,efficiency,degree\n";
    char buf[160];
    for (int i = 0; i < fm.values.rows(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", i, fm.values(i, 0),
                      fm.values(i, 1), fm.values(i, 2));
        out << buf;
    }
}

}  // namespace shs
