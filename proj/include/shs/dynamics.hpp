#pragma once

// Snapshot sequences over a fixed node set, and the per-snapshot benchmark:
// exact oracle relabeling vs. model inference, with speedup aggregates.

#include <cstdint>
#include <string>
#include <vector>

#include "shs/connectivity.hpp"
#include "shs/gnn.hpp"
#include "shs/graph.hpp"

namespace shs {

struct UpdateOp {
    bool insert = false;  // false = delete
    int i = 0;
    int j = 0;

    bool operator==(const UpdateOp&) const = default;
};

struct SnapshotSequence {
    Graph base;
    std::vector<std::vector<UpdateOp>> steps;  // ops between consecutive snapshots
    std::vector<Graph> snapshots;              // materialized G_t, one per step group
};

// `count` snapshots, each deleting one uniformly chosen existing edge from
// the previous snapshot.
SnapshotSequence make_deletion_sequence(const Graph& g, int count, std::uint64_t seed);

// One snapshot applying all deletions and insertions at once; deletions hit
// existing edges, insertions hit absent pairs.
SnapshotSequence make_batch_update(const Graph& g, int deletions, int insertions,
                                   std::uint64_t seed);

// Applies the recorded steps to the base; must reproduce `snapshots`.
std::vector<Graph> replay(const SnapshotSequence& seq);

struct SnapshotRecord {
    int snapshot = 0;
    double oracle_seconds = 0.0;
    double model_seconds = 0.0;    // includes feature extraction
    double feature_seconds = 0.0;  // the feature-extraction share, for transparency
    double speedup = 0.0;
    double accuracy = 0.0;         // fraction of nodes matching fresh oracle labels
    double f1 = 0.0;               // SHS-class F1; robust to the k/n imbalance
    std::vector<int> oracle_spanners;
    std::vector<int> model_spanners;
};

struct SpeedupAggregates {
    double geometric_mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct BenchMeta {
    std::string dataset;
    int k = 0;
    std::uint64_t seed = 0;
    std::string mode;  // "deletions" or "batch"
};

struct BenchReport {
    BenchMeta meta;
    std::vector<SnapshotRecord> records;
    SpeedupAggregates aggregates;
    double mean_accuracy = 0.0;
    double mean_f1 = 0.0;
    // Eq. 2 is evaluated over ordered pairs; the unordered convention differs
    // by a factor of 2 and selects the same nodes.
    std::string connectivity_convention = "ordered-pairs P = sum s*(s-1)";
};

// Times label_top_k (ground truth + baseline) and predict (model) on one
// snapshot: monotonic clock, one warmup, median of 3 repetitions.
SnapshotRecord evaluate_snapshot(const Graph& g_t, int snapshot_index, const ModelParams& model,
                                 int k);

SpeedupAggregates speedup_stats(const std::vector<SnapshotRecord>& records);

BenchReport run_bench(const SnapshotSequence& seq, const ModelParams& model, int k,
                      const BenchMeta& meta);

void write_bench_json(const BenchReport& report, const std::string& path);
// Flat CSV: snapshot,oracle_s,model_s,feature_s,speedup,accuracy
void write_bench_csv(const BenchReport& report, const std::string& path);
// Deterministic artifact (no timings): snapshot,rank,node
void write_predictions_csv(const BenchReport& report, const std::string& path);
// Summary table (geometric mean / min / max speedup, mean accuracy).
std::string format_summary(const BenchReport& report);

}  // namespace shs
