#include "shs/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shs/error.hpp"
#include "shs/rng.hpp"

namespace shs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::pair<int, int> pick_random_edge(const Graph& g, Rng& rng) {
    const auto all = g.edges();
    return all[rng.next_below(all.size())];
}

}  // namespace

SnapshotSequence make_deletion_sequence(const Graph& g, int count, std::uint64_t seed) {
    if (count < 0 || count > g.edge_count()) {
        throw InvalidConfigError("deletion count " + std::to_string(count) +
                                 " exceeds edge count " + std::to_string(g.edge_count()));
    }
    SnapshotSequence seq;
    seq.base = g;
    Rng rng(seed);
    Graph current = g;
    for (int t = 0; t < count; ++t) {
        const auto [i, j] = pick_random_edge(current, rng);
        current.remove_edge(i, j);
        seq.steps.push_back({UpdateOp{false, i, j}});
        seq.snapshots.push_back(current);
    }
    return seq;
}

SnapshotSequence make_batch_update(const Graph& g, int deletions, int insertions,
                                   std::uint64_t seed) {
    const std::int64_t n = g.node_count();
    const std::int64_t non_edges = n * (n - 1) / 2 - g.edge_count();
    if (deletions < 0 || deletions > g.edge_count()) {
        throw InvalidConfigError("batch: cannot delete " + std::to_string(deletions) +
                                 " of " + std::to_string(g.edge_count()) + " edges");
    }
    if (insertions < 0 || insertions > non_edges) {
        throw InvalidConfigError("batch: cannot insert " + std::to_string(insertions) +
                                 " edges, only " + std::to_string(non_edges) + " pairs absent");
    }

    SnapshotSequence seq;
    seq.base = g;
    Rng rng(seed);
    std::vector<UpdateOp> ops;

    auto all = g.edges();
    shuffle_in_place(all, rng);
    for (int t = 0; t < deletions; ++t) {
        ops.push_back({false, all[t].first, all[t].second});
    }
    // Insertions target pairs absent from the base, so they never collide
    // with the deletions above.
    int added = 0;
    std::vector<std::pair<int, int>> chosen;
    while (added < insertions) {
        int i = rng.next_int(static_cast<int>(n));
        int j = rng.next_int(static_cast<int>(n));
        if (i == j) {
            continue;
        }
        if (i > j) {
            std::swap(i, j);
        }
        if (g.has_edge(i, j) ||
            std::find(chosen.begin(), chosen.end(), std::make_pair(i, j)) != chosen.end()) {
            continue;
        }
        chosen.emplace_back(i, j);
        ops.push_back({true, i, j});
        ++added;
    }

    Graph snapshot = g;
    for (const auto& op : ops) {
        if (op.insert) {
            snapshot.add_edge(op.i, op.j);
        } else {
            snapshot.remove_edge(op.i, op.j);
        }
    }
    seq.steps.push_back(std::move(ops));
    seq.snapshots.push_back(std::move(snapshot));
    return seq;
}

std::vector<Graph> replay(const SnapshotSequence& seq) {
    std::vector<Graph> out;
    Graph current = seq.base;
    for (const auto& step : seq.steps) {
        for (const auto& op : step) {
            if (op.insert) {
                current.add_edge(op.i, op.j);
            } else {
                current.remove_edge(op.i, op.j);
            }
        }
        out.push_back(current);
    }
    return out;
}

namespace {

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

SnapshotRecord evaluate_snapshot(const Graph& g_t, int snapshot_index, const ModelParams& model,
                                 int k) {
    SnapshotRecord rec;
    rec.snapshot = snapshot_index;

    // Warm run produces the outputs; three timed runs follow.
    ShsResult oracle = label_top_k(g_t, k);
    double oracle_times[3];
    for (double& slot : oracle_times) {
        const auto start = Clock::now();
        const ShsResult repeat = label_top_k(g_t, k);
        slot = seconds_since(start);
        if (repeat.spanners != oracle.spanners) {
            throw NumericError("oracle relabeling was not deterministic");
        }
    }
    rec.oracle_seconds = median3(oracle_times[0], oracle_times[1], oracle_times[2]);
    rec.oracle_spanners = oracle.spanners;

    Prediction pred;
    double feature_seconds = 0.0;
    ShsResult predicted = predict_with(g_t, model, k, &pred, &feature_seconds);
    double model_times[3];
    for (double& slot : model_times) {
        double feat = 0.0;
        const auto start = Clock::now();
        const ShsResult repeat = predict_with(g_t, model, k, nullptr, &feat);
        slot = seconds_since(start);
        feature_seconds = feat;
        if (repeat.spanners != predicted.spanners) {
            throw NumericError("model inference was not deterministic");
        }
    }
    rec.model_seconds = median3(model_times[0], model_times[1], model_times[2]);
    rec.feature_seconds = feature_seconds;
    rec.model_spanners = predicted.spanners;

    rec.speedup = rec.oracle_seconds / rec.model_seconds;

    const std::vector<int> truth = labels_from_spanners(oracle.spanners, g_t.node_count());
    const std::vector<int> guess = labels_from_spanners(predicted.spanners, g_t.node_count());
    int hits = 0;
    int true_positive = 0;
    for (int i = 0; i < g_t.node_count(); ++i) {
        if (truth[i] == guess[i]) {
            ++hits;
        }
        if (truth[i] == 1 && guess[i] == 1) {
            ++true_positive;
        }
    }
    rec.accuracy = static_cast<double>(hits) / static_cast<double>(g_t.node_count());
    // both label sets have exactly k positives, so precision = recall = F1
    rec.f1 = k > 0 ? static_cast<double>(true_positive) / static_cast<double>(k) : 1.0;
    return rec;
}

SpeedupAggregates speedup_stats(const std::vector<SnapshotRecord>& records) {
    if (records.empty()) {
        throw InvalidConfigError("speedup_stats: no records");
    }
    SpeedupAggregates agg;
    agg.min = records.front().speedup;
    agg.max = records.front().speedup;
    double log_sum = 0.0;
    for (const auto& rec : records) {
        agg.min = std::min(agg.min, rec.speedup);
        agg.max = std::max(agg.max, rec.speedup);
        log_sum += std::log(rec.speedup);
    }
    agg.geometric_mean = std::exp(log_sum / static_cast<double>(records.size()));
    return agg;
}

BenchReport run_bench(const SnapshotSequence& seq, const ModelParams& model, int k,
                      const BenchMeta& meta) {
    BenchReport report;
    report.meta = meta;
    for (std::size_t t = 0; t < seq.snapshots.size(); ++t) {
        report.records.push_back(
            evaluate_snapshot(seq.snapshots[t], static_cast<int>(t), model, k));
    }
    report.aggregates = speedup_stats(report.records);
    double acc = 0.0;
    double f1 = 0.0;
    for (const auto& rec : report.records) {
        acc += rec.accuracy;
        f1 += rec.f1;
    }
    report.mean_accuracy = acc / static_cast<double>(report.records.size());
    report.mean_f1 = f1 / static_cast<double>(report.records.size());
    return report;
}

void write_bench_json(const BenchReport& report, const std::string& path) {
    nlohmann::json j;
    j["dataset"] = report.meta.dataset;
    j["k"] = report.meta.k;
    j["seed"] = report.meta.seed;
    j["mode"] = report.meta.mode;
    j["connectivity_convention"] = report.connectivity_convention;
    auto records = nlohmann::json::array();
    for (const auto& rec : report.records) {
        records.push_back({{"snapshot", rec.snapshot},
                           {"oracle_s", rec.oracle_seconds},
                           {"model_s", rec.model_seconds},
                           {"feature_s", rec.feature_seconds},
                           {"speedup", rec.speedup},
                           {"accuracy", rec.accuracy},
                           {"f1", rec.f1},
                           {"oracle_spanners", rec.oracle_spanners},
                           {"model_spanners", rec.model_spanners}});
    }
    j["snapshots"] = std::move(records);
    j["speedup"] = {{"geometric_mean", report.aggregates.geometric_mean},
                    {"min", report.aggregates.min},
                    {"max", report.aggregates.max}};
    j["mean_accuracy"] = report.mean_accuracy;
    j["mean_f1"] = report.mean_f1;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << j.dump(2) << "\n";
}

void write_bench_csv(const BenchReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << "snapshot,oracle_s,model_s,feature_s,speedup,accuracy,f1\n";
    char buf[200];
    for (const auto& rec : report.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.9f,%.9f,%.9f,%.3f,%.6f,%.6f\n", rec.snapshot,
                      rec.oracle_seconds, rec.model_seconds, rec.feature_seconds, rec.speedup,
                      rec.accuracy, rec.f1);
        out << buf;
    }
}

void write_predictions_csv(const BenchReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << "snapshot,rank,node\n";
    for (const auto& rec : report.records) {
        for (std::size_t r = 0; r < rec.model_spanners.size(); ++r) {
            out << rec.snapshot << "," << r << "," << rec.model_spanners[r] << "\n";
        }
    }
}

std::string format_summary(const BenchReport& report) {
    std::ostringstream out;
    char buf[256];
    out << "dataset " << report.meta.dataset << ", k=" << report.meta.k << ", mode "
        << report.meta.mode << ", " << report.records.size() << " snapshot(s)\n";
    out << "convention: " << report.connectivity_convention << "\n";
    std::snprintf(buf, sizeof(buf), "%-18s %12s %12s %12s\n", "", "geo-mean", "min", "max");
    out << buf;
    std::snprintf(buf, sizeof(buf), "%-18s %12.1f %12.1f %12.1f\n", "speedup",
                  report.aggregates.geometric_mean, report.aggregates.min, report.aggregates.max);
    out << buf;
    std::snprintf(buf, sizeof(buf), "mean accuracy      %12.4f\n", report.mean_accuracy);
    out << buf;
    std::snprintf(buf, sizeof(buf), "mean SHS-class F1  %12.4f\n", report.mean_f1);
    out << buf;
    return out.str();
}

}  // namespace shs
