// Command-line front end: graph generation, ground-truth labeling, model
// training, snapshot benchmarking, and a run-experiment driver that chains
// the whole pipeline from one config file with a single root seed.
//
// Exit codes: 0 success, 1 usage, 2 data/parse, 3 numeric.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shs/connectivity.hpp"
#include "shs/datasets.hpp"
#include "shs/dynamics.hpp"
#include "shs/error.hpp"
#include "shs/features.hpp"
#include "shs/gnn.hpp"
#include "shs/graph.hpp"
#include "shs/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("SHS_LOG");
        return env != nullptr ? std::atoi(env) : 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) {
        std::cerr << msg << "\n";
    }
}

std::string checksum_hex(const std::string& path) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(shs::fnv1a64_file(path)));
    return buf;
}

// ------------------------------------------------------------------ generate

struct GenerateArgs {
    std::string kind;
    int n = 0;
    double p = -1.0;
    std::uint64_t seed = 7;
    std::string out;
};

shs::DatasetSpec spec_from(const GenerateArgs& args) {
    shs::DatasetSpec spec;
    spec.n = args.n;
    spec.seed = args.seed;
    if (args.kind == "pa") {
        spec.kind = shs::DatasetKind::pa;
    } else if (args.kind == "er") {
        spec.kind = shs::DatasetKind::er;
        if (args.p < 0.0) {
            throw CLI::ValidationError("--p is required for --kind er");
        }
        spec.p = args.p;
    } else {
        throw CLI::ValidationError("--kind must be pa or er");
    }
    return spec;
}

int cmd_generate(const GenerateArgs& args) {
    const shs::DatasetSpec spec = spec_from(args);
    const shs::Graph g = shs::realize(spec);
    shs::write_edge_list_file(g, args.out);
    shs::write_dataset_manifest(spec, g, args.out, args.out + ".manifest.json");
    log_info("wrote " + args.out + " (n=" + std::to_string(g.node_count()) +
             ", m=" + std::to_string(g.edge_count()) + ")");
    return 0;
}

// --------------------------------------------------------------------- label

struct LabelArgs {
    std::string graph;
    int k = 0;
    std::string out;
    std::string method = "oneshot";
    int threads = 1;
};

int cmd_label(const LabelArgs& args) {
    const shs::Graph g = shs::load_edge_list(args.graph);
    const shs::ShsResult result = args.method == "greedy"
                                      ? shs::greedy_top_k(g, args.k, args.threads)
                                      : shs::label_top_k(g, args.k, args.threads);
    const auto labels = shs::labels_from_spanners(result.spanners, g.node_count());
    shs::write_labels_file(labels, args.out);
    log_info("labeled " + std::to_string(args.k) + " spanners of " +
             std::to_string(g.node_count()) + " nodes; residual P = " +
             std::to_string(result.residual_connectivity));
    return 0;
}

// ------------------------------------------------------------------ features

int cmd_features(const std::string& graph_path, const std::string& out) {
    const shs::Graph g = shs::load_edge_list(graph_path);
    shs::write_features_csv(shs::build_features(g), out);
    log_info("wrote " + out);
    return 0;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
    std::string graph;
    std::string labels;
    std::string out;
    std::string log;
    shs::TrainConfig cfg;
};

int cmd_train(const TrainArgs& args) {
    const shs::Graph g = shs::load_edge_list(args.graph);
    const auto labels = shs::read_labels_file(args.labels);
    if (static_cast<int>(labels.size()) != g.node_count()) {
        throw shs::ParseError("labels file covers " + std::to_string(labels.size()) +
                              " nodes, graph has " + std::to_string(g.node_count()));
    }
    const auto [model, log] = shs::train(g, shs::build_features(g), labels, args.cfg);
    shs::save_model(model, args.out);
    if (!args.log.empty()) {
        shs::write_train_log_csv(log, args.log);
    }
    log_info("trained " + std::to_string(args.cfg.epochs) + " epochs; best epoch " +
             std::to_string(model.meta.best_epoch) + " (val accuracy " +
             std::to_string(model.meta.best_val_accuracy) + ")");
    return 0;
}

// --------------------------------------------------------------------- bench

struct BenchArgs {
    std::string graph;
    std::string model;
    int k = 50;
    std::string mode = "deletions";
    int deletions = 50;
    int insertions = 0;
    std::uint64_t seed = 7;
    std::string out_prefix;
};

shs::SnapshotSequence sequence_for(const shs::Graph& g, const BenchArgs& args) {
    if (args.mode == "deletions") {
        return shs::make_deletion_sequence(g, args.deletions, args.seed);
    }
    if (args.mode == "batch") {
        return shs::make_batch_update(g, args.deletions, args.insertions, args.seed);
    }
    throw CLI::ValidationError("--mode must be deletions or batch");
}

int cmd_bench(const BenchArgs& args) {
    const shs::Graph g = shs::load_edge_list(args.graph);
    const shs::ModelParams model = shs::load_model(args.model);
    const shs::SnapshotSequence seq = sequence_for(g, args);
    shs::BenchMeta meta{fs::path(args.graph).filename().string(), args.k, args.seed, args.mode};
    const shs::BenchReport report = shs::run_bench(seq, model, args.k, meta);
    shs::write_bench_json(report, args.out_prefix + ".json");
    shs::write_bench_csv(report, args.out_prefix + ".csv");
    shs::write_predictions_csv(report, args.out_prefix + ".predictions.csv");
    std::cout << shs::format_summary(report);
    return 0;
}

// ------------------------------------------------------------ run-experiment

// Config file: one "key = value" per line, '#' comments. Keys: kind, n, p,
// path, k, seed, epochs, lr, weight_decay, method, mode, deletions,
// insertions, outdir.
std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw shs::IoError("cannot open config " + path);
    }
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) {
                return std::string();
            }
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw shs::ParseError(path + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw shs::ParseError(path + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
        }
        out[key] = value;
    }
    return out;
}

struct ExperimentArgs {
    std::string config_path;
    // optional command-line overrides
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outdir;
    std::optional<int> k;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<double> weight_decay;
};

int cmd_run_experiment(const ExperimentArgs& args) {
    auto cfg = parse_config(args.config_path);
    const auto get = [&cfg](const std::string& key, const std::string& fallback) {
        const auto it = cfg.find(key);
        return it == cfg.end() ? fallback : it->second;
    };
    const auto require = [&cfg](const std::string& key) {
        const auto it = cfg.find(key);
        if (it == cfg.end()) {
            throw shs::ParseError("config: missing required key '" + key + "'");
        }
        return it->second;
    };

    static const std::set<std::string> known = {"kind", "n",       "p",         "path",
                                                "k",    "seed",    "epochs",    "lr",
                                                "mode", "outdir",  "deletions", "insertions",
                                                "method", "weight_decay"};
    for (const auto& [key, value] : cfg) {
        if (!known.contains(key)) {
            throw shs::ParseError("config: unknown key '" + key + "'");
        }
    }

    const std::uint64_t root_seed =
        args.seed.value_or(std::stoull(get("seed", "7")));
    const std::string outdir = args.outdir.value_or(get("outdir", "out"));
    const int k = args.k.value_or(std::stoi(get("k", "50")));
    const std::string kind = require("kind");
    const std::string method = get("method", "oneshot");
    const std::string mode = get("mode", "deletions");

    shs::DatasetSpec spec;
    spec.seed = shs::mix_seed(root_seed, 10);
    if (kind == "pa") {
        spec.kind = shs::DatasetKind::pa;
        spec.n = std::stoi(require("n"));
    } else if (kind == "er") {
        spec.kind = shs::DatasetKind::er;
        spec.n = std::stoi(require("n"));
        spec.p = std::stod(require("p"));
    } else if (kind == "file") {
        spec.kind = shs::DatasetKind::file;
        spec.path = require("path");
    } else {
        throw shs::ParseError("config: kind must be pa, er, or file");
    }

    shs::TrainConfig train_cfg;
    train_cfg.epochs = args.epochs.value_or(std::stoi(get("epochs", "200")));
    train_cfg.learning_rate = args.lr.value_or(std::stod(get("lr", "0.01")));
    train_cfg.weight_decay = args.weight_decay.value_or(std::stod(get("weight_decay", "5e-4")));
    train_cfg.seed = shs::mix_seed(root_seed, 20);
    const std::uint64_t dynamics_seed = shs::mix_seed(root_seed, 30);

    fs::create_directories(outdir);
    const std::string graph_path = outdir + "/graph.edges";
    const std::string labels_path = outdir + "/labels.txt";
    const std::string model_path = outdir + "/model.json";
    const std::string log_path = outdir + "/train_log.csv";
    const std::string bench_prefix = outdir + "/bench";

    log_info("[1/4] dataset " + shs::dataset_name(spec));
    const shs::Graph g = shs::realize(spec);
    shs::write_edge_list_file(g, graph_path);
    shs::write_dataset_manifest(spec, g, graph_path, graph_path + ".manifest.json");

    log_info("[2/4] ground truth, k=" + std::to_string(k));
    const shs::ShsResult truth = method == "greedy" ? shs::greedy_top_k(g, k)
                                                    : shs::label_top_k(g, k);
    const auto labels = shs::labels_from_spanners(truth.spanners, g.node_count());
    shs::write_labels_file(labels, labels_path);

    log_info("[3/4] training " + std::to_string(train_cfg.epochs) + " epochs");
    const auto [model, train_log] = shs::train(g, shs::build_features(g), labels, train_cfg);
    shs::save_model(model, model_path);
    shs::write_train_log_csv(train_log, log_path);

    log_info("[4/4] benchmark, mode " + mode);
    shs::SnapshotSequence seq;
    if (mode == "deletions") {
        seq = shs::make_deletion_sequence(g, std::stoi(get("deletions", "50")), dynamics_seed);
    } else if (mode == "batch") {
        seq = shs::make_batch_update(g, std::stoi(get("deletions", "5")),
                                     std::stoi(get("insertions", "5")), dynamics_seed);
    } else {
        throw shs::ParseError("config: mode must be deletions or batch");
    }
    shs::BenchMeta meta{shs::dataset_name(spec), k, dynamics_seed, mode};
    const shs::BenchReport report = shs::run_bench(seq, model, k, meta);
    shs::write_bench_json(report, bench_prefix + ".json");
    shs::write_bench_csv(report, bench_prefix + ".csv");
    shs::write_predictions_csv(report, bench_prefix + ".predictions.csv");

    // Manifest pins the root seed and the checksums of every deterministic
    // artifact; timing-dependent outputs live in bench.json/bench.csv only.
    json manifest;
    manifest["root_seed"] = root_seed;
    manifest["config"] = {{"kind", kind},
                          {"dataset", shs::dataset_name(spec)},
                          {"k", k},
                          {"method", method},
                          {"mode", mode},
                          {"epochs", train_cfg.epochs},
                          {"lr", train_cfg.learning_rate},
                          {"weight_decay", train_cfg.weight_decay}};
    manifest["derived_seeds"] = {
        {"graph", spec.seed}, {"train", train_cfg.seed}, {"dynamics", dynamics_seed}};
    manifest["artifacts"] = {{"graph.edges", checksum_hex(graph_path)},
                             {"labels.txt", checksum_hex(labels_path)},
                             {"model.json", checksum_hex(model_path)},
                             {"bench.predictions.csv",
                              checksum_hex(bench_prefix + ".predictions.csv")}};
    manifest["mean_accuracy"] = report.mean_accuracy;
    std::ofstream mf(outdir + "/experiment-manifest.json", std::ios::binary);
    if (!mf) {
        throw shs::IoError("cannot write experiment manifest");
    }
    mf << manifest.dump(2) << "\n";

    std::cout << shs::format_summary(report);
    std::cout << "artifacts in " << outdir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural hole spanner discovery in dynamic graphs"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic graph");
    generate->add_option("--kind", gen.kind, "pa or er")->required();
    generate->add_option("--n", gen.n, "node count")->required();
    generate->add_option("--p", gen.p, "edge probability (er)");
    generate->add_option("--seed", gen.seed, "random seed");
    generate->add_option("--out", gen.out, "output edge-list path")->required();

    LabelArgs lab;
    auto* label = app.add_subcommand("label", "Compute ground-truth SHS labels");
    label->add_option("--graph", lab.graph, "edge-list file")->required();
    label->add_option("--k", lab.k, "number of spanners")->required();
    label->add_option("--out", lab.out, "labels output path")->required();
    label->add_option("--method", lab.method, "oneshot (default) or greedy");
    label->add_option("--threads", lab.threads, "scoring threads");

    std::string feat_graph;
    std::string feat_out;
    auto* features = app.add_subcommand("features", "Dump per-node features as CSV");
    features->add_option("--graph", feat_graph, "edge-list file")->required();
    features->add_option("--out", feat_out, "CSV output path")->required();

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Train the spanner classifier");
    train->add_option("--graph", tr.graph, "edge-list file")->required();
    train->add_option("--labels", tr.labels, "labels file")->required();
    train->add_option("--out", tr.out, "model JSON output path")->required();
    train->add_option("--log", tr.log, "per-epoch CSV log path");
    train->add_option("--epochs", tr.cfg.epochs, "training epochs");
    train->add_option("--lr", tr.cfg.learning_rate, "learning rate");
    train->add_option("--weight-decay", tr.cfg.weight_decay, "L2 weight decay");
    train->add_option("--seed", tr.cfg.seed, "random seed");

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "Benchmark oracle vs model on snapshots");
    bench->add_option("--graph", be.graph, "edge-list file")->required();
    bench->add_option("--model", be.model, "trained model JSON")->required();
    bench->add_option("--k", be.k, "number of spanners");
    bench->add_option("--mode", be.mode, "deletions (default) or batch");
    bench->add_option("--deletions", be.deletions, "edges to delete");
    bench->add_option("--insertions", be.insertions, "edges to insert (batch)");
    bench->add_option("--seed", be.seed, "random seed");
    bench->add_option("--out-prefix", be.out_prefix, "report path prefix")->required();

    ExperimentArgs ex;
    auto* run = app.add_subcommand("run-experiment",
                                   "generate -> label -> train -> bench from a config file");
    run->add_option("--config", ex.config_path, "key = value config file")->required();
    std::uint64_t ex_seed = 0;
    std::string ex_outdir;
    int ex_k = 0;
    int ex_epochs = 0;
    double ex_lr = 0.0;
    double ex_wd = 0.0;
    auto* o_seed = run->add_option("--seed", ex_seed, "override root seed");
    auto* o_out = run->add_option("--out", ex_outdir, "override output directory");
    auto* o_k = run->add_option("--k", ex_k, "override k");
    auto* o_epochs = run->add_option("--epochs", ex_epochs, "override epochs");
    auto* o_lr = run->add_option("--lr", ex_lr, "override learning rate");
    auto* o_wd = run->add_option("--weight-decay", ex_wd, "override weight decay");

    try {
        app.parse(argc, argv);

        if (*o_seed) ex.seed = ex_seed;
        if (*o_out) ex.outdir = ex_outdir;
        if (*o_k) ex.k = ex_k;
        if (*o_epochs) ex.epochs = ex_epochs;
        if (*o_lr) ex.lr = ex_lr;
        if (*o_wd) ex.weight_decay = ex_wd;

        if (generate->parsed()) return cmd_generate(gen);
        if (label->parsed()) return cmd_label(lab);
        if (features->parsed()) return cmd_features(feat_graph, feat_out);
        if (train->parsed()) return cmd_train(tr);
        if (bench->parsed()) return cmd_bench(be);
        if (run->parsed()) return cmd_run_experiment(ex);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const shs::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const shs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
