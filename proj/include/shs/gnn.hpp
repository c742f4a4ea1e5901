#pragma once

// GNN-SHS: L mean-aggregation layers where each node concatenates its own
// previous-layer embedding with the neighbor mean, a linear softmax head over
// two classes, binary cross-entropy training with Adam. No bias terms.
// Forward and backward passes are explicit over dense matrices, all doubles.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shs/connectivity.hpp"
#include "shs/features.hpp"
#include "shs/graph.hpp"
#include "shs/matrix.hpp"

namespace shs {

struct ModelDims {
    int input = 3;
    int hidden = 32;
    int classes = 2;

    bool operator==(const ModelDims&) const = default;
};

struct TrainMeta {
    int epochs = 0;
    int best_epoch = -1;  // -1 when never trained
    double best_val_accuracy = 0.0;
    double learning_rate = 0.0;
    double weight_decay = 0.0;
};

struct ModelParams {
    ModelDims dims;
    int layer_count = 2;
    std::vector<Matrix> layer_weights;  // W^l of shape (2 d_{l-1}) x d_l
    Matrix output_weights;              // d_L x classes
    FeatureStats feature_stats;         // captured from the training graph
    std::uint64_t seed = 0;
    TrainMeta meta;
};

struct SplitFractions {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

struct TrainConfig {
    int epochs = 200;
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    SplitFractions split;
    std::uint64_t seed = 0;
    // Adam moments
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct Prediction {
    Matrix probabilities;        // n x 2 rows summing to 1; column 1 is SHS
    std::vector<int> predicted;  // argmax per row, ties resolved to class 0
};

// Per-layer activations cached by forward() so backward() can reuse them.
struct EmbeddingTable {
    std::vector<Matrix> embeddings;     // h^0 .. h^L
    std::vector<Matrix> aggregated;     // neighbor means consumed by layer l
    std::vector<Matrix> concatenated;   // [h^{l-1} || agg] per layer
    std::vector<Matrix> preactivation;  // layer inputs to ReLU
    Matrix logits;

    const Matrix& final_embeddings() const { return embeddings.back(); }
};

struct Gradients {
    std::vector<Matrix> layer_weights;
    Matrix output_weights;
};

struct AdamState {
    std::vector<Matrix> m_layers;
    std::vector<Matrix> v_layers;
    Matrix m_output;
    Matrix v_output;
};

struct NodeSplit {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0.0;
    double val_accuracy = 0.0;
};

using TrainLog = std::vector<EpochRecord>;

// Seeded Glorot-uniform initialization; draw order is fixed, so the same
// seed always yields the same parameters.
ModelParams init_params(const ModelDims& dims, int layer_count, std::uint64_t seed);

AdamState init_adam_state(const ModelParams& params);

// Mean of the previous-layer rows over N(i); zero vector for isolated nodes.
std::vector<double> aggregate_neighbors(const Matrix& h_prev, const Graph& g, int i);

// ReLU((h_self || h_agg) * w); the per-node form of one aggregation layer.
std::vector<double> combine(const std::vector<double>& h_self, const std::vector<double>& h_agg,
                            const Matrix& w);

// Full pass: L aggregation layers then the softmax head. `features` must
// already be normalized.
std::pair<EmbeddingTable, Prediction> forward(const Graph& g, const Matrix& features,
                                              const ModelParams& params);

// Mean binary cross-entropy of the SHS-class probability over the mask,
// probabilities clamped to [1e-12, 1 - 1e-12].
double bce_loss(const Prediction& prediction, const std::vector<int>& labels,
                const std::vector<int>& mask);

// Analytic gradients of bce_loss plus the L2 term weight_decay/2 * ||W||^2.
Gradients backward(const Graph& g, const ModelParams& params, const EmbeddingTable& table,
                   const Prediction& prediction, const std::vector<int>& labels,
                   const std::vector<int>& mask, double weight_decay);

// Bias-corrected Adam update, step index t >= 1.
void adam_step(ModelParams& params, const Gradients& grads, int t, const TrainConfig& cfg,
               AdamState& state);

// Seeded stratified split; every split keeps the SHS proportion and, for
// k >= 3, at least one SHS node.
NodeSplit split_nodes(int n, const TrainConfig& cfg, const std::vector<int>& labels);

// Fraction of `subset` whose argmax class matches the label.
double accuracy_on(const Prediction& prediction, const std::vector<int>& labels,
                   const std::vector<int>& subset);

// Full-batch training for cfg.epochs; returns the parameters of the epoch
// with the best validation accuracy plus the per-epoch log.
std::pair<ModelParams, TrainLog> train(const Graph& g, const FeatureMatrix& fm,
                                       const std::vector<int>& labels, const TrainConfig& cfg);

// Recomputes features on g, normalizes with the training stats, and returns
// the k nodes with the highest SHS probability (ties to the lower id).
ShsResult predict(const Graph& g, const ModelParams& params, int k);

// As predict(), but also exposes the probabilities (used by the harness).
ShsResult predict_with(const Graph& g, const ModelParams& params, int k, Prediction* out_pred,
                       double* feature_seconds);

// Versioned JSON model file; save -> load -> forward is bit-exact.
std::string model_to_json(const ModelParams& params);
ModelParams model_from_json(const std::string& text);
void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

void write_train_log_csv(const TrainLog& log, const std::string& path);

}  // namespace shs
