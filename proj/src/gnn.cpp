#include "shs/gnn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shs/error.hpp"
#include "shs/rng.hpp"

namespace shs {

namespace {

constexpr double kProbClamp = 1e-12;

Matrix glorot_uniform(int rows, int cols, Rng& rng) {
    Matrix w(rows, cols);
    const double limit = std::sqrt(6.0 / (rows + cols));
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
        w.data()[idx] = rng.next_symmetric(limit);
    }
    return w;
}

// Row means of h over N(i) for all nodes at once.
Matrix aggregate_all(const Matrix& h, const Graph& g) {
    const int n = g.node_count();
    const int width = h.cols();
    Matrix agg(n, width);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = g.neighbors(i);
        if (nbrs.empty()) {
            continue;
        }
        double* arow = agg.row(i);
        for (int j : nbrs) {
            const double* hrow = h.row(j);
            for (int c = 0; c < width; ++c) {
                arow[c] += hrow[c];
            }
        }
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        for (int c = 0; c < width; ++c) {
            arow[c] *= inv;
        }
    }
    return agg;
}

// Adjoint of aggregate_all: out[j] += sum over i adjacent to j of d[i]/|N(i)|.
Matrix aggregate_adjoint(const Matrix& d, const Graph& g) {
    const int n = g.node_count();
    const int width = d.cols();
    Matrix out(n, width);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = g.neighbors(i);
        if (nbrs.empty()) {
            continue;
        }
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        const double* drow = d.row(i);
        for (int j : nbrs) {
            double* orow = out.row(j);
            for (int c = 0; c < width; ++c) {
                orow[c] += drow[c] * inv;
            }
        }
    }
    return out;
}

int layer_input_width(const ModelDims& dims, int layer) {
    return 2 * (layer == 0 ? dims.input : dims.hidden);
}

void check_params(const ModelParams& p) {
    if (p.layer_count < 1 || static_cast<int>(p.layer_weights.size()) != p.layer_count) {
        throw ShapeError("model must have layer_count >= 1 weight matrices");
    }
    for (int l = 0; l < p.layer_count; ++l) {
        const int want_rows = layer_input_width(p.dims, l);
        if (p.layer_weights[l].rows() != want_rows || p.layer_weights[l].cols() != p.dims.hidden) {
            throw ShapeError("layer " + std::to_string(l + 1) + " weights must be " +
                             std::to_string(want_rows) + "x" + std::to_string(p.dims.hidden));
        }
    }
    if (p.output_weights.rows() != p.dims.hidden || p.output_weights.cols() != p.dims.classes) {
        throw ShapeError("output weights must be " + std::to_string(p.dims.hidden) + "x" +
                         std::to_string(p.dims.classes));
    }
}

}  // namespace

ModelParams init_params(const ModelDims& dims, int layer_count, std::uint64_t seed) {
    if (layer_count < 1) {
        throw InvalidConfigError("layer_count must be >= 1");
    }
    ModelParams p;
    p.dims = dims;
    p.layer_count = layer_count;
    p.seed = seed;
    Rng rng(seed);
    for (int l = 0; l < layer_count; ++l) {
        p.layer_weights.push_back(glorot_uniform(layer_input_width(dims, l), dims.hidden, rng));
    }
    p.output_weights = glorot_uniform(dims.hidden, dims.classes, rng);
    return p;
}

AdamState init_adam_state(const ModelParams& params) {
    AdamState state;
    for (const auto& w : params.layer_weights) {
        state.m_layers.emplace_back(w.rows(), w.cols());
        state.v_layers.emplace_back(w.rows(), w.cols());
    }
    state.m_output = Matrix(params.output_weights.rows(), params.output_weights.cols());
    state.v_output = Matrix(params.output_weights.rows(), params.output_weights.cols());
    return state;
}

std::vector<double> aggregate_neighbors(const Matrix& h_prev, const Graph& g, int i) {
    if (h_prev.rows() != g.node_count()) {
        throw ShapeError("embedding table must have one row per node");
    }
    std::vector<double> out(h_prev.cols(), 0.0);
    const auto& nbrs = g.neighbors(i);
    if (nbrs.empty()) {
        return out;
    }
    for (int j : nbrs) {
        const double* row = h_prev.row(j);
        for (int c = 0; c < h_prev.cols(); ++c) {
            out[c] += row[c];
        }
    }
    const double inv = 1.0 / static_cast<double>(nbrs.size());
    for (double& v : out) {
        v *= inv;
    }
    return out;
}

std::vector<double> combine(const std::vector<double>& h_self, const std::vector<double>& h_agg,
                            const Matrix& w) {
    if (h_self.size() != h_agg.size()) {
        throw ShapeError("combine: self and aggregate widths differ");
    }
    const int half = static_cast<int>(h_self.size());
    if (w.rows() != 2 * half) {
        throw ShapeError("combine: weight matrix expects input width " + std::to_string(w.rows()) +
                         ", got " + std::to_string(2 * half));
    }
    std::vector<double> out(w.cols(), 0.0);
    for (int k = 0; k < 2 * half; ++k) {
        const double x = k < half ? h_self[k] : h_agg[k - half];
        const double* wrow = w.row(k);
        for (int c = 0; c < w.cols(); ++c) {
            out[c] += x * wrow[c];
        }
    }
    for (double& v : out) {
        v = v > 0.0 ? v : 0.0;
    }
    return out;
}

std::pair<EmbeddingTable, Prediction> forward(const Graph& g, const Matrix& features,
                                              const ModelParams& params) {
    check_params(params);
    const int n = g.node_count();
    if (features.rows() != n || features.cols() != params.dims.input) {
        throw ShapeError("feature matrix must be n x " + std::to_string(params.dims.input));
    }

    EmbeddingTable table;
    table.embeddings.reserve(params.layer_count + 1);
    table.embeddings.push_back(features);

    for (int l = 0; l < params.layer_count; ++l) {
        const Matrix& prev = table.embeddings.back();
        table.aggregated.push_back(aggregate_all(prev, g));
        table.concatenated.push_back(hstack(prev, table.aggregated.back()));
        table.preactivation.push_back(matmul(table.concatenated.back(), params.layer_weights[l]));

        Matrix& s = table.preactivation.back();
        Matrix h(s.rows(), s.cols());
        double checksum = 0.0;
        for (std::size_t idx = 0; idx < s.size(); ++idx) {
            const double v = s.data()[idx];
            checksum += v;
            h.data()[idx] = v > 0.0 ? v : 0.0;
        }
        if (!std::isfinite(checksum)) {
            throw NumericError("non-finite embeddings at layer " + std::to_string(l + 1));
        }
        table.embeddings.push_back(std::move(h));
    }

    table.logits = matmul(table.final_embeddings(), params.output_weights);

    Prediction pred;
    pred.probabilities = Matrix(n, params.dims.classes);
    pred.predicted.resize(n);
    double checksum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double o0 = table.logits(i, 0);
        const double o1 = table.logits(i, 1);
        checksum += o0 + o1;
        const double mx = o0 > o1 ? o0 : o1;
        const double e0 = std::exp(o0 - mx);
        const double e1 = std::exp(o1 - mx);
        const double z = e0 + e1;
        pred.probabilities(i, 0) = e0 / z;
        pred.probabilities(i, 1) = e1 / z;
        pred.predicted[i] = e1 > e0 ? 1 : 0;  // ties resolve to normal
    }
    if (!std::isfinite(checksum)) {
        throw NumericError("non-finite logits at softmax head");
    }
    return {std::move(table), std::move(pred)};
}

double bce_loss(const Prediction& prediction, const std::vector<int>& labels,
                const std::vector<int>& mask) {
    if (mask.empty()) {
        throw InvalidConfigError("bce_loss: empty node mask");
    }
    double total = 0.0;
    for (int i : mask) {
        const double y = labels.at(i);
        const double y_hat =
            std::clamp(prediction.probabilities(i, 1), kProbClamp, 1.0 - kProbClamp);
        total += y * std::log(y_hat) + (1.0 - y) * std::log(1.0 - y_hat);
    }
    return -total / static_cast<double>(mask.size());
}

Gradients backward(const Graph& g, const ModelParams& params, const EmbeddingTable& table,
                   const Prediction& prediction, const std::vector<int>& labels,
                   const std::vector<int>& mask, double weight_decay) {
    if (mask.empty()) {
        throw InvalidConfigError("backward: empty node mask");
    }
    const int n = g.node_count();
    const double inv_r = 1.0 / static_cast<double>(mask.size());

    // Softmax + cross-entropy head: dL/dlogits = (p - onehot(y)) / r on the mask.
    Matrix dlogits(n, params.dims.classes);
    for (int i : mask) {
        const int y = labels.at(i);
        dlogits(i, 0) = (prediction.probabilities(i, 0) - (y == 0 ? 1.0 : 0.0)) * inv_r;
        dlogits(i, 1) = (prediction.probabilities(i, 1) - (y == 1 ? 1.0 : 0.0)) * inv_r;
    }

    Gradients grads;
    grads.output_weights = matmul_at_b(table.final_embeddings(), dlogits);
    for (std::size_t idx = 0; idx < grads.output_weights.size(); ++idx) {
        grads.output_weights.data()[idx] += weight_decay * params.output_weights.data()[idx];
    }

    Matrix dh = matmul_a_bt(dlogits, params.output_weights);
    grads.layer_weights.resize(params.layer_count);
    for (int l = params.layer_count - 1; l >= 0; --l) {
        const Matrix& s = table.preactivation[l];
        Matrix ds = std::move(dh);
        for (std::size_t idx = 0; idx < ds.size(); ++idx) {
            if (s.data()[idx] <= 0.0) {
                ds.data()[idx] = 0.0;
            }
        }

        grads.layer_weights[l] = matmul_at_b(table.concatenated[l], ds);
        for (std::size_t idx = 0; idx < grads.layer_weights[l].size(); ++idx) {
            grads.layer_weights[l].data()[idx] += weight_decay * params.layer_weights[l].data()[idx];
        }

        if (l == 0) {
            break;  // gradient w.r.t. input features is not needed
        }
        const Matrix dconcat = matmul_a_bt(ds, params.layer_weights[l]);
        const int half = dconcat.cols() / 2;
        Matrix dself(n, half);
        Matrix dagg(n, half);
        for (int i = 0; i < n; ++i) {
            const double* crow = dconcat.row(i);
            double* srow = dself.row(i);
            double* arow = dagg.row(i);
            for (int c = 0; c < half; ++c) {
                srow[c] = crow[c];
                arow[c] = crow[half + c];
            }
        }
        dh = aggregate_adjoint(dagg, g);
        for (std::size_t idx = 0; idx < dh.size(); ++idx) {
            dh.data()[idx] += dself.data()[idx];
        }
    }
    return grads;
}

namespace {

void adam_update(Matrix& w, const Matrix& grad, Matrix& m, Matrix& v, int t,
                 const TrainConfig& cfg) {
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
        const double gval = grad.data()[idx];
        double& mval = m.data()[idx];
        double& vval = v.data()[idx];
        mval = cfg.beta1 * mval + (1.0 - cfg.beta1) * gval;
        vval = cfg.beta2 * vval + (1.0 - cfg.beta2) * gval * gval;
        const double m_hat = mval / bias1;
        const double v_hat = vval / bias2;
        w.data()[idx] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

}  // namespace

void adam_step(ModelParams& params, const Gradients& grads, int t, const TrainConfig& cfg,
               AdamState& state) {
    if (t < 1) {
        throw InvalidConfigError("adam_step: step index must be >= 1");
    }
    for (int l = 0; l < params.layer_count; ++l) {
        adam_update(params.layer_weights[l], grads.layer_weights[l], state.m_layers[l],
                    state.v_layers[l], t, cfg);
    }
    adam_update(params.output_weights, grads.output_weights, state.m_output, state.v_output, t,
                cfg);
}

namespace {

// Nearest-count rounding per class; the leftover goes to test.
std::array<int, 3> class_counts(int total, const SplitFractions& split) {
    int tr = static_cast<int>(std::llround(split.train * total));
    tr = std::min(tr, total);
    int va = static_cast<int>(std::llround(split.val * total));
    va = std::min(va, total - tr);
    return {tr, va, total - tr - va};
}

// Moves one unit from the largest bucket to every empty one.
void ensure_nonempty(std::array<int, 3>& counts) {
    for (int b = 0; b < 3; ++b) {
        if (counts[b] > 0) {
            continue;
        }
        const int largest =
            static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        if (counts[largest] <= 1) {
            throw InvalidConfigError("split: not enough nodes to stratify");
        }
        --counts[largest];
        ++counts[b];
    }
}

}  // namespace

NodeSplit split_nodes(int n, const TrainConfig& cfg, const std::vector<int>& labels) {
    const auto& f = cfg.split;
    if (f.train <= 0.0 || f.val <= 0.0 || f.test <= 0.0 ||
        std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
        throw InvalidConfigError("split fractions must be positive and sum to 1");
    }
    if (static_cast<int>(labels.size()) != n) {
        throw InvalidConfigError("labels must cover all nodes");
    }
    std::vector<int> shs_ids;
    std::vector<int> normal_ids;
    for (int i = 0; i < n; ++i) {
        (labels[i] == 1 ? shs_ids : normal_ids).push_back(i);
    }
    const int k = static_cast<int>(shs_ids.size());
    if (k < 1) {
        throw InvalidConfigError("split: at least one SHS label required");
    }
    if (n < 3) {
        throw InvalidConfigError("split: need at least 3 nodes");
    }

    Rng rng(mix_seed(cfg.seed, 1));
    shuffle_in_place(shs_ids, rng);
    shuffle_in_place(normal_ids, rng);

    auto shs_counts = class_counts(k, f);
    if (k >= 3) {
        ensure_nonempty(shs_counts);
    }
    auto normal_counts = class_counts(static_cast<int>(normal_ids.size()), f);

    NodeSplit out;
    auto take = [](const std::vector<int>& ids, int begin, int count, std::vector<int>& dst) {
        dst.insert(dst.end(), ids.begin() + begin, ids.begin() + begin + count);
    };
    take(shs_ids, 0, shs_counts[0], out.train);
    take(shs_ids, shs_counts[0], shs_counts[1], out.val);
    take(shs_ids, shs_counts[0] + shs_counts[1], shs_counts[2], out.test);
    take(normal_ids, 0, normal_counts[0], out.train);
    take(normal_ids, normal_counts[0], normal_counts[1], out.val);
    take(normal_ids, normal_counts[0] + normal_counts[1], normal_counts[2], out.test);
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    if (out.train.empty() || out.val.empty() || out.test.empty()) {
        throw InvalidConfigError("split: a split ended up empty; n too small");
    }
    return out;
}

double accuracy_on(const Prediction& prediction, const std::vector<int>& labels,
                   const std::vector<int>& subset) {
    if (subset.empty()) {
        throw InvalidConfigError("accuracy_on: empty node subset");
    }
    int hits = 0;
    for (int i : subset) {
        if (prediction.predicted.at(i) == labels.at(i)) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(subset.size());
}

std::pair<ModelParams, TrainLog> train(const Graph& g, const FeatureMatrix& fm,
                                       const std::vector<int>& labels, const TrainConfig& cfg) {
    const int n = g.node_count();
    if (static_cast<int>(labels.size()) != n) {
        throw InvalidConfigError("train: labels must cover all nodes");
    }
    if (cfg.epochs < 0) {
        throw InvalidConfigError("train: epochs must be >= 0");
    }

    const FeatureMatrix scaled = normalize(fm);
    ModelParams params = init_params({kFeatureCount, 32, 2}, 2, mix_seed(cfg.seed, 0));
    params.feature_stats = fm.stats;
    params.seed = cfg.seed;
    params.meta.epochs = cfg.epochs;
    params.meta.learning_rate = cfg.learning_rate;
    params.meta.weight_decay = cfg.weight_decay;

    TrainLog log;
    if (cfg.epochs == 0) {
        return {params, log};
    }

    const NodeSplit split = split_nodes(n, cfg, labels);
    AdamState state = init_adam_state(params);
    ModelParams best = params;
    double best_val = -1.0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        auto [table, pred] = forward(g, scaled.values, params);
        const double loss = bce_loss(pred, labels, split.train);
        if (!std::isfinite(loss)) {
            throw NumericError("training diverged at epoch " + std::to_string(epoch));
        }
        const Gradients grads =
            backward(g, params, table, pred, labels, split.train, cfg.weight_decay);
        adam_step(params, grads, epoch, cfg, state);

        const auto [eval_table, eval_pred] = forward(g, scaled.values, params);
        const double val_acc = accuracy_on(eval_pred, labels, split.val);
        log.push_back({epoch, loss, val_acc});
        // ties keep the latest epoch, i.e. the most-trained of the equals
        if (val_acc >= best_val) {
            best_val = val_acc;
            best = params;
            best.meta.best_epoch = epoch;
            best.meta.best_val_accuracy = val_acc;
        }
    }
    best.meta.epochs = cfg.epochs;
    return {best, log};
}

namespace {

// Reused across calls so the hot inference path does not churn large
// allocations; computes exactly what forward() computes, in the same
// floating-point order, but keeps no per-layer caches.
struct InferenceScratch {
    Matrix concat;
    Matrix hidden;
    Matrix logits;
};

// Runs the layers and leaves the logits in scratch; same floating-point
// order as forward(), so downstream values are bitwise identical.
void infer_logits(const Graph& g, const Matrix& features, const ModelParams& p,
                  InferenceScratch& scratch) {
    const int n = g.node_count();
    const Matrix* prev = &features;
    for (int l = 0; l < p.layer_count; ++l) {
        const int half = prev->cols();
        scratch.concat.reset(n, 2 * half);
        for (int i = 0; i < n; ++i) {
            double* crow = scratch.concat.row(i);
            const double* prow = prev->row(i);
            for (int c = 0; c < half; ++c) {
                crow[c] = prow[c];
            }
            const auto& nbrs = g.neighbors(i);
            if (nbrs.empty()) {
                continue;
            }
            double* arow = crow + half;
            for (int j : nbrs) {
                const double* hrow = prev->row(j);
                for (int c = 0; c < half; ++c) {
                    arow[c] += hrow[c];
                }
            }
            const double inv = 1.0 / static_cast<double>(nbrs.size());
            for (int c = 0; c < half; ++c) {
                arow[c] *= inv;
            }
        }
        // concat already holds the layer inputs, so hidden may be overwritten
        matmul_into(scratch.concat, p.layer_weights[l], scratch.hidden);
        double checksum = 0.0;
        for (std::size_t idx = 0; idx < scratch.hidden.size(); ++idx) {
            double& v = scratch.hidden.data()[idx];
            checksum += v;
            v = v > 0.0 ? v : 0.0;
        }
        if (!std::isfinite(checksum)) {
            throw NumericError("non-finite embeddings at layer " + std::to_string(l + 1));
        }
        prev = &scratch.hidden;
    }
    matmul_into(*prev, p.output_weights, scratch.logits);
    double checksum = 0.0;
    for (int i = 0; i < n; ++i) {
        checksum += scratch.logits(i, 0) + scratch.logits(i, 1);
    }
    if (!std::isfinite(checksum)) {
        throw NumericError("non-finite logits at softmax head");
    }
}

Prediction softmax_of(const Matrix& logits) {
    Prediction pred;
    pred.probabilities = Matrix(logits.rows(), logits.cols());
    pred.predicted.resize(logits.rows());
    for (int i = 0; i < logits.rows(); ++i) {
        const double o0 = logits(i, 0);
        const double o1 = logits(i, 1);
        const double mx = o0 > o1 ? o0 : o1;
        const double e0 = std::exp(o0 - mx);
        const double e1 = std::exp(o1 - mx);
        const double z = e0 + e1;
        pred.probabilities(i, 0) = e0 / z;
        pred.probabilities(i, 1) = e1 / z;
        pred.predicted[i] = e1 > e0 ? 1 : 0;
    }
    return pred;
}

}  // namespace

ShsResult predict_with(const Graph& g, const ModelParams& params, int k, Prediction* out_pred,
                       double* feature_seconds) {
    check_params(params);
    const int n = g.node_count();
    if (k < 0 || k > n) {
        throw InvalidKError("predict: k must be in [0, " + std::to_string(n) + "]");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const FeatureMatrix raw = build_features(g);
    const FeatureMatrix scaled = normalize_with(raw, params.feature_stats);
    const auto t1 = std::chrono::steady_clock::now();
    if (feature_seconds != nullptr) {
        *feature_seconds = std::chrono::duration<double>(t1 - t0).count();
    }

    thread_local InferenceScratch scratch;
    infer_logits(g, scaled.values, params, scratch);

    // The SHS probability is sigma(o1 - o0), strictly monotone in the logit
    // difference, so ranking the difference ranks the probability.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        order[i] = i;
    }
    const Matrix& logits = scratch.logits;
    const auto margin_before = [&logits](int a, int b) {
        const double ma = logits(a, 1) - logits(a, 0);
        const double mb = logits(b, 1) - logits(b, 0);
        if (ma != mb) {
            return ma > mb;
        }
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), margin_before);

    ShsResult result;
    result.spanners.assign(order.begin(), order.begin() + k);
    result.residual_connectivity =
        total_pairwise_connectivity(induced_subgraph_without(g, result.spanners));
    if (out_pred != nullptr) {
        *out_pred = softmax_of(scratch.logits);
    }
    return result;
}

ShsResult predict(const Graph& g, const ModelParams& params, int k) {
    return predict_with(g, params, k, nullptr, nullptr);
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows()},
            {"cols", m.cols()},
            {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.size()) {
        throw ParseError("model file: matrix payload size mismatch");
    }
    std::copy(data.begin(), data.end(), m.data());
    return m;
}

}  // namespace

std::string model_to_json(const ModelParams& params) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["dims"] = {{"input", params.dims.input},
                 {"hidden", params.dims.hidden},
                 {"classes", params.dims.classes}};
    j["layer_count"] = params.layer_count;
    auto layers = nlohmann::json::array();
    for (const auto& w : params.layer_weights) {
        layers.push_back(matrix_to_json(w));
    }
    j["layer_weights"] = std::move(layers);
    j["output_weights"] = matrix_to_json(params.output_weights);
    j["feature_stats"] = {
        {"min", std::vector<double>(params.feature_stats.min.begin(), params.feature_stats.min.end())},
        {"max", std::vector<double>(params.feature_stats.max.begin(), params.feature_stats.max.end())}};
    j["seed"] = params.seed;
    j["meta"] = {{"epochs", params.meta.epochs},
                 {"best_epoch", params.meta.best_epoch},
                 {"best_val_accuracy", params.meta.best_val_accuracy},
                 {"learning_rate", params.meta.learning_rate},
                 {"weight_decay", params.meta.weight_decay}};
    return j.dump(2) + "\n";
}

ModelParams model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw ParseError("model file: unsupported format_version");
        }
        ModelParams p;
        p.dims.input = j.at("dims").at("input").get<int>();
        p.dims.hidden = j.at("dims").at("hidden").get<int>();
        p.dims.classes = j.at("dims").at("classes").get<int>();
        p.layer_count = j.at("layer_count").get<int>();
        for (const auto& w : j.at("layer_weights")) {
            p.layer_weights.push_back(matrix_from_json(w));
        }
        p.output_weights = matrix_from_json(j.at("output_weights"));
        const auto mins = j.at("feature_stats").at("min").get<std::vector<double>>();
        const auto maxs = j.at("feature_stats").at("max").get<std::vector<double>>();
        if (mins.size() != kFeatureCount || maxs.size() != kFeatureCount) {
            throw ParseError("model file: feature stats must have 3 columns");
        }
        std::copy(mins.begin(), mins.end(), p.feature_stats.min.begin());
        std::copy(maxs.begin(), maxs.end(), p.feature_stats.max.begin());
        p.seed = j.at("seed").get<std::uint64_t>();
        const auto& meta = j.at("meta");
        p.meta.epochs = meta.at("epochs").get<int>();
        p.meta.best_epoch = meta.at("best_epoch").get<int>();
        p.meta.best_val_accuracy = meta.at("best_val_accuracy").get<double>();
        p.meta.learning_rate = meta.at("learning_rate").get<double>();
        p.meta.weight_decay = meta.at("weight_decay").get<double>();
        check_params(p);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

void save_model(const ModelParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << model_to_json(params);
}

ModelParams load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void write_train_log_csv(const TrainLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << "epoch,loss,val_accuracy\n";
    char buf[120];
    for (const auto& rec : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", rec.epoch, rec.loss,
                      rec.val_accuracy);
        out << buf;
    }
}

}  // namespace shs
