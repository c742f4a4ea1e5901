#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "shs/datasets.hpp"
#include "shs/error.hpp"
#include "shs/gnn.hpp"
#include "shs/rng.hpp"
#include "test_util.hpp"

using namespace shs;

namespace {

// Straight-line reimplementation of the embedding generation: per node, per
// layer, plain loops, no shared code with the library forward pass.
Matrix naive_forward_probs(const Graph& g, const Matrix& features, const ModelParams& p) {
    const int n = g.node_count();
    Matrix h = features;
    for (int l = 0; l < p.layer_count; ++l) {
        const Matrix& w = p.layer_weights[l];
        Matrix next(n, w.cols());
        for (int i = 0; i < n; ++i) {
            // neighbor mean, weight factor 1/|N(i)|
            std::vector<double> agg(h.cols(), 0.0);
            if (g.degree(i) > 0) {
                for (int j : g.neighbors(i)) {
                    for (int c = 0; c < h.cols(); ++c) {
                        agg[c] += h(j, c);
                    }
                }
                for (double& v : agg) {
                    v /= g.degree(i);
                }
            }
            // concat own embedding with the aggregate, multiply, ReLU
            std::vector<double> cat(2 * h.cols());
            for (int c = 0; c < h.cols(); ++c) {
                cat[c] = h(i, c);
                cat[h.cols() + c] = agg[c];
            }
            for (int c = 0; c < w.cols(); ++c) {
                double acc = 0.0;
                for (int k = 0; k < w.rows(); ++k) {
                    acc += cat[k] * w(k, c);
                }
                next(i, c) = acc > 0.0 ? acc : 0.0;
            }
        }
        h = std::move(next);
    }
    Matrix probs(n, 2);
    for (int i = 0; i < n; ++i) {
        double o0 = 0.0;
        double o1 = 0.0;
        for (int k = 0; k < h.cols(); ++k) {
            o0 += h(i, k) * p.output_weights(k, 0);
            o1 += h(i, k) * p.output_weights(k, 1);
        }
        const double mx = std::max(o0, o1);
        const double e0 = std::exp(o0 - mx);
        const double e1 = std::exp(o1 - mx);
        probs(i, 0) = e0 / (e0 + e1);
        probs(i, 1) = e1 / (e0 + e1);
    }
    return probs;
}

Matrix random_features(int n, int cols, std::uint64_t seed) {
    Matrix x(n, cols);
    Rng rng(seed);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x.data()[i] = rng.next_real();
    }
    return x;
}

// Objective the analytic gradients must match: clamped BCE plus the L2 term.
double objective(const Graph& g, const Matrix& x, const ModelParams& p,
                 const std::vector<int>& labels, const std::vector<int>& mask, double wd) {
    const auto [table, pred] = forward(g, x, p);
    double reg = 0.0;
    for (const auto& w : p.layer_weights) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            reg += w.data()[i] * w.data()[i];
        }
    }
    for (std::size_t i = 0; i < p.output_weights.size(); ++i) {
        reg += p.output_weights.data()[i] * p.output_weights.data()[i];
    }
    return bce_loss(pred, labels, mask) + 0.5 * wd * reg;
}

struct GradCheckStats {
    double max_rel_error = 0.0;
    int checked = 0;
};

GradCheckStats finite_difference_check(const Graph& g, const Matrix& x, ModelParams& p,
                                       const std::vector<int>& labels,
                                       const std::vector<int>& mask, double wd) {
    const double step = 1e-5;
    const auto [table, pred] = forward(g, x, p);
    const Gradients grads = backward(g, p, table, pred, labels, mask, wd);

    GradCheckStats stats;
    auto check_matrix = [&](Matrix& w, const Matrix& grad) {
        for (std::size_t idx = 0; idx < w.size(); ++idx) {
            const double keep = w.data()[idx];
            w.data()[idx] = keep + step;
            const double up = objective(g, x, p, labels, mask, wd);
            w.data()[idx] = keep - step;
            const double down = objective(g, x, p, labels, mask, wd);
            w.data()[idx] = keep;
            const double numeric = (up - down) / (2.0 * step);
            const double analytic = grad.data()[idx];
            const double rel = std::abs(analytic - numeric) /
                               std::max({1e-6, std::abs(analytic), std::abs(numeric)});
            stats.max_rel_error = std::max(stats.max_rel_error, rel);
            ++stats.checked;
        }
    };
    for (int l = 0; l < p.layer_count; ++l) {
        check_matrix(p.layer_weights[l], grads.layer_weights[l]);
    }
    check_matrix(p.output_weights, grads.output_weights);
    return stats;
}

// Random configuration whose preactivations stay away from the ReLU kink so
// central differences are valid.
struct GradConfig {
    Graph g;
    Matrix x;
    ModelParams p;
    std::vector<int> labels;
    std::vector<int> mask;
};

GradConfig make_grad_config(std::uint64_t seed) {
    for (std::uint64_t attempt = seed;; attempt += 1000003ULL) {
        Rng rng(attempt);
        const int n = 4 + rng.next_int(9);       // <= 12
        const int hidden = 2 + rng.next_int(7);  // <= 8
        GradConfig cfg{generate_er(n, 0.35, attempt + 1), random_features(n, 3, attempt + 2),
                       init_params({3, hidden, 2}, 2, attempt + 3), {}, {}};
        cfg.labels.resize(n);
        Rng label_rng(attempt + 4);
        for (int i = 0; i < n; ++i) {
            cfg.labels[i] = label_rng.next_real() < 0.3 ? 1 : 0;
        }
        cfg.labels[0] = 1;
        for (int i = 0; i < n; i += 2) {
            cfg.mask.push_back(i);
        }
        const auto [table, pred] = forward(cfg.g, cfg.x, cfg.p);
        bool clean = true;
        for (const auto& s : table.preactivation) {
            for (std::size_t i = 0; i < s.size() && clean; ++i) {
                if (std::abs(s.data()[i]) < 1e-4 && s.data()[i] != 0.0) {
                    clean = false;
                }
            }
        }
        if (clean) {
            return cfg;
        }
    }
}

}  // namespace

TEST_CASE("aggregate_neighbors means previous-layer rows") {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    Matrix h(3, 2);
    h(1, 0) = 1.0;  // rows [.,.], [1,0], [0,1]
    h(2, 1) = 1.0;
    const auto mean = aggregate_neighbors(h, g, 0);
    CHECK(mean == std::vector<double>{0.5, 0.5});

    Matrix single(3, 2);
    single(1, 0) = 2.0;
    single(1, 1) = 4.0;
    Graph chain(3);
    chain.add_edge(0, 1);
    CHECK(aggregate_neighbors(single, chain, 0) == std::vector<double>{2.0, 4.0});
    CHECK(aggregate_neighbors(single, chain, 2) == std::vector<double>{0.0, 0.0});  // isolated
}

TEST_CASE("combine concatenates, multiplies, and clamps") {
    Matrix zero(4, 3);
    CHECK(combine({1.0, 2.0}, {3.0, 4.0}, zero) == std::vector<double>{0.0, 0.0, 0.0});

    Matrix identity(4, 4);
    for (int i = 0; i < 4; ++i) {
        identity(i, i) = 1.0;
    }
    CHECK(combine({1.0, -1.0}, {0.5, 0.5}, identity) ==
          std::vector<double>{1.0, 0.0, 0.5, 0.5});  // ReLU clamps the -1

    CHECK_THROWS_AS(combine({1.0}, {1.0, 2.0}, identity), ShapeError);
    CHECK_THROWS_AS(combine({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, identity), ShapeError);
}

TEST_CASE("forward with all-zero weights gives uniform probabilities") {
    const Graph g = test::path_graph(4);
    ModelParams p = init_params({3, 8, 2}, 2, 1);
    for (auto& w : p.layer_weights) {
        w = Matrix(w.rows(), w.cols());
    }
    p.output_weights = Matrix(8, 2);
    const auto [table, pred] = forward(g, random_features(4, 3, 2), p);
    for (int i = 0; i < 4; ++i) {
        CHECK(pred.probabilities(i, 0) == 0.5);
        CHECK(pred.probabilities(i, 1) == 0.5);
        CHECK(pred.predicted[i] == 0);  // tie resolves to normal
    }
}

TEST_CASE("forward maps symmetric nodes to identical rows") {
    const Graph g = test::triangle();
    Matrix x(3, 3);
    for (int i = 0; i < 3; ++i) {
        x(i, 0) = 0.3;
        x(i, 1) = 0.7;
        x(i, 2) = 0.1;
    }
    const ModelParams p = init_params({3, 16, 2}, 2, 5);
    const auto [table, pred] = forward(g, x, p);
    for (int i = 1; i < 3; ++i) {
        CHECK(pred.probabilities(i, 0) == pred.probabilities(0, 0));
        CHECK(pred.probabilities(i, 1) == pred.probabilities(0, 1));
    }
}

TEST_CASE("forward matches a straight-line reimplementation") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Graph g = generate_er(14, 0.3, seed);
        const Matrix x = random_features(14, 3, seed + 10);
        const ModelParams p = init_params({3, 8, 2}, 2, seed + 20);
        const auto [table, pred] = forward(g, x, p);
        const Matrix naive = naive_forward_probs(g, x, p);
        for (int i = 0; i < 14; ++i) {
            for (int c = 0; c < 2; ++c) {
                CHECK(pred.probabilities(i, c) == doctest::Approx(naive(i, c)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("softmax rows sum to one for arbitrary finite logits") {
    const Graph g = generate_er(20, 0.2, 3);
    Rng rng(77);
    ModelParams p = init_params({3, 8, 2}, 2, 4);
    for (auto& w : p.layer_weights) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            w.data()[i] = rng.next_symmetric(40.0);  // widely spread logits
        }
    }
    const auto [table, pred] = forward(g, random_features(20, 3, 5), p);
    for (int i = 0; i < 20; ++i) {
        const double sum = pred.probabilities(i, 0) + pred.probabilities(i, 1);
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        CHECK(pred.probabilities(i, 0) >= 0.0);
        CHECK(pred.probabilities(i, 1) >= 0.0);
    }
}

TEST_CASE("bce_loss analytic examples") {
    Prediction pred;
    pred.probabilities = Matrix(2, 2);
    pred.probabilities(0, 1) = 0.5;
    pred.probabilities(0, 0) = 0.5;
    pred.probabilities(1, 1) = 0.5;
    pred.probabilities(1, 0) = 0.5;
    CHECK(bce_loss(pred, {1, 0}, {0, 1}) == doctest::Approx(std::log(2.0)));

    pred.probabilities(0, 1) = 1.0;  // clamped internally
    CHECK(bce_loss(pred, {1, 0}, {0}) == doctest::Approx(0.0).epsilon(1e-9));

    pred.probabilities(0, 1) = 0.9;
    CHECK(bce_loss(pred, {0, 0}, {0}) == doctest::Approx(-std::log(0.1)));

    CHECK_THROWS_AS(bce_loss(pred, {1, 0}, {}), InvalidConfigError);
}

TEST_CASE("analytic gradients match central finite differences") {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GradConfig cfg = make_grad_config(seed * 7919);
        const auto stats =
            finite_difference_check(cfg.g, cfg.x, cfg.p, cfg.labels, cfg.mask, 5e-4);
        worst = std::max(worst, stats.max_rel_error);
        CHECK(stats.max_rel_error <= 1e-4);
    }
    MESSAGE("max relative gradient error over 10 configs: ", worst);
}

TEST_CASE("saturated correct predictions give near-zero gradients") {
    const Graph g = test::path_graph(4);
    ModelParams p = init_params({3, 4, 2}, 2, 9);
    // All-ones hidden weights blow the embeddings up; the head then drives
    // every logit pair thousands apart, saturating the softmax.
    Matrix x(4, 3);
    for (int i = 0; i < 4; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 1.0;
        x(i, 2) = 1.0;
    }
    for (auto& w : p.layer_weights) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            w.data()[i] = 1.0;
        }
    }
    for (std::size_t i = 0; i < p.output_weights.size(); ++i) {
        const int col = static_cast<int>(i % 2);
        p.output_weights.data()[i] = col == 0 ? 30.0 : -30.0;
    }
    const auto [table, pred] = forward(g, x, p);
    std::vector<int> labels(4, 0);
    for (int i = 0; i < 4; ++i) {
        REQUIRE(pred.predicted[i] == 0);
        REQUIRE(pred.probabilities(i, 1) < 1e-12);
    }
    const Gradients grads = backward(g, p, table, pred, labels, {0, 1, 2, 3}, 0.0);
    double norm = 0.0;
    for (const auto& gm : grads.layer_weights) {
        for (std::size_t i = 0; i < gm.size(); ++i) {
            norm += gm.data()[i] * gm.data()[i];
        }
    }
    for (std::size_t i = 0; i < grads.output_weights.size(); ++i) {
        norm += grads.output_weights.data()[i] * grads.output_weights.data()[i];
    }
    CHECK(std::sqrt(norm) < 1e-6);
}

TEST_CASE("doubling weight decay doubles the decay part of the gradient") {
    GradConfig cfg = make_grad_config(31);
    const auto [table, pred] = forward(cfg.g, cfg.x, cfg.p);
    const Gradients g0 = backward(cfg.g, cfg.p, table, pred, cfg.labels, cfg.mask, 0.0);
    const Gradients g1 = backward(cfg.g, cfg.p, table, pred, cfg.labels, cfg.mask, 1e-3);
    const Gradients g2 = backward(cfg.g, cfg.p, table, pred, cfg.labels, cfg.mask, 2e-3);
    for (std::size_t i = 0; i < g0.output_weights.size(); ++i) {
        const double d1 = g1.output_weights.data()[i] - g0.output_weights.data()[i];
        const double d2 = g2.output_weights.data()[i] - g0.output_weights.data()[i];
        CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-12));
    }
}

TEST_CASE("adam first step moves a parameter by about the learning rate") {
    ModelParams p = init_params({3, 4, 2}, 2, 3);
    AdamState state = init_adam_state(p);
    Gradients grads;
    for (const auto& w : p.layer_weights) {
        grads.layer_weights.emplace_back(w.rows(), w.cols());
    }
    grads.output_weights = Matrix(p.output_weights.rows(), p.output_weights.cols());
    grads.output_weights(0, 0) = 1.0;  // single unit gradient

    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    const double before = p.output_weights(0, 0);
    const double untouched = p.output_weights(1, 1);
    adam_step(p, grads, 1, cfg, state);
    // m_hat = g, v_hat = g^2 => delta = lr * g / (|g| + eps)
    CHECK(p.output_weights(0, 0) == doctest::Approx(before - 0.01).epsilon(1e-6));
    CHECK(p.output_weights(1, 1) == untouched);  // zero gradient, zero moments

    CHECK_THROWS_AS(adam_step(p, grads, 0, cfg, state), InvalidConfigError);
}

TEST_CASE("split_nodes stratifies and is reproducible") {
    TrainConfig cfg;
    cfg.seed = 123;
    std::vector<int> labels(100, 0);
    for (int i = 0; i < 10; ++i) {
        labels[i * 10] = 1;
    }
    const NodeSplit split = split_nodes(100, cfg, labels);
    CHECK(split.train.size() == 60);
    CHECK(split.val.size() == 20);
    CHECK(split.test.size() == 20);
    auto count_shs = [&labels](const std::vector<int>& ids) {
        int c = 0;
        for (int i : ids) {
            c += labels[i];
        }
        return c;
    };
    CHECK(count_shs(split.train) == 6);
    CHECK(count_shs(split.val) == 2);
    CHECK(count_shs(split.test) == 2);

    const NodeSplit again = split_nodes(100, cfg, labels);
    CHECK(again.train == split.train);
    CHECK(again.val == split.val);
    CHECK(again.test == split.test);

    // disjoint and exhaustive
    std::vector<int> all;
    all.insert(all.end(), split.train.begin(), split.train.end());
    all.insert(all.end(), split.val.begin(), split.val.end());
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    for (int i = 0; i < 100; ++i) {
        CHECK(all[i] == i);
    }

    TrainConfig bad = cfg;
    bad.split = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(split_nodes(100, bad, labels), InvalidConfigError);
}

TEST_CASE("training is deterministic and fits the barbell toy") {
    const Graph g = test::barbell7();
    const auto truth = label_top_k(g, 1);
    REQUIRE(truth.spanners == std::vector<int>{3});
    const auto labels = labels_from_spanners(truth.spanners, 7);
    const FeatureMatrix fm = build_features(g);

    TrainConfig cfg;
    cfg.seed = 11;
    cfg.epochs = 200;
    auto [model, log] = train(g, fm, labels, cfg);
    REQUIRE(log.size() == 200);

    // 100% train accuracy within 200 epochs on the separable toy
    const NodeSplit split = split_nodes(7, cfg, labels);
    const FeatureMatrix scaled = normalize(fm);
    const auto [table, pred] = forward(g, scaled.values, model);
    CHECK(accuracy_on(pred, labels, split.train) == 1.0);

    // the cut vertex ranks first when predicting on the same graph
    const ShsResult predicted = predict(g, model, 1);
    CHECK(predicted.spanners == std::vector<int>{3});

    auto [model2, log2] = train(g, fm, labels, cfg);
    CHECK(model_to_json(model2) == model_to_json(model));  // bit-identical run
    REQUIRE(log2.size() == log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        CHECK(log2[i].loss == log[i].loss);
        CHECK(log2[i].val_accuracy == log[i].val_accuracy);
    }
}

TEST_CASE("train with zero epochs returns the initialized model") {
    const Graph g = test::barbell7();
    const auto labels = labels_from_spanners({3}, 7);
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.seed = 2;
    const auto [model, log] = train(g, build_features(g), labels, cfg);
    CHECK(log.empty());
    CHECK(model.meta.best_epoch == -1);
    const ModelParams fresh = init_params({3, 32, 2}, 2, mix_seed(cfg.seed, 0));
    CHECK(model.layer_weights[0] == fresh.layer_weights[0]);
    CHECK(model.output_weights == fresh.output_weights);
}

TEST_CASE("predict handles k = 0 and rejects bad k") {
    const Graph g = test::barbell7();
    const ModelParams p = init_params({3, 32, 2}, 2, 8);
    CHECK(predict(g, p, 0).spanners.empty());
    CHECK_THROWS_AS(predict(g, p, 8), InvalidKError);
    CHECK_THROWS_AS(predict(g, p, -1), InvalidKError);
}

TEST_CASE("permutation equivariance of the forward pass") {
    const Graph g = generate_er(18, 0.25, 21);
    const Matrix x = random_features(18, 3, 22);
    const ModelParams p = init_params({3, 8, 2}, 2, 23);
    const auto [table, pred] = forward(g, x, p);

    // relabel nodes by pi(i) = (i * 7 + 3) mod 18 (a bijection since gcd(7,18)=1)
    std::vector<int> pi(18);
    for (int i = 0; i < 18; ++i) {
        pi[i] = (i * 7 + 3) % 18;
    }
    Graph gp(18);
    for (const auto& [i, j] : g.edges()) {
        gp.add_edge(pi[i], pi[j]);
    }
    Matrix xp(18, 3);
    for (int i = 0; i < 18; ++i) {
        for (int c = 0; c < 3; ++c) {
            xp(pi[i], c) = x(i, c);
        }
    }
    const auto [table_p, pred_p] = forward(gp, xp, p);
    for (int i = 0; i < 18; ++i) {
        for (int c = 0; c < 2; ++c) {
            CHECK(pred_p.probabilities(pi[i], c) ==
                  doctest::Approx(pred.probabilities(i, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("with L=2 an edit beyond the feature horizon cannot change a node") {
    // Influence radius: 2 aggregation hops plus 1 for the ego features. An
    // edit with both endpoints at hop distance >= 4 is bit-invisible; at
    // distance 3 it can leak only by closing a triangle over a hop-2 node.
    int trials = 0;
    for (std::uint64_t seed = 0; trials < 25; ++seed) {
        const Graph g = generate_pa(60, seed + 5);
        const ModelParams p = init_params({3, 16, 2}, 2, seed);
        const auto dist = test::hop_distances(g, 0);

        // find an existing edge fully beyond distance 4 from node 0
        int ei = -1;
        int ej = -1;
        for (const auto& [i, j] : g.edges()) {
            if (dist[i] >= 4 && dist[j] >= 4) {
                ei = i;
                ej = j;
                break;
            }
        }
        if (ei == -1) {
            continue;
        }
        ++trials;

        const FeatureMatrix fm = build_features(g);
        const auto base = forward(g, normalize_with(fm, fm.stats).values, p);

        Graph edited = g;
        edited.remove_edge(ei, ej);
        const FeatureMatrix fm2 = build_features(edited);
        const auto changed = forward(edited, normalize_with(fm2, fm.stats).values, p);

        CHECK(changed.second.probabilities(0, 1) == base.second.probabilities(0, 1));
        CHECK(changed.second.probabilities(0, 0) == base.second.probabilities(0, 0));
    }
    CHECK(trials == 25);
}

TEST_CASE("predict's lean inference path equals forward bit-for-bit") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = seed % 2 == 0 ? generate_pa(90, seed) : generate_er(70, 0.1, seed);
        ModelParams p = init_params({3, 32, 2}, 2, seed + 60);
        const FeatureMatrix fm = build_features(g);
        p.feature_stats = fm.stats;

        const auto [table, reference] = forward(g, normalize(fm).values, p);
        Prediction lean;
        predict_with(g, p, 3, &lean, nullptr);
        CHECK(lean.probabilities == reference.probabilities);
        CHECK(lean.predicted == reference.predicted);
    }
}

TEST_CASE("model JSON round trip reproduces the forward pass bit-exactly") {
    const Graph g = generate_er(25, 0.2, 33);
    const auto labels = labels_from_spanners(label_top_k(g, 4).spanners, 25);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 44;
    const auto [model, log] = train(g, build_features(g), labels, cfg);

    const std::string path = "test_model_tmp.json";
    save_model(model, path);
    const ModelParams loaded = load_model(path);
    std::remove(path.c_str());

    CHECK(loaded.layer_weights[0] == model.layer_weights[0]);
    CHECK(loaded.layer_weights[1] == model.layer_weights[1]);
    CHECK(loaded.output_weights == model.output_weights);
    CHECK(loaded.feature_stats == model.feature_stats);

    const FeatureMatrix fm = build_features(g);
    const auto a = forward(g, normalize_with(fm, model.feature_stats).values, model);
    const auto b = forward(g, normalize_with(fm, loaded.feature_stats).values, loaded);
    CHECK(a.second.probabilities == b.second.probabilities);
}

TEST_CASE("forward reports non-finite intermediates with the layer index") {
    const Graph g = test::path_graph(3);
    ModelParams p = init_params({3, 4, 2}, 2, 6);
    p.layer_weights[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
    Matrix x = random_features(3, 3, 7);
    CHECK_THROWS_WITH_AS(forward(g, x, p), doctest::Contains("layer 2"), NumericError);
}
