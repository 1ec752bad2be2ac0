#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lstmlrp/explain.hpp"
#include "lstmlrp/model.hpp"

// Desk-scale trainer: softmax cross-entropy, plain SGD with per-component
// gradient clipping, deterministic for a given seed. Embeddings are trained
// jointly with the rest of the parameters.

namespace lstmlrp {

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 10;
    double clip = 5.0;            // per-component gradient clamp
    std::uint64_t seed = 1;
    double init_scale = 0.1;      // uniform [-s, s] initialization

    void validate() const {
        if (learning_rate <= 0.0) throw dimension_error("learning rate must be > 0");
        if (clip <= 0.0) throw dimension_error("clip threshold must be > 0");
        if (epochs < 0) throw dimension_error("epoch count must be >= 0");
    }
};

struct EpochStats {
    int epoch = 0;  // 0 is the untrained starting point
    double loss = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;  // NaN when no test corpus was given
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStats> log;
};

inline Vector softmax(const Vector& scores) {
    const double m = *std::max_element(scores.begin(), scores.end());
    Vector p(scores.size());
    double z = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        p[i] = std::exp(scores[i] - m);
        z += p[i];
    }
    for (double& x : p) x /= z;
    return p;
}

inline double cross_entropy(const Vector& scores, int label) {
    const Vector p = softmax(scores);
    return -std::log(std::max(p[label], 1e-300));
}

namespace detail {

inline void fill_uniform(std::mt19937_64& rng, double scale, Matrix& m) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (double& x : m.a) x = dist(rng);
}

inline void fill_uniform(std::mt19937_64& rng, double scale, Vector& v) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (double& x : v) x = dist(rng);
}

inline void init_lstm(std::mt19937_64& rng, double scale, int h, int e, LstmParams& p) {
    p.W_i = Matrix(h, h); p.W_f = Matrix(h, h); p.W_o = Matrix(h, h); p.W_g = Matrix(h, h);
    p.U_i = Matrix(h, e); p.U_f = Matrix(h, e); p.U_o = Matrix(h, e); p.U_g = Matrix(h, e);
    p.b_i.assign(h, 0.0); p.b_f.assign(h, 0.0); p.b_o.assign(h, 0.0); p.b_g.assign(h, 0.0);
    for (Matrix* m : {&p.W_i, &p.W_f, &p.W_o, &p.W_g, &p.U_i, &p.U_f, &p.U_o, &p.U_g})
        fill_uniform(rng, scale, *m);
    for (Vector* v : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) fill_uniform(rng, scale, *v);
}

inline void sgd_step(Matrix& param, const Matrix& grad, double lr, double clip) {
    for (size_t k = 0; k < param.a.size(); ++k)
        param.a[k] -= lr * std::clamp(grad.a[k], -clip, clip);
}

inline void sgd_step(Vector& param, const Vector& grad, double lr, double clip) {
    for (size_t k = 0; k < param.size(); ++k)
        param[k] -= lr * std::clamp(grad[k], -clip, clip);
}

inline void sgd_step_lstm(LstmParams& p, const LstmGrads& g, double lr, double clip) {
    sgd_step(p.W_i, g.W_i, lr, clip); sgd_step(p.W_f, g.W_f, lr, clip);
    sgd_step(p.W_o, g.W_o, lr, clip); sgd_step(p.W_g, g.W_g, lr, clip);
    sgd_step(p.U_i, g.U_i, lr, clip); sgd_step(p.U_f, g.U_f, lr, clip);
    sgd_step(p.U_o, g.U_o, lr, clip); sgd_step(p.U_g, g.U_g, lr, clip);
    sgd_step(p.b_i, g.b_i, lr, clip); sgd_step(p.b_f, g.b_f, lr, clip);
    sgd_step(p.b_o, g.b_o, lr, clip); sgd_step(p.b_g, g.b_g, lr, clip);
}

}  // namespace detail

// Fresh model with all parameters (embeddings included) uniform in [-s, s].
inline ModelParams init_model(int embed_dim, int hidden_dim, int class_count,
                              const std::vector<std::string>& vocab_tokens, std::uint64_t seed,
                              double init_scale = 0.1) {
    if (embed_dim <= 0 || hidden_dim <= 0 || class_count <= 0)
        throw dimension_error("model dimensions must be positive");
    std::mt19937_64 rng(seed);
    ModelParams p;
    detail::init_lstm(rng, init_scale, hidden_dim, embed_dim, p.left);
    detail::init_lstm(rng, init_scale, hidden_dim, embed_dim, p.right);
    p.vocab = Vocabulary::from_tokens(vocab_tokens);
    p.embeddings = Matrix(p.vocab.size(), embed_dim);
    detail::fill_uniform(rng, init_scale, p.embeddings);
    p.W_out = Matrix(class_count, 2 * hidden_dim);
    detail::fill_uniform(rng, init_scale, p.W_out);
    p.b_out.assign(class_count, 0.0);
    detail::fill_uniform(rng, init_scale, p.b_out);
    p.validate();
    return p;
}

// Mean cross-entropy and accuracy over a labeled corpus.
inline std::pair<double, double> evaluate(const ModelParams& params, const Corpus& corpus) {
    if (corpus.sentences.empty()) throw dimension_error("evaluate: empty corpus");
    double loss = 0.0;
    int correct = 0;
    for (const Sentence& s : corpus.sentences) {
        const ForwardTrace tr = forward(params, s);
        loss += cross_entropy(tr.scores, s.label);
        if (predict_from_scores(tr.scores) == s.label) ++correct;
    }
    return {loss / corpus.size(), static_cast<double>(correct) / corpus.size()};
}

inline double accuracy(const ModelParams& params, const Corpus& corpus) {
    return evaluate(params, corpus).second;
}

// SGD over per-sentence updates. The log starts with the untrained epoch-0
// row; `test` may be null. Throws divergence_error when the loss goes
// non-finite, carrying the epoch index.
inline TrainResult train(ModelParams params, const Corpus& train_corpus, const Corpus* test,
                         const TrainConfig& cfg) {
    cfg.validate();
    params.validate();
    for (const Sentence& s : train_corpus.sentences) {
        if (s.label < 0 || s.label >= params.class_count())
            throw dimension_error("train: corpus label out of range");
        if (s.tokens.empty()) throw dimension_error("train: empty sentence");
    }

    TrainResult result;
    auto log_epoch = [&](int epoch, const ModelParams& p) {
        auto [loss, acc] = evaluate(p, train_corpus);
        EpochStats st;
        st.epoch = epoch;
        st.loss = loss;
        st.train_accuracy = acc;
        st.test_accuracy = test ? accuracy(p, *test) : std::nan("");
        if (!std::isfinite(loss))
            throw divergence_error("training diverged: non-finite loss at epoch " +
                                   std::to_string(epoch), epoch);
        result.log.push_back(st);
    };
    log_epoch(0, params);

    std::mt19937_64 rng(cfg.seed);
    std::vector<int> order(train_corpus.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int idx : order) {
            const Sentence& s = train_corpus.sentences[idx];
            const std::vector<Vector> xs = embed(params, s);
            const ForwardTrace tr = forward_from_embeddings(params, xs);

            Vector dscores = softmax(tr.scores);
            dscores[s.label] -= 1.0;

            ModelGrads grads = ModelGrads::zeros_like(params);
            const InputGradients dx = backward_scores(tr, params, dscores, &grads);

            detail::sgd_step_lstm(params.left, grads.left, cfg.learning_rate, cfg.clip);
            detail::sgd_step_lstm(params.right, grads.right, cfg.learning_rate, cfg.clip);
            detail::sgd_step(params.W_out, grads.W_out, cfg.learning_rate, cfg.clip);
            detail::sgd_step(params.b_out, grads.b_out, cfg.learning_rate, cfg.clip);

            // embeddings: only touched rows move
            for (size_t t = 0; t < s.tokens.size(); ++t) {
                if (s.tokens[t] == kDeletedToken) continue;
                const int row = params.vocab.lookup(s.tokens[t]);
                for (int d = 0; d < params.embed_dim(); ++d)
                    params.embeddings(row, d) -=
                        cfg.learning_rate * std::clamp(dx.total[t][d], -cfg.clip, cfg.clip);
            }
        }
        log_epoch(epoch, params);
    }
    result.params = std::move(params);
    return result;
}

inline std::string format_train_log(const std::vector<EpochStats>& log) {
    std::string out;
    char buf[160];
    for (const EpochStats& st : log) {
        if (std::isnan(st.test_accuracy))
            std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t-\n", st.epoch, st.loss,
                          st.train_accuracy);
        else
            std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t%.6f\n", st.epoch, st.loss,
                          st.train_accuracy, st.test_accuracy);
        out += buf;
    }
    return out;
}

}  // namespace lstmlrp
