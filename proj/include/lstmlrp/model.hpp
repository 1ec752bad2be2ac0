#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lstmlrp/numerics.hpp"

// Bi-directional LSTM sentence classifier. One LSTM reads the embedded
// tokens in original order, a second one reads them reversed; the two final
// hidden states are concatenated and mapped linearly to one raw prediction
// score per class. No softmax here: the score f_c itself is what the
// attribution methods decompose.

namespace lstmlrp {

inline constexpr std::string_view kUnknownToken = "<unk>";
// Deletion marker: embeds to the all-zero vector, is never part of a vocabulary.
inline constexpr std::string_view kDeletedToken = "<del>";

struct Vocabulary {
    std::vector<std::string> tokens;                 // row order of the embedding table
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(tokens.size()); }

    // Row for a token, falling back to the unknown-token row.
    int lookup(const std::string& token) const {
        auto it = index.find(token);
        if (it != index.end()) return it->second;
        auto unk = index.find(std::string(kUnknownToken));
        if (unk == index.end()) throw dimension_error("vocabulary has no <unk> entry");
        return unk->second;
    }

    static Vocabulary from_tokens(const std::vector<std::string>& toks) {
        Vocabulary v;
        v.tokens.reserve(toks.size());
        for (const auto& t : toks) {
            if (v.index.count(t)) throw dimension_error("duplicate vocabulary token: " + t);
            v.index.emplace(t, v.size());
            v.tokens.push_back(t);
        }
        return v;
    }
};

struct Sentence {
    std::vector<std::string> tokens;
    int label = -1;  // class index, or -1 when unlabeled

    bool labeled() const { return label >= 0; }
};

struct Corpus {
    std::vector<Sentence> sentences;

    int size() const { return static_cast<int>(sentences.size()); }

    // Sorted unique tokens, <unk> first: the embedding-table layout used by the trainer.
    std::vector<std::string> vocabulary_tokens() const {
        std::set<std::string> uniq;
        for (const auto& s : sentences) uniq.insert(s.tokens.begin(), s.tokens.end());
        uniq.erase(std::string(kUnknownToken));
        std::vector<std::string> out;
        out.reserve(uniq.size() + 1);
        out.emplace_back(kUnknownToken);
        out.insert(out.end(), uniq.begin(), uniq.end());
        return out;
    }
};

// One direction's weights; W_* act on h_{t-1} (HxH), U_* on x_t (HxE).
struct LstmParams {
    Matrix W_i, W_f, W_o, W_g;
    Matrix U_i, U_f, U_o, U_g;
    Vector b_i, b_f, b_o, b_g;

    int hidden_dim() const { return W_i.rows; }
    int input_dim() const { return U_i.cols; }

    void validate() const {
        const int h = hidden_dim();
        const int e = input_dim();
        for (const Matrix* m : {&W_i, &W_f, &W_o, &W_g})
            if (m->rows != h || m->cols != h) throw dimension_error("LSTM W matrix is not HxH");
        for (const Matrix* m : {&U_i, &U_f, &U_o, &U_g})
            if (m->rows != h || m->cols != e) throw dimension_error("LSTM U matrix is not HxE");
        for (const Vector* b : {&b_i, &b_f, &b_o, &b_g})
            if (static_cast<int>(b->size()) != h) throw dimension_error("LSTM bias is not length H");
    }
};

struct ModelParams {
    LstmParams left;    // reads tokens in original order
    LstmParams right;   // reads tokens in reversed order
    Matrix embeddings;  // V x E, rows keyed by vocab
    Vocabulary vocab;
    Matrix W_out;       // C x 2H, columns ordered (left final state, right final state)
    Vector b_out;       // C

    int embed_dim() const { return embeddings.cols; }
    int hidden_dim() const { return left.hidden_dim(); }
    int class_count() const { return static_cast<int>(b_out.size()); }

    void validate() const {
        left.validate();
        right.validate();
        if (right.hidden_dim() != hidden_dim() || right.input_dim() != embed_dim() ||
            left.input_dim() != embed_dim())
            throw dimension_error("left/right LSTM dimensions disagree");
        if (embeddings.rows != vocab.size())
            throw dimension_error("embedding row count does not match vocabulary size");
        if (W_out.cols != 2 * hidden_dim())
            throw dimension_error("W_out column count must equal 2H");
        if (W_out.rows != class_count())
            throw dimension_error("W_out row count must equal class count");
    }
};

// Everything one direction's forward pass computed, kept for attribution.
// Index t-1 holds timestep t in this direction's own consumption order.
struct DirectionTrace {
    std::vector<Vector> i, f, o, g;                   // gate activations
    std::vector<Vector> ipre, fpre, opre, gpre;       // gate pre-activations
    std::vector<Vector> c, h;                         // cell and hidden states

    int steps() const { return static_cast<int>(h.size()); }
};

struct ForwardTrace {
    std::vector<Vector> inputs;  // embeddings x_1..x_T in original order
    DirectionTrace left;
    DirectionTrace right;        // consumed inputs are the reverse of `inputs`
    Vector concat_hidden;        // [h_left_T ; h_right_T]
    Vector scores;               // f(x), length C, raw linear outputs

    int steps() const { return static_cast<int>(inputs.size()); }
};

// Token embeddings; the deletion marker maps to the zero vector, anything
// out of vocabulary maps to the <unk> row.
inline std::vector<Vector> embed(const ModelParams& params, const Sentence& sentence) {
    if (sentence.tokens.empty()) throw dimension_error("cannot embed an empty sentence");
    std::vector<Vector> xs;
    xs.reserve(sentence.tokens.size());
    for (const auto& tok : sentence.tokens) {
        if (tok == kDeletedToken) {
            xs.emplace_back(params.embed_dim(), 0.0);
            continue;
        }
        const int row = params.vocab.lookup(tok);
        Vector x(params.embed_dim());
        for (int d = 0; d < params.embed_dim(); ++d) x[d] = params.embeddings(row, d);
        xs.push_back(std::move(x));
    }
    return xs;
}

//   i_t = sigm(W_i h_{t-1} + U_i x_t + b_i)        f_t, o_t likewise
//   g_t = tanh(W_g h_{t-1} + U_g x_t + b_g)
//   c_t = f_t (.) c_{t-1} + i_t (.) g_t
//   h_t = o_t (.) tanh(c_t)
// with h_0 = c_0 = 0.
inline DirectionTrace forward_lstm(const LstmParams& params, const std::vector<Vector>& inputs) {
    if (inputs.empty()) throw dimension_error("forward_lstm: empty input sequence");
    params.validate();
    const int h_dim = params.hidden_dim();
    const int steps = static_cast<int>(inputs.size());

    DirectionTrace tr;
    for (auto* v : {&tr.i, &tr.f, &tr.o, &tr.g, &tr.ipre, &tr.fpre, &tr.opre, &tr.gpre, &tr.c, &tr.h})
        v->reserve(steps);

    Vector h_prev(h_dim, 0.0);
    Vector c_prev(h_dim, 0.0);
    for (int t = 0; t < steps; ++t) {
        const Vector& x = inputs[t];
        if (static_cast<int>(x.size()) != params.input_dim())
            throw dimension_error("forward_lstm: input vector has wrong length");
        try {
            Vector ipre = add(add(matvec(params.W_i, h_prev), matvec(params.U_i, x)), params.b_i);
            Vector fpre = add(add(matvec(params.W_f, h_prev), matvec(params.U_f, x)), params.b_f);
            Vector opre = add(add(matvec(params.W_o, h_prev), matvec(params.U_o, x)), params.b_o);
            Vector gpre = add(add(matvec(params.W_g, h_prev), matvec(params.U_g, x)), params.b_g);
            Vector i = sigm(ipre);
            Vector f = sigm(fpre);
            Vector o = sigm(opre);
            Vector g = tanh(gpre);
            Vector c = add(hadamard(f, c_prev), hadamard(i, g));
            Vector h = hadamard(o, tanh(c));
            tr.ipre.push_back(std::move(ipre));
            tr.fpre.push_back(std::move(fpre));
            tr.opre.push_back(std::move(opre));
            tr.gpre.push_back(std::move(gpre));
            tr.i.push_back(std::move(i));
            tr.f.push_back(std::move(f));
            tr.o.push_back(std::move(o));
            tr.g.push_back(std::move(g));
            c_prev = c;
            h_prev = h;
            tr.c.push_back(std::move(c));
            tr.h.push_back(std::move(h));
        } catch (const numeric_error& e) {
            throw numeric_error(std::string(e.what()) + " at timestep " + std::to_string(t + 1),
                                t + 1);
        }
    }
    return tr;
}

inline ForwardTrace forward_from_embeddings(const ModelParams& params, std::vector<Vector> inputs) {
    if (inputs.empty()) throw dimension_error("forward: empty input sequence");
    params.validate();
    ForwardTrace tr;
    tr.left = forward_lstm(params.left, inputs);
    std::vector<Vector> reversed(inputs.rbegin(), inputs.rend());
    tr.right = forward_lstm(params.right, reversed);
    tr.concat_hidden = concat(tr.left.h.back(), tr.right.h.back());
    tr.scores = add(matvec(params.W_out, tr.concat_hidden), params.b_out);
    tr.inputs = std::move(inputs);
    return tr;
}

inline ForwardTrace forward(const ModelParams& params, const Sentence& sentence) {
    return forward_from_embeddings(params, embed(params, sentence));
}

inline int predict_from_scores(const Vector& scores) { return argmax(scores); }

inline int predict(const ModelParams& params, const Sentence& sentence) {
    return predict_from_scores(forward(params, sentence).scores);
}

inline std::vector<std::string> default_class_names(int class_count) {
    if (class_count == 5)
        return {"very negative", "negative", "neutral", "positive", "very positive"};
    std::vector<std::string> names;
    names.reserve(class_count);
    for (int c = 0; c < class_count; ++c) names.push_back("class " + std::to_string(c));
    return names;
}

}  // namespace lstmlrp
