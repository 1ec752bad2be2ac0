#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lstmlrp/model.hpp"
#include "lstmlrp/numerics.hpp"

// Input attribution for the bi-LSTM classifier. Two methods share the
// forward trace:
//   - sensitivity analysis: R_d = (d f_c / d x_d)^2 from an exact
//     reverse-mode pass through the recurrence;
//   - relevance propagation: f_c(x) is redistributed backwards with the
//     weighted-connection rule (eps stabilizer, optional bias share delta)
//     and the gate/source rule for two-way products.

namespace lstmlrp {

enum class attribution_method { sa, lrp };

inline const char* method_name(attribution_method m) {
    return m == attribution_method::sa ? "sa" : "lrp";
}

struct LrpConfig {
    int target_class = 0;
    double epsilon = 0.001;
    double delta = 0.0;  // 1.0 redistributes the bias share (conserving variant)

    void validate(int class_count) const {
        if (target_class < 0 || target_class >= class_count)
            throw dimension_error("target class " + std::to_string(target_class) +
                                  " out of range [0," + std::to_string(class_count) + ")");
        if (epsilon < 0.0) throw dimension_error("epsilon must be non-negative");
        if (delta != 0.0 && delta != 1.0) throw dimension_error("delta must be exactly 0.0 or 1.0");
    }
};

struct RelevanceResult {
    attribution_method method = attribution_method::lrp;
    int target_class = 0;
    std::vector<double> word_relevances;   // per token: sum over embedding dimensions
    std::vector<Vector> input_relevances;  // per token: R_d over the embedding
    std::vector<double> left_share;        // per token, through the original-order encoder
    std::vector<double> right_share;       // per token, through the reversed-order encoder
    double output_relevance = 0.0;         // total relevance seeded at the output layer
    double input_relevance = 0.0;          // total arriving at the input embeddings
    double boundary_absorbed = 0.0;        // landed on the zero initial states h_0/c_0
    double gate_relevance_max_abs = 0.0;   // max |R| assigned to any i/f/o gate neuron
};

// ---------------------------------------------------------------------------
// Exact gradients
// ---------------------------------------------------------------------------

struct LstmGrads {
    Matrix W_i, W_f, W_o, W_g;
    Matrix U_i, U_f, U_o, U_g;
    Vector b_i, b_f, b_o, b_g;

    static LstmGrads zeros_like(const LstmParams& p) {
        LstmGrads g;
        const int h = p.hidden_dim(), e = p.input_dim();
        g.W_i = Matrix(h, h); g.W_f = Matrix(h, h); g.W_o = Matrix(h, h); g.W_g = Matrix(h, h);
        g.U_i = Matrix(h, e); g.U_f = Matrix(h, e); g.U_o = Matrix(h, e); g.U_g = Matrix(h, e);
        g.b_i.assign(h, 0.0); g.b_f.assign(h, 0.0); g.b_o.assign(h, 0.0); g.b_g.assign(h, 0.0);
        return g;
    }
};

struct ModelGrads {
    LstmGrads left, right;
    Matrix W_out;
    Vector b_out;

    static ModelGrads zeros_like(const ModelParams& p) {
        ModelGrads g;
        g.left = LstmGrads::zeros_like(p.left);
        g.right = LstmGrads::zeros_like(p.right);
        g.W_out = Matrix(p.W_out.rows, p.W_out.cols);
        g.b_out.assign(p.b_out.size(), 0.0);
        return g;
    }
};

struct InputGradients {
    std::vector<Vector> total;  // d f / d x_t, per original token position
    std::vector<Vector> left;   // contribution through the left encoder
    std::vector<Vector> right;  // contribution through the right encoder
};

namespace detail {

inline void accumulate_outer(Matrix& m, const Vector& u, const Vector& v) {
    for (int r = 0; r < m.rows; ++r) {
        double* row = m.a.data() + static_cast<size_t>(r) * m.cols;
        const double s = u[r];
        for (int c = 0; c < m.cols; ++c) row[c] += s * v[c];
    }
}

inline void accumulate(Vector& acc, const Vector& v) {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

// Reverse pass over one direction's recurrence. `inputs` must be the
// sequence this direction consumed; dx comes back in the same order.
inline std::vector<Vector> backward_lstm(const LstmParams& p, const DirectionTrace& tr,
                                         const std::vector<Vector>& inputs, Vector dh,
                                         LstmGrads* grads = nullptr) {
    const int h_dim = p.hidden_dim();
    const int steps = tr.steps();
    std::vector<Vector> dx(steps);
    Vector dc(h_dim, 0.0);
    for (int t = steps - 1; t >= 0; --t) {
        static const Vector kEmpty;
        const Vector& c_prev = t > 0 ? tr.c[t - 1] : kEmpty;
        const Vector& h_prev = t > 0 ? tr.h[t - 1] : kEmpty;

        Vector dipre(h_dim), dfpre(h_dim), dopre(h_dim), dgpre(h_dim);
        for (int d = 0; d < h_dim; ++d) {
            const double th = std::tanh(tr.c[t][d]);
            const double dcell = dc[d] + dh[d] * tr.o[t][d] * (1.0 - th * th);
            const double dout = dh[d] * th;
            const double cp = t > 0 ? c_prev[d] : 0.0;
            dipre[d] = dcell * tr.g[t][d] * tr.i[t][d] * (1.0 - tr.i[t][d]);
            dfpre[d] = dcell * cp * tr.f[t][d] * (1.0 - tr.f[t][d]);
            dopre[d] = dout * tr.o[t][d] * (1.0 - tr.o[t][d]);
            dgpre[d] = dcell * tr.i[t][d] * (1.0 - tr.g[t][d] * tr.g[t][d]);
            dc[d] = dcell * tr.f[t][d];
        }

        Vector dxt = matvec_transpose(p.U_i, dipre);
        accumulate(dxt, matvec_transpose(p.U_f, dfpre));
        accumulate(dxt, matvec_transpose(p.U_o, dopre));
        accumulate(dxt, matvec_transpose(p.U_g, dgpre));
        dx[t] = std::move(dxt);

        Vector dh_prev = matvec_transpose(p.W_i, dipre);
        accumulate(dh_prev, matvec_transpose(p.W_f, dfpre));
        accumulate(dh_prev, matvec_transpose(p.W_o, dopre));
        accumulate(dh_prev, matvec_transpose(p.W_g, dgpre));

        if (grads) {
            if (t > 0) {
                accumulate_outer(grads->W_i, dipre, h_prev);
                accumulate_outer(grads->W_f, dfpre, h_prev);
                accumulate_outer(grads->W_o, dopre, h_prev);
                accumulate_outer(grads->W_g, dgpre, h_prev);
            }
            accumulate_outer(grads->U_i, dipre, inputs[t]);
            accumulate_outer(grads->U_f, dfpre, inputs[t]);
            accumulate_outer(grads->U_o, dopre, inputs[t]);
            accumulate_outer(grads->U_g, dgpre, inputs[t]);
            accumulate(grads->b_i, dipre);
            accumulate(grads->b_f, dfpre);
            accumulate(grads->b_o, dopre);
            accumulate(grads->b_g, dgpre);
        }
        dh = std::move(dh_prev);
    }
    return dx;
}

}  // namespace detail

// Gradients of dot(dscores, f(x)) w.r.t. every input embedding, optionally
// accumulating parameter gradients for the trainer.
inline InputGradients backward_scores(const ForwardTrace& trace, const ModelParams& params,
                                      const Vector& dscores, ModelGrads* grads = nullptr) {
    if (static_cast<int>(dscores.size()) != params.class_count())
        throw dimension_error("backward_scores: seed length must equal class count");
    const int h_dim = params.hidden_dim();
    const int steps = trace.steps();

    const Vector dconcat = matvec_transpose(params.W_out, dscores);
    Vector dh_left(dconcat.begin(), dconcat.begin() + h_dim);
    Vector dh_right(dconcat.begin() + h_dim, dconcat.end());

    if (grads) {
        detail::accumulate_outer(grads->W_out, dscores, trace.concat_hidden);
        detail::accumulate(grads->b_out, dscores);
    }

    InputGradients out;
    out.left = detail::backward_lstm(params.left, trace.left, trace.inputs, std::move(dh_left),
                                     grads ? &grads->left : nullptr);
    std::vector<Vector> reversed(trace.inputs.rbegin(), trace.inputs.rend());
    std::vector<Vector> dx_right = detail::backward_lstm(
        params.right, trace.right, reversed, std::move(dh_right), grads ? &grads->right : nullptr);

    // map the reversed-order gradients back to original positions
    out.right.resize(steps);
    for (int t = 0; t < steps; ++t) out.right[t] = std::move(dx_right[steps - 1 - t]);

    out.total.resize(steps);
    for (int t = 0; t < steps; ++t) out.total[t] = add(out.left[t], out.right[t]);
    return out;
}

// d f_c / d x_t for every input embedding dimension.
inline InputGradients backward_gradients(const ForwardTrace& trace, const ModelParams& params,
                                         int target_class) {
    if (target_class < 0 || target_class >= params.class_count())
        throw dimension_error("backward_gradients: class index out of range");
    Vector seed(params.class_count(), 0.0);
    seed[target_class] = 1.0;
    return backward_scores(trace, params, seed);
}

// ---------------------------------------------------------------------------
// Sensitivity analysis
// ---------------------------------------------------------------------------

// R_d = (d f_c / d x_d)^2. The per-encoder shares split the square via
// g_left*(g_left+g_right) and g_right*(g_left+g_right) so that shares add up
// to the full squared gradient per dimension.
inline RelevanceResult sa_relevance(const ForwardTrace& trace, const ModelParams& params,
                                    int target_class) {
    const InputGradients g = backward_gradients(trace, params, target_class);
    const int steps = trace.steps();

    RelevanceResult res;
    res.method = attribution_method::sa;
    res.target_class = target_class;
    res.word_relevances.resize(steps);
    res.input_relevances.resize(steps);
    res.left_share.assign(steps, 0.0);
    res.right_share.assign(steps, 0.0);

    double total = 0.0;
    for (int t = 0; t < steps; ++t) {
        const Vector& gt = g.total[t];
        Vector r(gt.size());
        double word = 0.0, ls = 0.0, rs = 0.0;
        for (size_t d = 0; d < gt.size(); ++d) {
            r[d] = gt[d] * gt[d];
            word += r[d];
            ls += g.left[t][d] * gt[d];
            rs += g.right[t][d] * gt[d];
        }
        res.input_relevances[t] = std::move(r);
        res.word_relevances[t] = word;
        res.left_share[t] = ls;
        res.right_share[t] = rs;
        total += word;
    }
    res.output_relevance = total;
    res.input_relevance = total;
    return res;
}

// ---------------------------------------------------------------------------
// Relevance propagation rules
// ---------------------------------------------------------------------------

// Weighted-connection rule. The upper layer must satisfy
// z_upper = weights * z_lower + bias; each message is
//   R_{i<-j} = (z_i w_ij + (eps sign(z_j) + delta b_j) / lower_count)
//              / (z_j + eps sign(z_j)) * R_j
// with sign(0) = +1, and R_i sums the incoming messages. lower_count is the
// number of lower-layer neurons z_j is connected to; the eps/delta correction
// is spread over all of them. Upper neurons with R_j == 0 contribute nothing.
inline Vector lrp_linear(const Vector& z_lower, const Matrix& weights, const Vector& bias,
                         const Vector& z_upper, const Vector& r_upper, double eps, double delta,
                         int lower_count) {
    const int upper = static_cast<int>(z_upper.size());
    const int lower = static_cast<int>(z_lower.size());
    if (weights.rows != upper || weights.cols != lower)
        throw dimension_error("lrp_linear: weight shape does not match layer sizes");
    if (static_cast<int>(bias.size()) != upper || static_cast<int>(r_upper.size()) != upper)
        throw dimension_error("lrp_linear: bias/relevance length must equal upper layer size");
    if (lower_count <= 0) throw dimension_error("lrp_linear: lower_count must be positive");

    // guards mis-wiring: the caller's values must reproduce the forward pass
    const Vector recomputed = add(matvec(weights, z_lower), bias);
    for (int j = 0; j < upper; ++j)
        if (std::abs(recomputed[j] - z_upper[j]) > 1e-9)
            throw consistency_error("lrp_linear: z_upper[" + std::to_string(j) +
                                    "] does not match weights*z_lower + bias (|diff|=" +
                                    std::to_string(std::abs(recomputed[j] - z_upper[j])) + ")");

    Vector r_lower(lower, 0.0);
    for (int j = 0; j < upper; ++j) {
        if (r_upper[j] == 0.0) continue;
        const double sgn = z_upper[j] >= 0.0 ? 1.0 : -1.0;
        const double correction = (eps * sgn + delta * bias[j]) / lower_count;
        const double scale = r_upper[j] / (z_upper[j] + eps * sgn);
        const double* row = weights.a.data() + static_cast<size_t>(j) * lower;
        for (int i = 0; i < lower; ++i) r_lower[i] += (z_lower[i] * row[i] + correction) * scale;
    }
    return r_lower;
}

// Two-way product rule: the sigmoid-valued gate factor gets zero, the source
// factor inherits the full relevance.
enum class gate_position { first, second };

inline std::pair<double, double> lrp_multiplicative(double r_upper, gate_position gate) {
    return gate == gate_position::first ? std::make_pair(0.0, r_upper)
                                        : std::make_pair(r_upper, 0.0);
}

inline std::pair<Vector, Vector> lrp_multiplicative(const Vector& r_upper, gate_position gate) {
    Vector zero(r_upper.size(), 0.0);
    return gate == gate_position::first ? std::make_pair(std::move(zero), r_upper)
                                        : std::make_pair(r_upper, std::move(zero));
}

// ---------------------------------------------------------------------------
// LSTM wiring of the two rules
// ---------------------------------------------------------------------------

struct LstmRelevance {
    std::vector<Vector> input;             // per consumed timestep, length E
    double boundary_cell = 0.0;            // relevance landing on c_0
    double boundary_hidden = 0.0;          // relevance landing on h_0
    std::vector<Vector> gate_i, gate_f, gate_o;  // per timestep; zero by the product rule
};

// Backward over t = T..1:
//   (a) h_t = o_t (.) tanh(c_t): product rule, tanh transparent -> all onto c_t
//   (b) c_t = f_t (.) c_{t-1} + i_t (.) g_t: weighted connection over the two
//       products (unit weights, no bias, lower_count 2H), then product rule on
//       each: c_{t-1} and g_t inherit, f_t and i_t get zero
//   (c) relevance on g_t redistributes over [h_{t-1}; x_t] through the
//       pre-activation's weights [W_g U_g] and bias b_g, lower_count H+E
// Relevance flowing to h_{t-1} joins the next iteration; whatever reaches the
// zero initial states is reported as boundary absorption.
inline LstmRelevance lrp_lstm(const DirectionTrace& trace, const LstmParams& params,
                              const std::vector<Vector>& inputs, const Vector& r_final_hidden,
                              double eps, double delta) {
    const int h_dim = params.hidden_dim();
    const int e_dim = params.input_dim();
    const int steps = trace.steps();
    if (static_cast<int>(inputs.size()) != steps)
        throw dimension_error("lrp_lstm: trace and inputs disagree on length");
    if (static_cast<int>(r_final_hidden.size()) != h_dim)
        throw dimension_error("lrp_lstm: relevance seed must have length H");

    // H x 2H block [I I]: each c_t dimension sums its two product terms
    Matrix sum_weights(h_dim, 2 * h_dim);
    for (int d = 0; d < h_dim; ++d) {
        sum_weights(d, d) = 1.0;
        sum_weights(d, h_dim + d) = 1.0;
    }
    // H x (H+E) block [W_g U_g]
    Matrix gate_weights(h_dim, h_dim + e_dim);
    for (int r = 0; r < h_dim; ++r) {
        for (int k = 0; k < h_dim; ++k) gate_weights(r, k) = params.W_g(r, k);
        for (int k = 0; k < e_dim; ++k) gate_weights(r, h_dim + k) = params.U_g(r, k);
    }
    const Vector no_bias(h_dim, 0.0);
    const Vector zeros_h(h_dim, 0.0);

    LstmRelevance out;
    out.input.resize(steps);
    out.gate_i.resize(steps);
    out.gate_f.resize(steps);
    out.gate_o.resize(steps);

    Vector r_hidden = r_final_hidden;  // relevance waiting on h_t
    Vector r_cell(h_dim, 0.0);         // relevance waiting on c_t
    for (int t = steps - 1; t >= 0; --t) {
        const Vector& c_prev = t > 0 ? trace.c[t - 1] : zeros_h;
        const Vector& h_prev = t > 0 ? trace.h[t - 1] : zeros_h;

        // (a)
        auto [r_gate_o, r_tanh_c] = lrp_multiplicative(r_hidden, gate_position::first);
        out.gate_o[t] = std::move(r_gate_o);
        detail::accumulate(r_cell, r_tanh_c);

        // (b)
        const Vector lower_sum = concat(hadamard(trace.f[t], c_prev), hadamard(trace.i[t], trace.g[t]));
        const Vector r_products = lrp_linear(lower_sum, sum_weights, no_bias, trace.c[t], r_cell,
                                             eps, delta, 2 * h_dim);
        const Vector r_forget_term(r_products.begin(), r_products.begin() + h_dim);
        const Vector r_input_term(r_products.begin() + h_dim, r_products.end());
        auto [r_gate_f, r_cell_prev] = lrp_multiplicative(r_forget_term, gate_position::first);
        auto [r_gate_i, r_g] = lrp_multiplicative(r_input_term, gate_position::first);
        out.gate_f[t] = std::move(r_gate_f);
        out.gate_i[t] = std::move(r_gate_i);

        // (c)
        const Vector lower_gate = concat(h_prev, inputs[t]);
        const Vector r_lower = lrp_linear(lower_gate, gate_weights, params.b_g, trace.gpre[t],
                                          r_g, eps, delta, h_dim + e_dim);
        Vector r_h_prev(r_lower.begin(), r_lower.begin() + h_dim);
        out.input[t] = Vector(r_lower.begin() + h_dim, r_lower.end());

        r_hidden = std::move(r_h_prev);
        r_cell = std::move(r_cell_prev);
    }
    out.boundary_hidden = sum(r_hidden);
    out.boundary_cell = sum(r_cell);
    return out;
}

// Full decomposition of f_c(x): the target class's output neuron is seeded
// with its own score, every other output neuron with zero; the output layer
// splits onto the concatenated final hidden states, and each half walks back
// through its encoder.
inline RelevanceResult lrp_bilstm(const ForwardTrace& trace, const ModelParams& params,
                                  const LrpConfig& cfg) {
    params.validate();
    cfg.validate(params.class_count());
    const int h_dim = params.hidden_dim();
    const int steps = trace.steps();

    Vector r_out(params.class_count(), 0.0);
    r_out[cfg.target_class] = trace.scores[cfg.target_class];

    const Vector r_concat = lrp_linear(trace.concat_hidden, params.W_out, params.b_out,
                                       trace.scores, r_out, cfg.epsilon, cfg.delta, 2 * h_dim);
    const Vector r_left_final(r_concat.begin(), r_concat.begin() + h_dim);
    const Vector r_right_final(r_concat.begin() + h_dim, r_concat.end());

    const LstmRelevance left = lrp_lstm(trace.left, params.left, trace.inputs, r_left_final,
                                        cfg.epsilon, cfg.delta);
    const std::vector<Vector> reversed(trace.inputs.rbegin(), trace.inputs.rend());
    const LstmRelevance right = lrp_lstm(trace.right, params.right, reversed, r_right_final,
                                         cfg.epsilon, cfg.delta);

    RelevanceResult res;
    res.method = attribution_method::lrp;
    res.target_class = cfg.target_class;
    res.word_relevances.resize(steps);
    res.input_relevances.resize(steps);
    res.left_share.resize(steps);
    res.right_share.resize(steps);
    for (int t = 0; t < steps; ++t) {
        const Vector& rl = left.input[t];
        const Vector& rr = right.input[steps - 1 - t];  // back to original positions
        res.input_relevances[t] = add(rl, rr);
        res.word_relevances[t] = sum(res.input_relevances[t]);
        res.left_share[t] = sum(rl);
        res.right_share[t] = sum(rr);
        res.input_relevance += res.word_relevances[t];
    }
    res.output_relevance = r_out[cfg.target_class];
    res.boundary_absorbed = left.boundary_cell + left.boundary_hidden + right.boundary_cell +
                            right.boundary_hidden;
    for (const auto* gates : {&left.gate_i, &left.gate_f, &left.gate_o, &right.gate_i,
                              &right.gate_f, &right.gate_o})
        for (const Vector& v : *gates)
            for (double x : v)
                res.gate_relevance_max_abs = std::max(res.gate_relevance_max_abs, std::abs(x));
    return res;
}

// Convenience front end used by the CLI and the evaluation protocols.
inline RelevanceResult explain(const ForwardTrace& trace, const ModelParams& params,
                               attribution_method method, const LrpConfig& cfg) {
    if (method == attribution_method::sa) return sa_relevance(trace, params, cfg.target_class);
    return lrp_bilstm(trace, params, cfg);
}

}  // namespace lstmlrp
