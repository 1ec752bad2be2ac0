#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lstmlrp/explain.hpp"
#include "lstmlrp/model.hpp"

// The three evaluation protocols over (model, corpus, attribution method):
// word-deletion curves, corpus-wide extremal-word lists, and the positional
// relevance statistic. Relevance targets the true label for deletion; the
// other two take an explicit target class.

namespace lstmlrp {

enum class deletion_order { decreasing, increasing, random_order };
enum class sentence_subset { initially_correct, initially_false };

inline const char* order_name(deletion_order o) {
    switch (o) {
        case deletion_order::decreasing: return "decreasing";
        case deletion_order::increasing: return "increasing";
        default: return "random";
    }
}

inline const char* subset_name(sentence_subset s) {
    return s == sentence_subset::initially_correct ? "correct" : "false";
}

struct DeletionConfig {
    int min_length = 10;   // sentences shorter than this are left out
    int max_deletions = 5;
    int runs = 10;         // random baseline repetitions
    std::uint64_t seed = 1;
};

struct DeletionCurve {
    attribution_method method = attribution_method::lrp;
    deletion_order order = deletion_order::decreasing;
    sentence_subset subset = sentence_subset::initially_correct;
    int min_length = 10;
    int sentence_count = 0;
    int runs = 1;
    std::vector<double> accuracy;  // k = 0..max_deletions
    std::vector<double> stddev;    // across runs; random order only
};

struct WordOccurrence {
    std::string word;
    double relevance = 0.0;
    int sentence_index = 0;
    int position = 0;
};

struct ExtremalWords {
    std::vector<WordOccurrence> most_relevant;   // descending relevance
    std::vector<WordOccurrence> least_relevant;  // ascending relevance
};

struct PositionalDistribution {
    static constexpr int kBins = 10;
    attribution_method method = attribution_method::lrp;
    int target_class = 0;
    int min_length = 19;
    int sentence_count = 0;
    // rows: 0 total, 1 left encoder only, 2 right encoder only; each sums to 1
    std::array<std::array<double, kBins>, 3> rows{};
    // left/right rows are renormalized from their own raw mass
    static constexpr const char* normalization = "per-row";
};

namespace detail {

// relevance-sorted word positions; ties break by token text, then position
inline std::vector<int> relevance_order(const Sentence& s, const std::vector<double>& rel,
                                        bool decreasing) {
    std::vector<int> pos(s.tokens.size());
    for (size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
    std::sort(pos.begin(), pos.end(), [&](int a, int b) {
        if (rel[a] != rel[b]) return decreasing ? rel[a] > rel[b] : rel[a] < rel[b];
        if (s.tokens[a] != s.tokens[b]) return s.tokens[a] < s.tokens[b];
        return a < b;
    });
    return pos;
}

// fraction of correctly re-predicted sentences after deleting the first
// k positions of each sentence's order, for k = 0..max_k
inline std::vector<double> cumulative_deletion_accuracy(
    const ModelParams& params, const std::vector<const Sentence*>& subset,
    const std::vector<std::vector<int>>& orders, int max_k) {
    std::vector<int> correct(max_k + 1, 0);
    for (size_t si = 0; si < subset.size(); ++si) {
        Sentence work = *subset[si];
        const std::vector<int>& order = orders[si];
        for (int k = 0; k <= max_k; ++k) {
            if (k > 0 && k - 1 < static_cast<int>(order.size()))
                work.tokens[order[k - 1]] = std::string(kDeletedToken);
            if (predict(params, work) == work.label) ++correct[k];
        }
    }
    std::vector<double> acc(max_k + 1);
    for (int k = 0; k <= max_k; ++k) acc[k] = static_cast<double>(correct[k]) / subset.size();
    return acc;
}

}  // namespace detail

// Word-deletion curve. Relevances are computed once per sentence on the
// undeleted input with the true label as target; deletion zeroes the word's
// embedding (the marker token), never shortens the sentence.
inline DeletionCurve deletion_experiment(const ModelParams& params, const Corpus& corpus,
                                         attribution_method method, deletion_order order,
                                         sentence_subset subset, double eps, double delta,
                                         const DeletionConfig& cfg) {
    if (cfg.min_length < 1 || cfg.max_deletions < 0 || cfg.runs < 1)
        throw dimension_error("deletion_experiment: bad configuration");

    std::vector<const Sentence*> eligible;
    for (const Sentence& s : corpus.sentences)
        if (s.labeled() && static_cast<int>(s.tokens.size()) >= cfg.min_length)
            eligible.push_back(&s);
    if (eligible.empty())
        throw eval_error("deletion_experiment: no labeled sentence of length >= " +
                         std::to_string(cfg.min_length));

    std::vector<const Sentence*> chosen;
    for (const Sentence* s : eligible) {
        const bool correct = predict(params, *s) == s->label;
        if ((subset == sentence_subset::initially_correct) == correct) chosen.push_back(s);
    }
    if (chosen.empty())
        throw eval_error(std::string("deletion_experiment: the initially-") +
                         subset_name(subset) + " subset is empty");

    DeletionCurve curve;
    curve.method = method;
    curve.order = order;
    curve.subset = subset;
    curve.min_length = cfg.min_length;
    curve.sentence_count = static_cast<int>(chosen.size());

    if (order == deletion_order::random_order) {
        curve.runs = cfg.runs;
        std::vector<std::vector<double>> per_run;
        for (int run = 0; run < cfg.runs; ++run) {
            std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(run + 1));
            std::vector<std::vector<int>> orders;
            orders.reserve(chosen.size());
            for (const Sentence* s : chosen) {
                std::vector<int> pos(s->tokens.size());
                for (size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
                std::shuffle(pos.begin(), pos.end(), rng);
                orders.push_back(std::move(pos));
            }
            per_run.push_back(
                detail::cumulative_deletion_accuracy(params, chosen, orders, cfg.max_deletions));
        }
        curve.accuracy.assign(cfg.max_deletions + 1, 0.0);
        curve.stddev.assign(cfg.max_deletions + 1, 0.0);
        for (int k = 0; k <= cfg.max_deletions; ++k) {
            double mean = 0.0;
            for (const auto& run : per_run) mean += run[k];
            mean /= cfg.runs;
            double var = 0.0;
            for (const auto& run : per_run) var += (run[k] - mean) * (run[k] - mean);
            curve.accuracy[k] = mean;
            curve.stddev[k] = cfg.runs > 1 ? std::sqrt(var / (cfg.runs - 1)) : 0.0;
        }
        return curve;
    }

    std::vector<std::vector<int>> orders;
    orders.reserve(chosen.size());
    for (const Sentence* s : chosen) {
        const ForwardTrace tr = forward(params, *s);
        LrpConfig lcfg;
        lcfg.target_class = s->label;
        lcfg.epsilon = eps;
        lcfg.delta = delta;
        const RelevanceResult rel = explain(tr, params, method, lcfg);
        orders.push_back(detail::relevance_order(*s, rel.word_relevances,
                                                 order == deletion_order::decreasing));
    }
    curve.accuracy =
        detail::cumulative_deletion_accuracy(params, chosen, orders, cfg.max_deletions);
    return curve;
}

// Occurrence-level most/least relevant words over the whole corpus for one
// target class. Ties break lexicographically, then by sentence index, then
// by position, so reruns give identical lists.
inline ExtremalWords extremal_words(const ModelParams& params, const Corpus& corpus,
                                    attribution_method method, double eps, double delta,
                                    int target_class, int n) {
    if (n < 0) throw dimension_error("extremal_words: n must be >= 0");
    std::vector<WordOccurrence> all;
    for (int si = 0; si < corpus.size(); ++si) {
        const Sentence& s = corpus.sentences[si];
        const ForwardTrace tr = forward(params, s);
        LrpConfig cfg;
        cfg.target_class = target_class;
        cfg.epsilon = eps;
        cfg.delta = delta;
        const RelevanceResult rel = explain(tr, params, method, cfg);
        for (size_t t = 0; t < s.tokens.size(); ++t)
            all.push_back({s.tokens[t], rel.word_relevances[t], si, static_cast<int>(t)});
    }
    auto tie_break = [](const WordOccurrence& a, const WordOccurrence& b) {
        if (a.word != b.word) return a.word < b.word;
        if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
        return a.position < b.position;
    };
    ExtremalWords out;
    out.most_relevant = all;
    std::sort(out.most_relevant.begin(), out.most_relevant.end(),
              [&](const WordOccurrence& a, const WordOccurrence& b) {
                  if (a.relevance != b.relevance) return a.relevance > b.relevance;
                  return tie_break(a, b);
              });
    out.least_relevant = std::move(all);
    std::sort(out.least_relevant.begin(), out.least_relevant.end(),
              [&](const WordOccurrence& a, const WordOccurrence& b) {
                  if (a.relevance != b.relevance) return a.relevance < b.relevance;
                  return tie_break(a, b);
              });
    const size_t keep = std::min<size_t>(n, out.most_relevant.size());
    out.most_relevant.resize(keep);
    out.least_relevant.resize(keep);
    return out;
}

// Relevance mass over 10 equal real-valued intervals of the sentence length.
// A word crossing an interval boundary contributes proportionally to the
// overlap. Word masses are absolute values (signed relevances must not
// cancel); each row is normalized by its own raw mass.
inline PositionalDistribution positional_distribution(const ModelParams& params,
                                                      const Corpus& corpus,
                                                      attribution_method method, double eps,
                                                      double delta, int target_class,
                                                      int min_length = 19) {
    PositionalDistribution dist;
    dist.method = method;
    dist.target_class = target_class;
    dist.min_length = min_length;

    for (int si = 0; si < corpus.size(); ++si) {
        const Sentence& s = corpus.sentences[si];
        const int len = static_cast<int>(s.tokens.size());
        if (len < min_length) continue;
        ++dist.sentence_count;

        const ForwardTrace tr = forward(params, s);
        LrpConfig cfg;
        cfg.target_class = target_class;
        cfg.epsilon = eps;
        cfg.delta = delta;
        const RelevanceResult rel = explain(tr, params, method, cfg);

        const double bin_width = static_cast<double>(len) / PositionalDistribution::kBins;
        for (int t = 0; t < len; ++t) {
            const double masses[3] = {std::abs(rel.word_relevances[t]),
                                      std::abs(rel.left_share[t]),
                                      std::abs(rel.right_share[t])};
            for (int b = 0; b < PositionalDistribution::kBins; ++b) {
                const double lo = std::max(static_cast<double>(t), b * bin_width);
                const double hi = std::min(static_cast<double>(t) + 1.0, (b + 1) * bin_width);
                const double frac = hi - lo;
                if (frac <= 0.0) continue;
                for (int row = 0; row < 3; ++row) dist.rows[row][b] += masses[row] * frac;
            }
        }
    }
    if (dist.sentence_count == 0)
        throw eval_error("positional_distribution: no sentence of length >= " +
                         std::to_string(min_length));

    for (auto& row : dist.rows) {
        double mass = 0.0;
        for (double b : row) mass += b;
        if (mass <= 0.0)
            throw eval_error("positional_distribution: a row has zero relevance mass");
        for (double& b : row) b /= mass;
    }
    return dist;
}

}  // namespace lstmlrp
