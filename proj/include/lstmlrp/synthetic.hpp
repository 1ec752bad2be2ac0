#pragma once

#include <random>
#include <string>
#include <vector>

#include "lstmlrp/model.hpp"

// Deterministic synthetic sentiment corpus. Every sentence is a filler
// frame around one sentiment phrase; the phrase fixes the label, so
// ground-truth word attribution is known by construction:
//   plain keyword        -> its own polarity (strong = very, mild = plain)
//   negator + keyword    -> polarity flipped and weakened ("not excellent"
//                           reads negative, "not bad" reads positive)
//   intensifier + mild   -> promoted to the strong class
// Class indices follow the usual five-way order: 0 very negative .. 4 very
// positive; neutral sentences carry a neutral keyword or no keyword at all.
//
// A share of the extreme-class sentences additionally carries a bare mild
// keyword of the opposite polarity in a trailing "but ..." clause ("felt
// excellent but the pacing seemed dull"). The strong keyword still decides
// the label; the contradictor is a distractor. This keeps deletion-based
// faithfulness checks meaningful: a classifier fooled by the distractor is
// corrected by removing exactly the words a good attribution ranks lowest.

namespace lstmlrp {

struct SyntheticCorpusSpec {
    int class_count = 5;  // the generator is five-way by construction
    int train_size = 3000;
    int test_size = 1000;
    int min_length = 6;
    int max_length = 24;
    int filler_vocab = 40;  // distinct filler words to draw from
    std::uint64_t seed = 20240901;

    void validate() const;
};

struct SyntheticKeywords {
    std::vector<std::string> strong_positive, mild_positive, neutral_kw, mild_negative,
        strong_negative, negators, intensifiers, nouns, verbs, fillers;

    // ground truth for "speaks for / against the positive classes"
    std::vector<std::string> positive() const {
        std::vector<std::string> v = strong_positive;
        v.insert(v.end(), mild_positive.begin(), mild_positive.end());
        return v;
    }
    std::vector<std::string> negative() const {
        std::vector<std::string> v = strong_negative;
        v.insert(v.end(), mild_negative.begin(), mild_negative.end());
        return v;
    }
};

inline const SyntheticKeywords& synthetic_keywords() {
    static const SyntheticKeywords kw = {
        {"excellent", "wonderful", "brilliant", "superb", "magnificent", "outstanding"},
        {"good", "nice", "decent", "pleasant", "enjoyable", "likable"},
        {"average", "ordinary", "passable", "unremarkable", "plain", "standard"},
        {"bad", "weak", "dull", "boring", "bland", "forgettable"},
        {"terrible", "horrible", "awful", "dreadful", "atrocious", "abysmal"},
        {"not", "n't", "never"},
        {"very", "truly", "extremely", "utterly"},
        {"movie", "film", "story", "plot", "script", "acting", "cast", "ending", "dialogue",
         "pacing"},
        {"is", "was", "seemed", "felt", "looked"},
        {"the", "a", "this", "that", "it", "and", "but", "with", "about", "i", "we", "they",
         "saw", "watched", "again", "last", "night", "week", "at", "home", "in", "parts",
         "whole", "first", "second", "half", "one", "friend", "said", "while", "during",
         "scene", "screen", "time", "on", "some", "other", "people", "thought", "so"},
    };
    return kw;
}

inline void SyntheticCorpusSpec::validate() const {
    if (class_count != 5) throw dimension_error("synthetic corpus is five-class only");
    if (train_size < 0 || test_size < 0) throw dimension_error("split sizes must be >= 0");
    if (min_length < 6) throw dimension_error("min sentence length must be >= 6");
    if (max_length < min_length) throw dimension_error("max length must be >= min length");
    const int available = static_cast<int>(synthetic_keywords().fillers.size());
    if (filler_vocab < 8 || filler_vocab > available)
        throw dimension_error("filler_vocab must be in [8," + std::to_string(available) + "]");
}

struct SyntheticCorpus {
    Corpus train;
    Corpus test;
};

namespace detail {

inline const std::string& pick(std::mt19937_64& rng, const std::vector<std::string>& words) {
    std::uniform_int_distribution<size_t> d(0, words.size() - 1);
    return words[d(rng)];
}

inline Sentence synth_sentence(std::mt19937_64& rng, const SyntheticCorpusSpec& spec) {
    const SyntheticKeywords& kw = synthetic_keywords();
    std::uniform_int_distribution<int> label_dist(0, 4);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const int label = label_dist(rng);

    // phrase that realizes the label; bare strong keywords may pick up a
    // contradicting mild distractor clause that does not change the label
    std::vector<std::string> phrase;
    bool bare_strong = false;
    switch (label) {
        case 4:
            if (coin(rng) < 0.65) {
                phrase = {pick(rng, kw.strong_positive)};
                bare_strong = true;
            } else if (coin(rng) < 0.5) phrase = {pick(rng, kw.intensifiers), pick(rng, kw.mild_positive)};
            else phrase = {pick(rng, kw.intensifiers), pick(rng, kw.strong_positive)};
            break;
        case 3:
            if (coin(rng) < 0.7) phrase = {pick(rng, kw.mild_positive)};
            else if (coin(rng) < 0.5) phrase = {pick(rng, kw.negators), pick(rng, kw.mild_negative)};
            else phrase = {pick(rng, kw.negators), pick(rng, kw.strong_negative)};
            break;
        case 2:
            if (coin(rng) < 0.7) phrase = {pick(rng, kw.neutral_kw)};
            // else: no sentiment token at all
            break;
        case 1:
            if (coin(rng) < 0.7) phrase = {pick(rng, kw.mild_negative)};
            else if (coin(rng) < 0.5) phrase = {pick(rng, kw.negators), pick(rng, kw.mild_positive)};
            else phrase = {pick(rng, kw.negators), pick(rng, kw.strong_positive)};
            break;
        default:
            if (coin(rng) < 0.65) {
                phrase = {pick(rng, kw.strong_negative)};
                bare_strong = true;
            } else if (coin(rng) < 0.5) phrase = {pick(rng, kw.intensifiers), pick(rng, kw.mild_negative)};
            else phrase = {pick(rng, kw.intensifiers), pick(rng, kw.strong_negative)};
            break;
    }

    // core clause carrying the phrase
    std::vector<std::string> core = {"the", pick(rng, kw.nouns), pick(rng, kw.verbs)};
    core.insert(core.end(), phrase.begin(), phrase.end());

    // mild distractor of the opposite polarity; the strong keyword wins
    if (bare_strong && static_cast<int>(core.size()) + 5 <= spec.max_length &&
        coin(rng) < 0.4) {
        const std::vector<std::string>& contra =
            label == 4 ? kw.mild_negative : kw.mild_positive;
        const std::vector<std::string> tail = {"but", "the", pick(rng, kw.nouns),
                                               pick(rng, kw.verbs), pick(rng, contra)};
        core.insert(core.end(), tail.begin(), tail.end());
    }

    std::uniform_int_distribution<int> len_dist(spec.min_length, spec.max_length);
    const int target_len = std::max(len_dist(rng), static_cast<int>(core.size()));
    const int padding = target_len - static_cast<int>(core.size());
    std::uniform_int_distribution<int> split_dist(0, padding);
    const int prefix_len = split_dist(rng);

    const std::vector<std::string> filler_pool(kw.fillers.begin(),
                                               kw.fillers.begin() + spec.filler_vocab);
    auto filler = [&]() {
        // mix plain fillers with nouns so padding is not keyword-free of nouns
        return coin(rng) < 0.8 ? pick(rng, filler_pool) : pick(rng, kw.nouns);
    };

    Sentence s;
    s.label = label;
    for (int k = 0; k < prefix_len; ++k) s.tokens.push_back(filler());
    s.tokens.insert(s.tokens.end(), core.begin(), core.end());
    for (int k = 0; k < padding - prefix_len; ++k) s.tokens.push_back(filler());
    return s;
}

}  // namespace detail

inline SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    SyntheticCorpus out;
    out.train.sentences.reserve(spec.train_size);
    out.test.sentences.reserve(spec.test_size);
    for (int k = 0; k < spec.train_size; ++k)
        out.train.sentences.push_back(detail::synth_sentence(rng, spec));
    for (int k = 0; k < spec.test_size; ++k)
        out.test.sentences.push_back(detail::synth_sentence(rng, spec));
    return out;
}

}  // namespace lstmlrp
