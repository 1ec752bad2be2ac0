// The synthetic corpus generator underpins the end-to-end evaluation runs,
// so its construction guarantees are pinned down here.

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "lstmlrp/synthetic.hpp"

using namespace lstmlrp;

namespace {

bool contains_any(const std::vector<std::string>& tokens, const std::vector<std::string>& words) {
    const std::set<std::string> bag(words.begin(), words.end());
    return std::any_of(tokens.begin(), tokens.end(),
                       [&](const std::string& t) { return bag.count(t) > 0; });
}

SyntheticCorpusSpec small_spec(std::uint64_t seed = 7) {
    SyntheticCorpusSpec spec;
    spec.train_size = 400;
    spec.test_size = 100;
    spec.seed = seed;
    return spec;
}

TEST(SyntheticCorpus, DeterministicPerSeedAndSensitiveToIt) {
    const SyntheticCorpus a = generate_synthetic_corpus(small_spec(7));
    const SyntheticCorpus b = generate_synthetic_corpus(small_spec(7));
    ASSERT_EQ(a.train.size(), b.train.size());
    for (int i = 0; i < a.train.size(); ++i) {
        EXPECT_EQ(a.train.sentences[i].tokens, b.train.sentences[i].tokens);
        EXPECT_EQ(a.train.sentences[i].label, b.train.sentences[i].label);
    }

    const SyntheticCorpus c = generate_synthetic_corpus(small_spec(8));
    bool any_difference = false;
    for (int i = 0; i < a.train.size() && !any_difference; ++i)
        any_difference = a.train.sentences[i].tokens != c.train.sentences[i].tokens;
    EXPECT_TRUE(any_difference);
}

TEST(SyntheticCorpus, SplitSizesLengthBoundsAndLabels) {
    SyntheticCorpusSpec spec = small_spec();
    spec.min_length = 8;
    spec.max_length = 14;
    const SyntheticCorpus sc = generate_synthetic_corpus(spec);
    EXPECT_EQ(sc.train.size(), 400u);
    EXPECT_EQ(sc.test.size(), 100u);
    for (const Corpus* c : {&sc.train, &sc.test}) {
        for (const Sentence& s : c->sentences) {
            EXPECT_TRUE(s.labeled());
            EXPECT_GE(s.label, 0);
            EXPECT_LT(s.label, 5);
            EXPECT_GE(s.tokens.size(), 8u);
            EXPECT_LE(s.tokens.size(), 14u);
        }
    }
}

TEST(SyntheticCorpus, LabelsAreRoughlyBalanced) {
    SyntheticCorpusSpec spec = small_spec(11);
    spec.train_size = 2000;
    const SyntheticCorpus sc = generate_synthetic_corpus(spec);
    std::vector<int> counts(5, 0);
    for (const Sentence& s : sc.train.sentences) counts[s.label]++;
    for (int c = 0; c < 5; ++c)
        EXPECT_GE(counts[c], 300) << "class " << c;  // ~400 expected per class
}

TEST(SyntheticCorpus, CarrierKeywordsMatchTheExtremeLabels) {
    const SyntheticKeywords& kw = synthetic_keywords();
    const SyntheticCorpus sc = generate_synthetic_corpus(small_spec(13));
    for (const Sentence& s : sc.train.sentences) {
        if (s.label == 4) {
            EXPECT_TRUE(contains_any(s.tokens, kw.positive())) << "label 4 without positive word";
            EXPECT_FALSE(contains_any(s.tokens, kw.strong_negative));
        } else if (s.label == 0) {
            EXPECT_TRUE(contains_any(s.tokens, kw.negative())) << "label 0 without negative word";
            EXPECT_FALSE(contains_any(s.tokens, kw.strong_positive));
        }
    }
}

TEST(SyntheticCorpus, DistractorsAreMildOppositesInButClauses) {
    const SyntheticKeywords& kw = synthetic_keywords();
    const std::set<std::string> mild_neg(kw.mild_negative.begin(), kw.mild_negative.end());
    const std::set<std::string> mild_pos(kw.mild_positive.begin(), kw.mild_positive.end());

    const SyntheticCorpus sc = generate_synthetic_corpus(small_spec(23));
    int mixed = 0, extreme = 0;
    for (const Sentence& s : sc.train.sentences) {
        if (s.label != 0 && s.label != 4) continue;
        ++extreme;
        const std::set<std::string>& contra = s.label == 4 ? mild_neg : mild_pos;
        bool has_contra = false;
        for (size_t t = 0; t < s.tokens.size(); ++t) {
            if (!contra.count(s.tokens[t])) continue;
            has_contra = true;
            // distractors sit at the end of a "but the <noun> <verb> <kw>" tail
            ASSERT_GE(t, 4u);
            EXPECT_EQ(s.tokens[t - 4], "but") << "stray distractor in: " << s.tokens[t];
        }
        if (has_contra) ++mixed;
    }
    // a solid minority of extreme sentences carries a distractor
    EXPECT_GT(mixed, extreme / 10);
    EXPECT_LT(mixed, extreme / 2);
}

TEST(SyntheticCorpus, NegatorsAreFollowedByTheFlippedKeyword) {
    const SyntheticKeywords& kw = synthetic_keywords();
    const std::set<std::string> negators(kw.negators.begin(), kw.negators.end());
    const std::set<std::string> neg_words([&] {
        auto v = kw.negative();
        return std::set<std::string>(v.begin(), v.end());
    }());
    const std::set<std::string> pos_words([&] {
        auto v = kw.positive();
        return std::set<std::string>(v.begin(), v.end());
    }());

    const SyntheticCorpus sc = generate_synthetic_corpus(small_spec(17));
    int flipped_to_positive = 0, flipped_to_negative = 0;
    for (const Sentence& s : sc.train.sentences) {
        for (size_t t = 0; t < s.tokens.size(); ++t) {
            if (!negators.count(s.tokens[t])) continue;
            ASSERT_LT(t + 1, s.tokens.size()) << "negator may not end a sentence";
            const std::string& next = s.tokens[t + 1];
            if (s.label == 3) {
                EXPECT_TRUE(neg_words.count(next)) << next;
                ++flipped_to_positive;
            } else if (s.label == 1) {
                EXPECT_TRUE(pos_words.count(next)) << next;
                ++flipped_to_negative;
            } else {
                ADD_FAILURE() << "negator in a class " << s.label << " sentence";
            }
        }
    }
    EXPECT_GT(flipped_to_positive, 0);
    EXPECT_GT(flipped_to_negative, 0);
}

TEST(SyntheticCorpus, VocabularyHasTheUnknownTokenFirst) {
    const SyntheticCorpus sc = generate_synthetic_corpus(small_spec(19));
    const std::vector<std::string> vocab = sc.train.vocabulary_tokens();
    ASSERT_FALSE(vocab.empty());
    EXPECT_EQ(vocab[0], kUnknownToken);
    EXPECT_TRUE(std::is_sorted(vocab.begin() + 1, vocab.end()));
    EXPECT_TRUE(std::binary_search(vocab.begin() + 1, vocab.end(), "the"));
}

TEST(SyntheticCorpus, SpecRejectsUnsupportedShapes) {
    SyntheticCorpusSpec spec;
    spec.class_count = 3;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);

    spec = SyntheticCorpusSpec{};
    spec.min_length = 4;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);

    spec = SyntheticCorpusSpec{};
    spec.max_length = spec.min_length - 1;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);

    spec = SyntheticCorpusSpec{};
    spec.filler_vocab = 7;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);

    spec = SyntheticCorpusSpec{};
    spec.filler_vocab = 10000;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);

    spec = SyntheticCorpusSpec{};
    spec.train_size = -1;
    EXPECT_THROW(generate_synthetic_corpus(spec), dimension_error);
}

}  // namespace
