// command line front end: corpus synthesis, training, prediction,
// per-word attribution, and the evaluation protocols

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lstmlrp/lstmlrp.hpp"

namespace {

using namespace lstmlrp;

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

Corpus load_input(const std::string& path, const std::string& format, int classes) {
    if (format == "tsv") return load_corpus(path, classes);
    if (format == "text") return load_sentences(path);
    throw corpus_error("unknown input format '" + format + "' (expected tsv or text)", 0);
}

attribution_method parse_method(const std::string& name) {
    if (name == "sa") return attribution_method::sa;
    if (name == "lrp") return attribution_method::lrp;
    throw dimension_error("unknown attribution method '" + name + "' (expected sa or lrp)");
}

int resolve_target(const std::string& spec, const Sentence& s, int predicted, int classes) {
    if (spec == "true") {
        if (!s.labeled())
            throw eval_error("--target true needs a labeled corpus (tsv format)");
        return s.label;
    }
    if (spec == "pred") return predicted;
    int cls = -1;
    try {
        size_t used = 0;
        cls = std::stoi(spec, &used);
        if (used != spec.size()) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
        throw eval_error("--target must be 'true', 'pred', or a class index, got '" + spec + "'");
    }
    if (cls < 0 || cls >= classes)
        throw eval_error("--target class " + std::to_string(cls) + " outside [0, " +
                         std::to_string(classes) + ")");
    return cls;
}

struct SynthArgs {
    std::string train_out, test_out;
    SyntheticCorpusSpec spec;
};

int run_synth(const SynthArgs& a) {
    a.spec.validate();
    const SyntheticCorpus corpus = generate_synthetic_corpus(a.spec);
    save_corpus(corpus.train, a.train_out);
    save_corpus(corpus.test, a.test_out);
    std::cout << "wrote " << corpus.train.size() << " train sentences to " << a.train_out
              << " and " << corpus.test.size() << " test sentences to " << a.test_out << "\n";
    return 0;
}

struct TrainArgs {
    std::string train_path, test_path, out_path, log_path;
    int classes = 5, embed = 16, hidden = 16;
    TrainConfig cfg;
    double init_scale = 0.1;
};

int run_train(const TrainArgs& a) {
    const Corpus train_corpus = load_corpus(a.train_path, a.classes);
    Corpus test_corpus;
    const bool has_test = !a.test_path.empty();
    if (has_test) test_corpus = load_corpus(a.test_path, a.classes);

    ModelParams init = init_model(a.embed, a.hidden, a.classes,
                                  train_corpus.vocabulary_tokens(), a.cfg.seed, a.init_scale);
    const TrainResult result =
        train(init, train_corpus, has_test ? &test_corpus : nullptr, a.cfg);
    save_model(result.params, a.out_path);

    const std::string log = format_train_log(result.log);
    if (a.log_path.empty()) {
        std::cout << log;
    } else {
        std::ofstream os(a.log_path);
        os << log;
        if (!os.flush()) throw eval_error("cannot write train log to " + a.log_path);
    }
    std::cout << "saved weights to " << a.out_path << "\n";
    return 0;
}

struct PredictArgs {
    std::string weights, input, format = "tsv";
};

int run_predict(const PredictArgs& a) {
    const ModelParams params = load_model(a.weights);
    const Corpus corpus = load_input(a.input, a.format, params.class_count());
    const std::vector<std::string> names = default_class_names(params.class_count());

    int correct = 0, labeled = 0;
    for (int i = 0; i < corpus.size(); ++i) {
        const Sentence& s = corpus.sentences[i];
        const ForwardTrace tr = forward(params, s);
        const int pred = predict_from_scores(tr.scores);
        std::cout << i << '\t' << pred << '\t' << names[pred];
        for (double v : tr.scores) std::cout << '\t' << fmt(v);
        std::cout << '\n';
        if (s.labeled()) {
            ++labeled;
            if (pred == s.label) ++correct;
        }
    }
    if (labeled > 0)
        std::cout << "# accuracy " << fmt(static_cast<double>(correct) / labeled) << " over "
                  << labeled << " labeled sentences\n";
    return 0;
}

struct ExplainArgs {
    std::string weights, input, format = "tsv", method = "lrp", target = "true";
    std::string heatmap_path;
    double eps = 0.001, delta = 1.0;
    int limit = 0;
};

int run_explain(const ExplainArgs& a) {
    const ModelParams params = load_model(a.weights);
    const Corpus corpus = load_input(a.input, a.format, params.class_count());
    const attribution_method method = parse_method(a.method);
    const std::vector<std::string> names = default_class_names(params.class_count());

    std::vector<HeatmapEntry> entries;
    std::cout << "# method=" << method_name(method) << "\teps=" << fmt(a.eps, "%.6g")
              << "\tdelta=" << fmt(a.delta, "%.6g") << "\ttarget=" << a.target << "\n";
    const int count = a.limit > 0 ? std::min(a.limit, corpus.size()) : corpus.size();
    for (int i = 0; i < count; ++i) {
        const Sentence& s = corpus.sentences[i];
        const ForwardTrace tr = forward(params, s);
        const int pred = predict_from_scores(tr.scores);
        LrpConfig cfg;
        cfg.target_class = resolve_target(a.target, s, pred, params.class_count());
        cfg.epsilon = a.eps;
        cfg.delta = a.delta;
        const RelevanceResult rel = explain(tr, params, method, cfg);

        double total = 0.0;
        for (double r : rel.word_relevances) total += r;
        std::cout << "# sentence " << i << "\tpred=" << names[pred]
                  << "\ttarget=" << names[cfg.target_class]
                  << "\tscore=" << fmt(tr.scores[cfg.target_class])
                  << "\tsum_relevance=" << fmt(total) << "\n";
        for (size_t t = 0; t < s.tokens.size(); ++t)
            std::cout << t << '\t' << s.tokens[t] << '\t' << fmt(rel.word_relevances[t]) << '\t'
                      << fmt(rel.left_share[t]) << '\t' << fmt(rel.right_share[t]) << '\n';

        if (!a.heatmap_path.empty()) entries.push_back({s, rel, pred});
    }
    if (!a.heatmap_path.empty()) {
        std::ofstream os(a.heatmap_path);
        os << render_heatmaps(entries, names, "word relevance heatmaps");
        if (!os.flush()) throw eval_error("cannot write heatmap to " + a.heatmap_path);
        std::cout << "# wrote heatmap html to " << a.heatmap_path << "\n";
    }
    return 0;
}

struct DeletionArgs {
    std::string weights, corpus_path, method = "lrp", order = "decreasing", subset = "correct";
    double eps = 0.001, delta = 1.0;
    DeletionConfig cfg;
};

int run_eval_deletion(const DeletionArgs& a) {
    const ModelParams params = load_model(a.weights);
    const Corpus corpus = load_corpus(a.corpus_path, params.class_count());
    deletion_order order;
    if (a.order == "decreasing") order = deletion_order::decreasing;
    else if (a.order == "increasing") order = deletion_order::increasing;
    else if (a.order == "random") order = deletion_order::random_order;
    else throw eval_error("unknown --order '" + a.order + "'");
    sentence_subset subset;
    if (a.subset == "correct") subset = sentence_subset::initially_correct;
    else if (a.subset == "false") subset = sentence_subset::initially_false;
    else throw eval_error("unknown --subset '" + a.subset + "'");

    const DeletionCurve curve = deletion_experiment(params, corpus, parse_method(a.method),
                                                    order, subset, a.eps, a.delta, a.cfg);
    std::cout << "# method=" << method_name(curve.method) << "\torder=" << order_name(curve.order)
              << "\tsubset=" << subset_name(curve.subset)
              << "\tsentences=" << curve.sentence_count << "\tmin_length=" << curve.min_length
              << "\truns=" << curve.runs << "\n";
    std::cout << "k\taccuracy\tstddev\n";
    for (size_t k = 0; k < curve.accuracy.size(); ++k) {
        std::cout << k << '\t' << fmt(curve.accuracy[k]) << '\t'
                  << (curve.stddev.empty() ? std::string("-") : fmt(curve.stddev[k])) << '\n';
    }
    return 0;
}

struct DistributionArgs {
    std::string weights, corpus_path, method = "lrp";
    int target = 0, min_length = 19;
    double eps = 0.001, delta = 1.0;
};

int run_eval_distribution(const DistributionArgs& a) {
    const ModelParams params = load_model(a.weights);
    const Corpus corpus = load_corpus(a.corpus_path, params.class_count());
    const PositionalDistribution dist =
        positional_distribution(params, corpus, parse_method(a.method), a.eps, a.delta,
                                a.target, a.min_length);
    std::cout << "# method=" << method_name(dist.method) << "\ttarget=" << dist.target_class
              << "\tsentences=" << dist.sentence_count << "\tmin_length=" << dist.min_length
              << "\tbins=" << PositionalDistribution::kBins
              << "\tnormalization=" << PositionalDistribution::normalization << "\n";
    const char* row_names[3] = {"total", "left", "right"};
    for (int row = 0; row < 3; ++row) {
        std::cout << row_names[row];
        for (double v : dist.rows[row]) std::cout << '\t' << fmt(v);
        std::cout << '\n';
    }
    return 0;
}

struct TopWordsArgs {
    std::string weights, corpus_path, method = "lrp";
    int target = 0, n = 10;
    double eps = 0.001, delta = 1.0;
};

int run_top_words(const TopWordsArgs& a) {
    const ModelParams params = load_model(a.weights);
    const Corpus corpus = load_corpus(a.corpus_path, params.class_count());
    const ExtremalWords ext =
        extremal_words(params, corpus, parse_method(a.method), a.eps, a.delta, a.target, a.n);
    std::cout << "# method=" << a.method << "\ttarget=" << a.target << "\tn=" << a.n << "\n";
    std::cout << "end\trank\tword\trelevance\tsentence\tposition\n";
    for (size_t i = 0; i < ext.most_relevant.size(); ++i) {
        const WordOccurrence& w = ext.most_relevant[i];
        std::cout << "most\t" << i << '\t' << w.word << '\t' << fmt(w.relevance) << '\t'
                  << w.sentence_index << '\t' << w.position << '\n';
    }
    for (size_t i = 0; i < ext.least_relevant.size(); ++i) {
        const WordOccurrence& w = ext.least_relevant[i];
        std::cout << "least\t" << i << '\t' << w.word << '\t' << fmt(w.relevance) << '\t'
                  << w.sentence_index << '\t' << w.position << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-directional LSTM sentence classifier with per-word attribution"};
    app.set_config("--config", "", "read options from an ini-style file");
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    synth_cmd->add_option("--train-out", synth.train_out, "path for the train split")->required();
    synth_cmd->add_option("--test-out", synth.test_out, "path for the test split")->required();
    synth_cmd->add_option("--train-size", synth.spec.train_size, "train sentences");
    synth_cmd->add_option("--test-size", synth.spec.test_size, "test sentences");
    synth_cmd->add_option("--min-len", synth.spec.min_length, "minimum sentence length");
    synth_cmd->add_option("--max-len", synth.spec.max_length, "maximum sentence length");
    synth_cmd->add_option("--filler-vocab", synth.spec.filler_vocab, "filler word pool size");
    synth_cmd->add_option("--seed", synth.spec.seed, "generator seed");

    TrainArgs tr;
    CLI::App* train_cmd = app.add_subcommand("train", "train a classifier on a tsv corpus");
    train_cmd->add_option("--train", tr.train_path, "labeled train corpus")->required();
    train_cmd->add_option("--test", tr.test_path, "labeled test corpus");
    train_cmd->add_option("--out", tr.out_path, "weight archive to write")->required();
    train_cmd->add_option("--log", tr.log_path, "write the epoch log here instead of stdout");
    train_cmd->add_option("--classes", tr.classes, "number of classes");
    train_cmd->add_option("--embed-dim", tr.embed, "embedding width");
    train_cmd->add_option("--hidden-dim", tr.hidden, "hidden width per direction");
    train_cmd->add_option("--lr", tr.cfg.learning_rate, "learning rate");
    train_cmd->add_option("--epochs", tr.cfg.epochs, "training epochs");
    train_cmd->add_option("--clip", tr.cfg.clip, "per-component gradient clip");
    train_cmd->add_option("--seed", tr.cfg.seed, "init and shuffle seed");
    train_cmd->add_option("--init-scale", tr.init_scale, "uniform init half-width");

    PredictArgs pr;
    CLI::App* predict_cmd = app.add_subcommand("predict", "classify sentences");
    predict_cmd->add_option("--weights", pr.weights, "weight archive")->required();
    predict_cmd->add_option("--input", pr.input, "input file")->required();
    predict_cmd->add_option("--format", pr.format, "tsv (labeled) or text (raw)");

    ExplainArgs ex;
    CLI::App* explain_cmd = app.add_subcommand("explain", "per-word relevance for sentences");
    explain_cmd->add_option("--weights", ex.weights, "weight archive")->required();
    explain_cmd->add_option("--input", ex.input, "input file")->required();
    explain_cmd->add_option("--format", ex.format, "tsv (labeled) or text (raw)");
    explain_cmd->add_option("--method", ex.method, "sa or lrp");
    explain_cmd->add_option("--target", ex.target, "'true', 'pred', or a class index");
    explain_cmd->add_option("--eps", ex.eps, "lrp stabilizer");
    explain_cmd->add_option("--delta", ex.delta, "lrp bias share, 0 or 1");
    explain_cmd->add_option("--heatmap", ex.heatmap_path, "also write an html heatmap here");
    explain_cmd->add_option("--limit", ex.limit, "explain only the first n sentences");

    DeletionArgs del;
    CLI::App* del_cmd = app.add_subcommand("eval-deletion", "word deletion accuracy curve");
    del_cmd->add_option("--weights", del.weights, "weight archive")->required();
    del_cmd->add_option("--corpus", del.corpus_path, "labeled tsv corpus")->required();
    del_cmd->add_option("--method", del.method, "sa or lrp");
    del_cmd->add_option("--order", del.order, "decreasing, increasing, or random");
    del_cmd->add_option("--subset", del.subset, "correct or false");
    del_cmd->add_option("--eps", del.eps, "lrp stabilizer");
    del_cmd->add_option("--delta", del.delta, "lrp bias share, 0 or 1");
    del_cmd->add_option("--min-len", del.cfg.min_length, "minimum sentence length");
    del_cmd->add_option("--max-del", del.cfg.max_deletions, "deletions per sentence");
    del_cmd->add_option("--runs", del.cfg.runs, "random baseline repetitions");
    del_cmd->add_option("--seed", del.cfg.seed, "random order seed");

    DistributionArgs dist;
    CLI::App* dist_cmd =
        app.add_subcommand("eval-distribution", "relevance mass by sentence position");
    dist_cmd->add_option("--weights", dist.weights, "weight archive")->required();
    dist_cmd->add_option("--corpus", dist.corpus_path, "labeled tsv corpus")->required();
    dist_cmd->add_option("--method", dist.method, "sa or lrp");
    dist_cmd->add_option("--target", dist.target, "class index to explain");
    dist_cmd->add_option("--eps", dist.eps, "lrp stabilizer");
    dist_cmd->add_option("--delta", dist.delta, "lrp bias share, 0 or 1");
    dist_cmd->add_option("--min-len", dist.min_length, "minimum sentence length");

    TopWordsArgs top;
    CLI::App* top_cmd = app.add_subcommand("top-words", "corpus-wide extremal occurrences");
    top_cmd->add_option("--weights", top.weights, "weight archive")->required();
    top_cmd->add_option("--corpus", top.corpus_path, "labeled tsv corpus")->required();
    top_cmd->add_option("--method", top.method, "sa or lrp");
    top_cmd->add_option("--target", top.target, "class index to explain");
    top_cmd->add_option("--n", top.n, "list length per end");
    top_cmd->add_option("--eps", top.eps, "lrp stabilizer");
    top_cmd->add_option("--delta", top.delta, "lrp bias share, 0 or 1");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) return run_synth(synth);
        if (*train_cmd) return run_train(tr);
        if (*predict_cmd) return run_predict(pr);
        if (*explain_cmd) return run_explain(ex);
        if (*del_cmd) return run_eval_deletion(del);
        if (*dist_cmd) return run_eval_distribution(dist);
        if (*top_cmd) return run_top_words(top);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
