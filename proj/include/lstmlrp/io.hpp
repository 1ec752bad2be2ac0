#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lstmlrp/errors.hpp"
#include "lstmlrp/model.hpp"

// Weight archive and corpus text formats.
//
// Archive layout: a line-oriented text header followed by a raw binary
// payload. Doubles are IEEE-754 binary64, little-endian, row-major, written
// in the order the parameter manifest lists them.
//
//   LSTMLRP-WEIGHTS v1
//   byte_order little-endian
//   dims <embed> <hidden> <classes>
//   concat left,right
//   vocab <V>
//   <token>            x V
//   params <P>
//   <name> <rows> <cols>   x P
//   payload
//   <binary>
//
// Corpus files: one sentence per line, "<label>\t<tok> <tok> ...". Tokens
// are lowercased on load.

namespace lstmlrp {

namespace detail {

inline void write_f64_le(std::ostream& os, double v) {
    const std::uint64_t u = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline bool read_f64_le(std::istream& is, double& out) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    out = std::bit_cast<double>(u);
    return true;
}

struct ParamSlot {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<double>* data = nullptr;
};

// the manifest: fixed set of 27 named tensors; vectors are rows x 1
inline std::vector<ParamSlot> param_manifest(ModelParams& p) {
    std::vector<ParamSlot> slots;
    auto add_lstm = [&](const std::string& prefix, LstmParams& l) {
        const int h = l.hidden_dim();
        Matrix* ws[4] = {&l.W_i, &l.W_f, &l.W_o, &l.W_g};
        Matrix* us[4] = {&l.U_i, &l.U_f, &l.U_o, &l.U_g};
        Vector* bs[4] = {&l.b_i, &l.b_f, &l.b_o, &l.b_g};
        const char* gate[4] = {"i", "f", "o", "g"};
        for (int k = 0; k < 4; ++k)
            slots.push_back({prefix + ".W_" + gate[k], ws[k]->rows, ws[k]->cols, &ws[k]->a});
        for (int k = 0; k < 4; ++k)
            slots.push_back({prefix + ".U_" + gate[k], us[k]->rows, us[k]->cols, &us[k]->a});
        for (int k = 0; k < 4; ++k)
            slots.push_back({prefix + ".b_" + gate[k], h, 1, bs[k]});
    };
    add_lstm("left", p.left);
    add_lstm("right", p.right);
    slots.push_back({"embeddings", p.embeddings.rows, p.embeddings.cols, &p.embeddings.a});
    slots.push_back({"W_out", p.W_out.rows, p.W_out.cols, &p.W_out.a});
    slots.push_back({"b_out", static_cast<int>(p.b_out.size()), 1, &p.b_out});
    return slots;
}

inline bool plain_token(const std::string& tok) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
    return true;
}

}  // namespace detail

inline void save_model(const ModelParams& params, const std::string& path) {
    params.validate();
    for (const std::string& tok : params.vocab.tokens)
        if (!detail::plain_token(tok))
            throw archive_error(archive_fault::bad_header,
                                "vocabulary token not serializable: '" + tok + "'");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw archive_error(archive_fault::io_failure, "cannot open for write: " + path);

    ModelParams& p = const_cast<ModelParams&>(params);  // manifest wants mutable slots
    const auto slots = detail::param_manifest(p);

    os << "LSTMLRP-WEIGHTS v1\n";
    os << "byte_order little-endian\n";
    os << "dims " << params.embed_dim() << ' ' << params.hidden_dim() << ' '
       << params.class_count() << '\n';
    os << "concat left,right\n";
    os << "vocab " << params.vocab.size() << '\n';
    for (const std::string& tok : params.vocab.tokens) os << tok << '\n';
    os << "params " << slots.size() << '\n';
    for (const auto& s : slots) os << s.name << ' ' << s.rows << ' ' << s.cols << '\n';
    os << "payload\n";
    for (const auto& s : slots)
        for (double v : *s.data) detail::write_f64_le(os, v);
    os.flush();
    if (!os) throw archive_error(archive_fault::io_failure, "write failed: " + path);
}

inline ModelParams load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw archive_error(archive_fault::io_failure, "cannot open for read: " + path);

    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(is, line))
            throw archive_error(archive_fault::bad_header,
                                std::string("unexpected end of header before ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line("magic") != "LSTMLRP-WEIGHTS v1")
        throw archive_error(archive_fault::bad_magic, "not a weight archive: " + path);
    if (next_line("byte_order") != "byte_order little-endian")
        throw archive_error(archive_fault::bad_header, "unsupported byte_order line");

    int embed = 0, hidden = 0, classes = 0;
    {
        std::istringstream ls(next_line("dims"));
        std::string key;
        char extra;
        if (!(ls >> key >> embed >> hidden >> classes) || key != "dims" || ls >> extra ||
            embed < 1 || hidden < 1 || classes < 1)
            throw archive_error(archive_fault::bad_header, "malformed dims line");
    }
    if (next_line("concat") != "concat left,right")
        throw archive_error(archive_fault::bad_header, "unsupported concat order");

    int vocab_n = 0;
    {
        std::istringstream ls(next_line("vocab"));
        std::string key;
        char extra;
        if (!(ls >> key >> vocab_n) || key != "vocab" || ls >> extra || vocab_n < 1)
            throw archive_error(archive_fault::bad_header, "malformed vocab line");
    }
    std::vector<std::string> tokens;
    tokens.reserve(vocab_n);
    for (int i = 0; i < vocab_n; ++i) {
        std::string tok = next_line("vocabulary token");
        if (!detail::plain_token(tok))
            throw archive_error(archive_fault::bad_header,
                                "empty or malformed vocabulary token at index " +
                                    std::to_string(i));
        tokens.push_back(std::move(tok));
    }

    int param_n = 0;
    {
        std::istringstream ls(next_line("params"));
        std::string key;
        char extra;
        if (!(ls >> key >> param_n) || key != "params" || ls >> extra || param_n < 1)
            throw archive_error(archive_fault::bad_header, "malformed params line");
    }

    struct Entry {
        std::string name;
        int rows = 0;
        int cols = 0;
    };
    std::vector<Entry> entries;
    entries.reserve(param_n);
    for (int i = 0; i < param_n; ++i) {
        std::istringstream ls(next_line("parameter entry"));
        Entry e;
        char extra;
        if (!(ls >> e.name >> e.rows >> e.cols) || ls >> extra || e.rows < 1 || e.cols < 1)
            throw archive_error(archive_fault::bad_header,
                                "malformed parameter entry at index " + std::to_string(i));
        entries.push_back(std::move(e));
    }
    if (next_line("payload marker") != "payload")
        throw archive_error(archive_fault::bad_header, "missing payload marker");

    ModelParams params;
    params.vocab = Vocabulary::from_tokens(tokens);
    if (!params.vocab.index.count(std::string(kUnknownToken)))
        throw archive_error(archive_fault::bad_header, "vocabulary lacks the <unk> token");
    auto sized = [](int r, int c) { return Matrix(r, c); };
    for (LstmParams* l : {&params.left, &params.right}) {
        l->W_i = sized(hidden, hidden);
        l->W_f = sized(hidden, hidden);
        l->W_o = sized(hidden, hidden);
        l->W_g = sized(hidden, hidden);
        l->U_i = sized(hidden, embed);
        l->U_f = sized(hidden, embed);
        l->U_o = sized(hidden, embed);
        l->U_g = sized(hidden, embed);
        l->b_i.assign(hidden, 0.0);
        l->b_f.assign(hidden, 0.0);
        l->b_o.assign(hidden, 0.0);
        l->b_g.assign(hidden, 0.0);
    }
    params.embeddings = sized(vocab_n, embed);
    params.W_out = sized(classes, 2 * hidden);
    params.b_out.assign(classes, 0.0);

    auto slots = detail::param_manifest(params);
    std::map<std::string, detail::ParamSlot*> by_name;
    for (auto& s : slots) by_name[s.name] = &s;

    std::map<std::string, bool> seen;
    for (const Entry& e : entries) {
        auto it = by_name.find(e.name);
        if (it == by_name.end())
            throw archive_error(archive_fault::unknown_parameter,
                                "unknown parameter: " + e.name);
        if (seen.count(e.name))
            throw archive_error(archive_fault::duplicate_parameter,
                                "parameter listed twice: " + e.name);
        seen[e.name] = true;
        if (e.rows != it->second->rows || e.cols != it->second->cols)
            throw archive_error(archive_fault::shape_mismatch,
                                "parameter " + e.name + " declared " + std::to_string(e.rows) +
                                    "x" + std::to_string(e.cols) + ", expected " +
                                    std::to_string(it->second->rows) + "x" +
                                    std::to_string(it->second->cols));
    }
    for (const auto& s : slots)
        if (!seen.count(s.name))
            throw archive_error(archive_fault::missing_parameter, "missing parameter: " + s.name);

    // payload follows manifest listing order
    for (const Entry& e : entries) {
        std::vector<double>& dst = *by_name[e.name]->data;
        const size_t count = static_cast<size_t>(e.rows) * e.cols;
        if (dst.size() != count)
            throw archive_error(archive_fault::shape_mismatch,
                                "internal slot size mismatch for " + e.name);
        for (size_t i = 0; i < count; ++i)
            if (!detail::read_f64_le(is, dst[i]))
                throw archive_error(archive_fault::truncated_payload,
                                    "payload ends inside parameter " + e.name);
    }
    char extra;
    if (is.read(&extra, 1))
        throw archive_error(archive_fault::trailing_data, "bytes remain after the payload");

    params.validate();
    return params;
}

inline std::string lowercase_ascii(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// "<label>\t<tok> <tok> ...", one sentence per line; blank lines are skipped
inline Corpus load_corpus(const std::string& path, int class_count) {
    std::ifstream is(path);
    if (!is) throw corpus_error("cannot open corpus file: " + path, 0);
    Corpus corpus;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw corpus_error("expected '<label>\\t<tokens>'", lineno);
        const std::string label_text = line.substr(0, tab);
        int label = -1;
        try {
            size_t used = 0;
            label = std::stoi(label_text, &used);
            if (used != label_text.size()) throw std::invalid_argument(label_text);
        } catch (const std::exception&) {
            throw corpus_error("label is not an integer: '" + label_text + "'", lineno);
        }
        if (label < 0 || label >= class_count)
            throw corpus_error("label " + std::to_string(label) + " outside [0, " +
                                   std::to_string(class_count) + ")",
                               lineno);
        Sentence s;
        s.label = label;
        std::istringstream ts(line.substr(tab + 1));
        std::string tok;
        while (ts >> tok) s.tokens.push_back(lowercase_ascii(tok));
        if (s.tokens.empty()) throw corpus_error("sentence has no tokens", lineno);
        corpus.sentences.push_back(std::move(s));
    }
    if (corpus.sentences.empty()) throw corpus_error("corpus file holds no sentences", 0);
    return corpus;
}

// unlabeled text: whitespace-separated tokens, one sentence per line
inline Corpus load_sentences(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw corpus_error("cannot open text file: " + path, 0);
    Corpus corpus;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        Sentence s;
        std::istringstream ts(line);
        std::string tok;
        while (ts >> tok) s.tokens.push_back(lowercase_ascii(tok));
        if (s.tokens.empty()) continue;
        corpus.sentences.push_back(std::move(s));
    }
    if (corpus.sentences.empty()) throw corpus_error("text file holds no sentences", 0);
    return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw corpus_error("cannot open for write: " + path, 0);
    for (const Sentence& s : corpus.sentences) {
        os << s.label << '\t';
        for (size_t t = 0; t < s.tokens.size(); ++t) {
            if (t) os << ' ';
            os << s.tokens[t];
        }
        os << '\n';
    }
    if (!os.flush()) throw corpus_error("write failed: " + path, 0);
}

}  // namespace lstmlrp
