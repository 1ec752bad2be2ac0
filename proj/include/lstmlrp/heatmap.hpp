#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lstmlrp/explain.hpp"
#include "lstmlrp/model.hpp"

// Self-contained HTML rendering of per-word relevance: red background for
// positive relevance toward the target class, blue for negative, opacity
// scaled by |R| relative to the largest |R| in the same sentence.

namespace lstmlrp {

struct HeatmapEntry {
    Sentence sentence;
    RelevanceResult relevance;
    int predicted = -1;
};

namespace detail {

inline std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string word_span(const std::string& token, double rel, double max_abs) {
    const double alpha = max_abs > 0.0 ? std::abs(rel) / max_abs : 0.0;
    const char* base = rel >= 0.0 ? "255,0,0" : "0,0,255";
    char style[96];
    std::snprintf(style, sizeof style, "background-color:rgba(%s,%.3f)", base, alpha);
    std::string out = "<span class=\"w\" style=\"";
    out += style;
    out += "\" title=\"";
    char relbuf[48];
    std::snprintf(relbuf, sizeof relbuf, "%.6g", rel);
    out += relbuf;
    out += "\">";
    out += html_escape(token);
    out += "</span>";
    return out;
}

}  // namespace detail

inline std::string render_heatmaps(const std::vector<HeatmapEntry>& entries,
                                   const std::vector<std::string>& class_names,
                                   const std::string& title) {
    auto class_name = [&](int c) -> std::string {
        if (c >= 0 && c < static_cast<int>(class_names.size()))
            return detail::html_escape(class_names[c]);
        return c < 0 ? std::string("?") : std::to_string(c);
    };

    std::string html;
    html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
    html += detail::html_escape(title);
    html +=
        "</title>\n<style>\n"
        "body { font-family: sans-serif; margin: 2em; }\n"
        ".sent { margin: 0.8em 0; line-height: 1.9; }\n"
        ".w { padding: 0.08em 0.22em; margin: 0 0.06em; border-radius: 3px; }\n"
        ".meta { color: #555; font-size: 0.85em; margin-left: 0.5em; }\n"
        "</style>\n</head>\n<body>\n<h1>";
    html += detail::html_escape(title);
    html += "</h1>\n";

    for (const HeatmapEntry& e : entries) {
        const Sentence& s = e.sentence;
        const std::vector<double>& rel = e.relevance.word_relevances;
        double max_abs = 0.0;
        for (double r : rel) max_abs = std::max(max_abs, std::abs(r));

        html += "<div class=\"sent\">";
        for (size_t t = 0; t < s.tokens.size(); ++t)
            html += detail::word_span(s.tokens[t], rel[t], max_abs);
        html += "<span class=\"meta\">[";
        html += method_name(e.relevance.method);
        html += " toward ";
        html += class_name(e.relevance.target_class);
        if (s.labeled()) {
            html += "; true ";
            html += class_name(s.label);
        }
        if (e.predicted >= 0) {
            html += "; predicted ";
            html += class_name(e.predicted);
        }
        html += "]</span></div>\n";
    }
    html += "</body>\n</html>\n";
    return html;
}

}  // namespace lstmlrp
