#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "mmt/error.hpp"
#include "mmt/metrics.hpp"
#include "mmt/runner/experiment.hpp"

namespace mmt {

namespace detail {

inline std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Paper-style table: one row per system, degraded-vs-base summary, scores to
// one decimal.
inline void emit_table_tsv(const ExperimentReport& report, std::ostream& out) {
    out << "system\tno_masking\tmasked\tdegradation_pct\n";
    for (const auto& s : report.summaries) {
        out << s.system << '\t' << detail::fixed(round1(s.degradation.base_bleu), 1) << '\t'
            << detail::fixed(round1(s.degradation.degraded_bleu), 1) << '\t'
            << detail::fixed(round1(s.degradation.degradation_pct), 1) << '\n';
    }
}

// (fraction, BLEU) series per system for plotting, scores to four decimals.
inline void emit_curve_tsv(const ExperimentReport& report, std::ostream& out) {
    out << "system\tfraction\tbleu\n";
    for (const auto& row : report.rows) {
        out << row.system << '\t' << detail::fixed(row.fraction, 4) << '\t'
            << detail::fixed(row.bleu, 4) << '\n';
    }
}

// Full report as one JSON document, numbers fixed to four decimals so equal
// runs emit identical bytes.
inline void emit_report_json(const ExperimentReport& report, std::ostream& out) {
    out << "{\n  \"rows\": [";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"system\": \"" << detail::json_escape(row.system) << "\", \"mode\": \""
            << to_string(row.mode) << "\", \"fraction\": " << detail::fixed(row.fraction, 4)
            << ", \"bleu\": " << detail::fixed(row.bleu, 4);
        if (row.ribes) out << ", \"ribes\": " << detail::fixed(*row.ribes, 4);
        if (row.amfm) out << ", \"amfm\": " << detail::fixed(*row.amfm, 4);
        out << "}";
    }
    out << (report.rows.empty() ? "],\n" : "\n  ],\n");
    out << "  \"summaries\": [";
    for (std::size_t i = 0; i < report.summaries.size(); ++i) {
        const auto& s = report.summaries[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"system\": \"" << detail::json_escape(s.system)
            << "\", \"no_masking\": " << detail::fixed(s.degradation.base_bleu, 4)
            << ", \"masked\": " << detail::fixed(s.degradation.degraded_bleu, 4)
            << ", \"degradation_pct\": " << detail::fixed(s.degradation.degradation_pct, 4) << "}";
    }
    out << (report.summaries.empty() ? "],\n" : "\n  ],\n");
    out << "  \"failures\": [";
    for (std::size_t i = 0; i < report.failures.size(); ++i) {
        const auto& f = report.failures[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"system\": \"" << detail::json_escape(f.system) << "\", \"error\": \""
            << detail::json_escape(f.message) << "\"}";
    }
    out << (report.failures.empty() ? "]\n" : "\n  ]\n");
    out << "}\n";
}

// Writes report.tsv, curves.tsv and report.json under output_dir.
inline void emit_report(const ExperimentReport& report, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw Error("cannot create output directory " + output_dir + ": " + ec.message());
    auto open = [&](const char* name) {
        std::ofstream out(fs::path(output_dir) / name, std::ios::binary);
        if (!out) throw Error(std::string("cannot write ") + name + " under " + output_dir);
        return out;
    };
    auto table = open("report.tsv");
    emit_table_tsv(report, table);
    auto curves = open("curves.tsv");
    emit_curve_tsv(report, curves);
    auto json = open("report.json");
    emit_report_json(report, json);
}

// One line-delimited score record: {metric, corpus_id, value, breakdown},
// values to four decimals.
inline void write_score_record(std::ostream& out, std::string_view metric,
                               std::string_view corpus_id, double value,
                               const std::string& breakdown_json = "{}") {
    out << "{\"metric\": \"" << detail::json_escape(metric) << "\", \"corpus_id\": \""
        << detail::json_escape(corpus_id) << "\", \"value\": " << detail::fixed(value, 4)
        << ", \"breakdown\": " << breakdown_json << "}\n";
}

inline std::string bleu_breakdown_json(const BleuBreakdown& b) {
    std::string out = "{";
    for (int n = 0; n < 4; ++n)
        out += "\"p" + std::to_string(n + 1) + "\": " + detail::fixed(b.precisions[n], 4) + ", ";
    out += "\"brevity_penalty\": " + detail::fixed(b.brevity_penalty, 4);
    out += ", \"hyp_len\": " + std::to_string(b.hyp_len);
    out += ", \"ref_len\": " + std::to_string(b.ref_len) + "}";
    return out;
}

}  // namespace mmt
