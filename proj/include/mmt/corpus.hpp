#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mmt/error.hpp"
#include "mmt/strings.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

struct Box {
    int x = 0, y = 0, w = 0, h = 0;

    bool operator==(const Box&) const = default;

    std::int64_t area() const {
        return static_cast<std::int64_t>(w) * static_cast<std::int64_t>(h);
    }
};

// Area of the rectangle intersection, 0 when disjoint or degenerate.
inline std::int64_t intersection_area(const Box& a, const Box& b) {
    std::int64_t x0 = std::max(a.x, b.x);
    std::int64_t y0 = std::max(a.y, b.y);
    std::int64_t x1 = std::min(static_cast<std::int64_t>(a.x) + a.w,
                               static_cast<std::int64_t>(b.x) + b.w);
    std::int64_t y1 = std::min(static_cast<std::int64_t>(a.y) + a.h,
                               static_cast<std::int64_t>(b.y) + b.h);
    if (x1 <= x0 || y1 <= y0) return 0;
    return (x1 - x0) * (y1 - y0);
}

// One dataset example: an image region, its English caption and the Hindi
// reference translation.
struct CaptionRecord {
    std::string image_id;
    Box region;
    std::string source_text;
    std::string target_text;

    bool operator==(const CaptionRecord&) const = default;
};

struct Detection {
    std::string label;  // lowercase
    double score = 0.0;
    Box box;
};

struct DetectionSet {
    std::string image_id;
    std::vector<Detection> detections;
};

struct GtObject {
    std::vector<std::string> names;
    std::vector<std::string> attributes;
    Box box;
};

struct GtAnnotationSet {
    std::string image_id;
    std::vector<GtObject> objects;
};

struct CorpusStats {
    std::size_t pair_count = 0;
    double avg_src_tokens = 0.0;
    double avg_tgt_tokens = 0.0;
};

namespace detail {

inline int parse_int_field(std::string_view field, const char* what, std::size_t lineno) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError(std::string("non-integer ") + what + ": `" + std::string(field) + "`",
                         lineno);
    return value;
}

inline void validate_record(const CaptionRecord& rec, std::size_t lineno) {
    if (rec.image_id.empty()) throw ParseError("empty image_id", lineno);
    if (rec.region.w <= 0) throw ParseError("region w must be > 0", lineno);
    if (rec.region.h <= 0) throw ParseError("region h must be > 0", lineno);
    if (str::trim(rec.source_text).empty()) throw ParseError("empty source text", lineno);
    if (str::trim(rec.target_text).empty()) throw ParseError("empty target text", lineno);
}

inline Box parse_json_box(const nlohmann::json& j, std::size_t lineno) {
    if (!j.is_array() || j.size() != 4)
        throw ParseError("box must be a [x,y,w,h] array", lineno);
    for (const auto& v : j)
        if (!v.is_number()) throw ParseError("box entries must be numbers", lineno);
    Box box;
    box.x = static_cast<int>(std::llround(j[0].get<double>()));
    box.y = static_cast<int>(std::llround(j[1].get<double>()));
    box.w = static_cast<int>(std::llround(j[2].get<double>()));
    box.h = static_cast<int>(std::llround(j[3].get<double>()));
    return box;
}

}  // namespace detail

// hvg-tsv: 7 tab-separated fields per line, no header:
//   image_id <TAB> x <TAB> y <TAB> w <TAB> h <TAB> english <TAB> hindi
// Empty lines are skipped; anything else malformed raises a ParseError
// naming the 1-based line number.
inline std::vector<CaptionRecord> load_corpus(std::istream& in) {
    std::vector<CaptionRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = str::split(line, '\t');
        if (fields.size() != 7)
            throw ParseError("expected 7 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        CaptionRecord rec;
        rec.image_id = fields[0];
        rec.region.x = detail::parse_int_field(fields[1], "x", lineno);
        rec.region.y = detail::parse_int_field(fields[2], "y", lineno);
        rec.region.w = detail::parse_int_field(fields[3], "w", lineno);
        rec.region.h = detail::parse_int_field(fields[4], "h", lineno);
        rec.source_text = fields[5];
        rec.target_text = fields[6];
        detail::validate_record(rec, lineno);
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<CaptionRecord> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    return load_corpus(in);
}

inline void write_corpus(const std::vector<CaptionRecord>& records, std::ostream& out) {
    for (const auto& rec : records) {
        out << rec.image_id << '\t' << rec.region.x << '\t' << rec.region.y << '\t'
            << rec.region.w << '\t' << rec.region.h << '\t' << rec.source_text << '\t'
            << rec.target_text << '\n';
    }
}

// Detections file: one JSON record per line:
//   {"image_id": "...", "objects": [{"label": "...", "score": 0.98, "box": [x,y,w,h]}]}
// Labels are lowercased on load. Detection order is preserved as read.
inline std::map<std::string, DetectionSet> load_detections(std::istream& in) {
    std::map<std::string, DetectionSet> sets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!j.contains("image_id") || !j["image_id"].is_string())
            throw ParseError("missing string field `image_id`", lineno);
        DetectionSet set;
        set.image_id = j["image_id"].get<std::string>();
        if (set.image_id.empty()) throw ParseError("empty image_id", lineno);
        if (!j.contains("objects") || !j["objects"].is_array())
            throw ParseError("missing array field `objects`", lineno);
        for (const auto& obj : j["objects"]) {
            Detection det;
            if (!obj.contains("label") || !obj["label"].is_string())
                throw ParseError("detection missing string field `label`", lineno);
            det.label = str::to_lower(obj["label"].get<std::string>());
            if (det.label.empty()) throw ParseError("empty detection label", lineno);
            if (!obj.contains("score") || !obj["score"].is_number())
                throw ParseError("detection missing numeric field `score`", lineno);
            det.score = obj["score"].get<double>();
            if (det.score < 0.0 || det.score > 1.0)
                throw ParseError("detection score outside [0,1]: " + std::to_string(det.score),
                                 lineno);
            if (!obj.contains("box")) throw ParseError("detection missing field `box`", lineno);
            det.box = detail::parse_json_box(obj["box"], lineno);
            set.detections.push_back(std::move(det));
        }
        auto [it, inserted] = sets.emplace(set.image_id, std::move(set));
        (void)it;
        if (!inserted) throw ParseError("duplicate image_id: " + line, lineno);
    }
    return sets;
}

inline std::map<std::string, DetectionSet> load_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open detections file: " + path);
    return load_detections(in);
}

// Ground-truth file: one JSON record per line:
//   {"image_id": "...", "objects": [{"names": ["..."], "attributes": ["..."], "box": [x,y,w,h]}]}
// `attributes` defaults to [] when absent.
inline std::map<std::string, GtAnnotationSet> load_gt_annotations(std::istream& in) {
    std::map<std::string, GtAnnotationSet> sets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!j.contains("image_id") || !j["image_id"].is_string())
            throw ParseError("missing string field `image_id`", lineno);
        GtAnnotationSet set;
        set.image_id = j["image_id"].get<std::string>();
        if (set.image_id.empty()) throw ParseError("empty image_id", lineno);
        if (!j.contains("objects") || !j["objects"].is_array())
            throw ParseError("missing array field `objects`", lineno);
        for (const auto& obj : j["objects"]) {
            GtObject gt;
            if (!obj.contains("names") || !obj["names"].is_array() || obj["names"].empty())
                throw ParseError("ground-truth object needs a non-empty `names` array", lineno);
            for (const auto& name : obj["names"]) {
                if (!name.is_string()) throw ParseError("names entries must be strings", lineno);
                gt.names.push_back(name.get<std::string>());
            }
            if (obj.contains("attributes")) {
                if (!obj["attributes"].is_array())
                    throw ParseError("`attributes` must be an array", lineno);
                for (const auto& attr : obj["attributes"]) {
                    if (!attr.is_string())
                        throw ParseError("attributes entries must be strings", lineno);
                    gt.attributes.push_back(attr.get<std::string>());
                }
            }
            if (!obj.contains("box"))
                throw ParseError("ground-truth object missing field `box`", lineno);
            gt.box = detail::parse_json_box(obj["box"], lineno);
            set.objects.push_back(std::move(gt));
        }
        auto [it, inserted] = sets.emplace(set.image_id, std::move(set));
        (void)it;
        if (!inserted) throw ParseError("duplicate image_id: " + set.image_id, lineno);
    }
    return sets;
}

inline std::map<std::string, GtAnnotationSet> load_gt_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ground-truth file: " + path);
    return load_gt_annotations(in);
}

using Tokenizer = std::function<TokenSeq(std::string_view)>;

inline CorpusStats corpus_stats(const std::vector<CaptionRecord>& records,
                                const Tokenizer& src_tokenizer = tokenize_en,
                                const Tokenizer& tgt_tokenizer = tokenize_hi) {
    CorpusStats stats;
    stats.pair_count = records.size();
    if (records.empty()) return stats;
    std::size_t src_tokens = 0, tgt_tokens = 0;
    for (const auto& rec : records) {
        src_tokens += src_tokenizer(rec.source_text).tokens.size();
        tgt_tokens += tgt_tokenizer(rec.target_text).tokens.size();
    }
    stats.avg_src_tokens = static_cast<double>(src_tokens) / static_cast<double>(records.size());
    stats.avg_tgt_tokens = static_cast<double>(tgt_tokens) / static_cast<double>(records.size());
    return stats;
}

}  // namespace mmt
