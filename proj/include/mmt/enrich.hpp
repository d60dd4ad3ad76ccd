#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "mmt/corpus.hpp"
#include "mmt/error.hpp"
#include "mmt/strings.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

// Object tags in confidence order. Tags may be multi-word ("red car").
struct TagList {
    std::vector<std::string> tags;

    bool operator==(const TagList&) const = default;
};

// Top-k detection labels by score, descending, ties broken by input order.
// Duplicate labels are retained.
inline TagList select_tags(const DetectionSet& dets, std::size_t k = 10) {
    std::vector<std::size_t> order(dets.detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets.detections[a].score > dets.detections[b].score;
    });
    TagList out;
    std::size_t n = std::min(k, order.size());
    out.tags.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.tags.push_back(dets.detections[order[i]].label);
    return out;
}

// The enriched source line fed to a translator:
//   `<sentence> ## <tag1> , <tag2> , ... , <tagN>`
// single ASCII spaces around `##` and each `,`; with no tags the line is
// `<sentence> ##`.
inline std::string build_input(std::string_view sentence, const TagList& tags) {
    if (str::trim(sentence).empty()) throw Error("build_input: empty sentence");
    std::string line(sentence);
    line += " ##";
    for (std::size_t i = 0; i < tags.tags.size(); ++i) {
        line += (i == 0) ? " " : " , ";
        line += tags.tags[i];
    }
    return line;
}

// Splits an enriched line back into (sentence, tags). Inverse of build_input
// as long as the separator never occurs inside the sentence or a tag.
inline std::pair<std::string, TagList> parse_enriched(std::string_view line) {
    std::size_t sep = line.find(" ##");
    if (sep == std::string_view::npos) throw Error("parse_enriched: no ` ##` separator");
    std::string sentence(line.substr(0, sep));
    std::string_view rest = line.substr(sep + 3);
    TagList tags;
    if (!rest.empty()) {
        if (rest.front() != ' ') throw Error("parse_enriched: malformed separator");
        rest.remove_prefix(1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t comma = rest.find(" , ", start);
            if (comma == std::string_view::npos) {
                tags.tags.emplace_back(rest.substr(start));
                break;
            }
            tags.tags.emplace_back(rest.substr(start, comma - start));
            start = comma + 3;
        }
    }
    return {std::move(sentence), std::move(tags)};
}

// Ground-truth objects kept when intersection-over-object-area with the
// caption region exceeds min_overlap (default: any intersection keeps the
// object). Emits the first name of each kept object, in annotation order.
inline TagList filter_gt_objects(const GtAnnotationSet& gt, const Box& region,
                                 double min_overlap = 0.0) {
    TagList out;
    for (const auto& obj : gt.objects) {
        std::int64_t obj_area = obj.box.area();
        double ratio = obj_area > 0
                           ? static_cast<double>(intersection_area(obj.box, region)) /
                                 static_cast<double>(obj_area)
                           : 0.0;
        if (ratio > min_overlap) out.tags.push_back(obj.names.front());
    }
    return out;
}

// Which ground-truth attributes qualify for attachment.
using AttrFilter = std::function<bool(const std::string&)>;

inline AttrFilter attr_filter_from_lexicon(const Lexicon& lex) {
    return [&lex](const std::string& attr) { return lex.contains(attr); };
}

inline AttrFilter attr_filter_accept_all() {
    return [](const std::string&) { return true; };
}

// Rewrites each tag whose label matches a ground-truth object name
// (lowercase comparison with trailing-'s' plural folding) by prepending that
// object's qualifying attributes in annotation order: "red car". A tag
// matched by several objects uses the first match; unmatched tags pass
// through. Tags are never reordered, added or removed.
inline TagList attach_attributes(const TagList& tags, const GtAnnotationSet& gt,
                                 const AttrFilter& qualifies) {
    TagList out;
    out.tags.reserve(tags.tags.size());
    for (const std::string& tag : tags.tags) {
        const GtObject* match = nullptr;
        for (const auto& obj : gt.objects) {
            for (const auto& name : obj.names) {
                if (str::plural_equal(tag, name)) {
                    match = &obj;
                    break;
                }
            }
            if (match) break;
        }
        if (!match) {
            out.tags.push_back(tag);
            continue;
        }
        std::string rewritten;
        for (const auto& attr : match->attributes) {
            if (!qualifies(attr)) continue;
            rewritten += attr;
            rewritten += ' ';
        }
        rewritten += tag;
        out.tags.push_back(std::move(rewritten));
    }
    return out;
}

}  // namespace mmt
