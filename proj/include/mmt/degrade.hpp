#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "mmt/corpus.hpp"
#include "mmt/error.hpp"
#include "mmt/rng.hpp"
#include "mmt/strings.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

enum class MaskMode { Entity, Color, Adjective, Random };

inline std::string to_string(MaskMode mode) {
    switch (mode) {
        case MaskMode::Entity: return "entity";
        case MaskMode::Color: return "color";
        case MaskMode::Adjective: return "adjective";
        case MaskMode::Random: return "random";
    }
    return "random";
}

inline MaskMode mask_mode_from_string(std::string_view name) {
    if (name == "entity") return MaskMode::Entity;
    if (name == "color") return MaskMode::Color;
    if (name == "adjective") return MaskMode::Adjective;
    if (name == "random") return MaskMode::Random;
    throw Error("unknown mask mode: " + std::string(name));
}

// Fully determines a degraded corpus.
struct MaskPlan {
    MaskMode mode = MaskMode::Random;
    double fraction = 0.0;  // in [0,1]
    std::uint64_t seed = 0;
    std::string mask_symbol = "<mask>";
};

struct OverlapStats {
    std::int64_t entities_in_text = 0;
    std::int64_t object_tags = 0;
    std::int64_t entities_in_tags = 0;
    double pct_entities_in_tags = 0.0;
};

inline std::int64_t round_half_up(double x) {
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

// Token indices eligible for masking under a mode. Entity and adjective
// modes need POS tags on the sequence.
inline std::vector<std::size_t> mask_candidates(const TokenSeq& seq, MaskMode mode,
                                                const Lexicon& color_lexicon) {
    std::vector<std::size_t> candidates;
    switch (mode) {
        case MaskMode::Entity:
        case MaskMode::Adjective: {
            if (!seq.pos)
                throw Error(to_string(mode) + " masking needs POS tags on the sentence");
            const auto& pos = *seq.pos;
            for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
                bool hit = mode == MaskMode::Entity
                               ? (pos[i] == Pos::Noun || pos[i] == Pos::Propn)
                               : pos[i] == Pos::Adj;
                if (hit) candidates.push_back(i);
            }
            break;
        }
        case MaskMode::Color:
            for (std::size_t i = 0; i < seq.tokens.size(); ++i)
                if (color_lexicon.contains(seq.tokens[i])) candidates.push_back(i);
            break;
        case MaskMode::Random:
            candidates.resize(seq.tokens.size());
            for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
            break;
    }
    return candidates;
}

namespace detail {

inline std::uint64_t mode_stream_id(MaskMode mode) { return static_cast<std::uint64_t>(mode); }

}  // namespace detail

// The permutation of candidates for one sentence. Depends only on
// (seed, sentence index, mode), so masked sets are nested across fractions.
inline std::vector<std::size_t> mask_permutation(const std::vector<std::size_t>& candidates,
                                                 std::uint64_t seed, std::size_t sentence_index,
                                                 MaskMode mode) {
    return seeded_permutation(candidates,
                              mix_stream(seed, sentence_index, detail::mode_stream_id(mode)));
}

// Replaces round-half-up(fraction * |candidates|) tokens with the mask
// symbol: the first m elements of the seeded permutation. POS alignment is
// preserved.
inline TokenSeq apply_mask(const TokenSeq& seq, const MaskPlan& plan,
                           const std::vector<std::size_t>& candidates,
                           std::size_t sentence_index = 0) {
    if (plan.mask_symbol.empty()) throw Error("mask symbol must be non-empty");
    if (plan.fraction < 0.0 || plan.fraction > 1.0)
        throw Error("mask fraction must be in [0,1]");
    for (std::size_t idx : candidates)
        if (idx >= seq.tokens.size()) throw Error("mask candidate index out of range");
    auto perm = mask_permutation(candidates, plan.seed, sentence_index, plan.mode);
    std::size_t m = static_cast<std::size_t>(
        round_half_up(plan.fraction * static_cast<double>(candidates.size())));
    TokenSeq out = seq;
    for (std::size_t i = 0; i < m && i < perm.size(); ++i) out.tokens[perm[i]] = plan.mask_symbol;
    return out;
}

// The default fraction grid {0, 0.1, ..., 1.0}.
inline std::vector<double> default_fraction_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
    return grid;
}

// One degraded corpus per fraction. Fractions must be sorted ascending, each
// in [0,1]; under a fixed seed the masked sets are nested pairwise.
inline std::vector<std::pair<double, std::vector<TokenSeq>>> mask_schedule(
    const std::vector<TokenSeq>& corpus, MaskMode mode, const std::vector<double>& fractions,
    std::uint64_t seed, const Lexicon& color_lexicon = default_color_lexicon(),
    const std::string& mask_symbol = "<mask>") {
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (fractions[i] < 0.0 || fractions[i] > 1.0)
            throw Error("fraction outside [0,1]: " + std::to_string(fractions[i]));
        if (i > 0 && fractions[i] < fractions[i - 1])
            throw Error("fractions must be sorted ascending");
    }
    std::vector<std::vector<std::size_t>> perms(corpus.size());
    std::vector<std::vector<std::size_t>> cands(corpus.size());
    for (std::size_t s = 0; s < corpus.size(); ++s) {
        cands[s] = mask_candidates(corpus[s], mode, color_lexicon);
        perms[s] = mask_permutation(cands[s], seed, s, mode);
    }
    std::vector<std::pair<double, std::vector<TokenSeq>>> out;
    out.reserve(fractions.size());
    for (double fraction : fractions) {
        std::vector<TokenSeq> degraded = corpus;
        for (std::size_t s = 0; s < corpus.size(); ++s) {
            std::size_t m = static_cast<std::size_t>(
                round_half_up(fraction * static_cast<double>(cands[s].size())));
            for (std::size_t i = 0; i < m && i < perms[s].size(); ++i)
                degraded[s].tokens[perms[s][i]] = mask_symbol;
        }
        out.emplace_back(fraction, std::move(degraded));
    }
    return out;
}

// Train-time masking: round-half-up(rate * |tokens|) tokens masked via the
// same seeded-permutation scheme over all indices.
inline TokenSeq train_mask(const TokenSeq& seq, double rate, std::uint64_t seed,
                           std::size_t sentence_index = 0,
                           const std::string& mask_symbol = "<mask>") {
    MaskPlan plan{MaskMode::Random, rate, seed, mask_symbol};
    std::vector<std::size_t> all(seq.tokens.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return apply_mask(seq, plan, all, sentence_index);
}

// Corpus-level overlap between source-side entities (NOUN/PROPN tokens) and
// the object tags of each record's image. Matching is per tag word after
// lowercasing and trailing-'s' folding of both sides. A record whose image
// has no detections entry contributes 0 tags.
inline OverlapStats overlap_stats(const std::vector<CaptionRecord>& records,
                                  const std::vector<TokenSeq>& annotated_sources,
                                  const std::map<std::string, DetectionSet>& detections) {
    if (records.size() != annotated_sources.size())
        throw Error("overlap_stats: records and annotated sources differ in length");
    OverlapStats stats;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const TokenSeq& seq = annotated_sources[r];
        if (!seq.pos) throw Error("overlap_stats: sentence " + std::to_string(r) + " has no POS");
        std::unordered_set<std::string> tag_words;
        auto it = detections.find(records[r].image_id);
        if (it != detections.end()) {
            stats.object_tags += static_cast<std::int64_t>(it->second.detections.size());
            for (const auto& det : it->second.detections)
                for (const auto& word : str::split_ws(det.label))
                    tag_words.insert(std::string(str::fold_plural(str::to_lower(word))));
        }
        const auto& pos = *seq.pos;
        for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
            if (pos[i] != Pos::Noun && pos[i] != Pos::Propn) continue;
            ++stats.entities_in_text;
            std::string folded(str::fold_plural(str::to_lower(seq.tokens[i])));
            if (tag_words.count(folded) > 0) ++stats.entities_in_tags;
        }
    }
    stats.pct_entities_in_tags =
        stats.entities_in_text > 0
            ? 100.0 * static_cast<double>(stats.entities_in_tags) /
                  static_cast<double>(stats.entities_in_text)
            : 0.0;
    return stats;
}

// Manifest entry for one emitted degraded corpus.
struct MaskManifestEntry {
    std::string file;
    MaskMode mode;
    double fraction;
    std::uint64_t seed;
    std::string mask_symbol;
};

// One JSON object per line.
inline void write_mask_manifest(const std::vector<MaskManifestEntry>& entries, std::ostream& out) {
    for (const auto& e : entries) {
        char fraction[32];
        std::snprintf(fraction, sizeof fraction, "%.4f", e.fraction);
        out << "{\"file\": \"" << e.file << "\", \"mode\": \"" << to_string(e.mode)
            << "\", \"fraction\": " << fraction << ", \"seed\": " << e.seed
            << ", \"mask_symbol\": \"" << e.mask_symbol << "\"}\n";
    }
}

}  // namespace mmt
