#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mmt/error.hpp"
#include "mmt/strings.hpp"

namespace mmt {

enum class Pos { Noun, Propn, Adj, Other };

inline std::string to_string(Pos p) {
    switch (p) {
        case Pos::Noun: return "NOUN";
        case Pos::Propn: return "PROPN";
        case Pos::Adj: return "ADJ";
        case Pos::Other: return "OTHER";
    }
    return "OTHER";
}

// A tokenized sentence, optionally with POS tags aligned 1:1 with tokens.
struct TokenSeq {
    std::vector<std::string> tokens;
    std::optional<std::vector<Pos>> pos;

    bool operator==(const TokenSeq& other) const {
        return tokens == other.tokens && pos == other.pos;
    }
};

namespace detail {

inline bool is_ascii_punct(std::uint32_t cp) {
    return cp < 128 && std::ispunct(static_cast<int>(cp)) != 0;
}

// Devanagari danda and double danda.
inline bool is_danda(std::uint32_t cp) { return cp == 0x0964 || cp == 0x0965; }

// Detaches leading and trailing punctuation codepoints of one whitespace-free
// chunk as separate tokens. The chunk interior is never split.
template <typename PunctPred>
void detach_punct(std::string_view chunk, PunctPred is_punct, std::vector<std::string>& out) {
    std::vector<std::string> leading, trailing;
    // Leading.
    while (!chunk.empty()) {
        auto [cp, len] = str::decode_utf8(chunk, 0);
        if (!is_punct(cp)) break;
        leading.emplace_back(chunk.substr(0, len));
        chunk.remove_prefix(len);
    }
    // Trailing: scan codepoints to find the last non-punct boundary.
    std::vector<std::pair<std::size_t, std::size_t>> cps;  // (offset, len)
    for (std::size_t i = 0; i < chunk.size();) {
        auto [cp, len] = str::decode_utf8(chunk, i);
        cps.emplace_back(i, len);
        i += len;
    }
    std::size_t core_end = cps.size();
    while (core_end > 0) {
        auto [off, len] = cps[core_end - 1];
        auto [cp, cplen] = str::decode_utf8(chunk, off);
        (void)cplen;
        if (!is_punct(cp)) break;
        --core_end;
    }
    for (auto& t : leading) out.push_back(std::move(t));
    if (core_end > 0) {
        std::size_t core_bytes = cps[core_end - 1].first + cps[core_end - 1].second;
        out.emplace_back(chunk.substr(0, core_bytes));
    }
    for (std::size_t k = core_end; k < cps.size(); ++k)
        out.emplace_back(chunk.substr(cps[k].first, cps[k].second));
}

}  // namespace detail

// English tokenizer: whitespace split, leading/trailing ASCII punctuation
// detached as separate tokens, case preserved. Internal punctuation
// ("red-colored", "don't") stays attached.
inline TokenSeq tokenize_en(std::string_view text) {
    TokenSeq seq;
    for (const std::string& chunk : str::split_ws(text))
        detail::detach_punct(chunk, detail::is_ascii_punct, seq.tokens);
    return seq;
}

// Hindi tokenizer: same edge-detachment rule with danda/double danda added
// to the punctuation set.
inline TokenSeq tokenize_hi(std::string_view text) {
    TokenSeq seq;
    auto punct = [](std::uint32_t cp) { return detail::is_ascii_punct(cp) || detail::is_danda(cp); };
    for (const std::string& chunk : str::split_ws(text))
        detail::detach_punct(chunk, punct, seq.tokens);
    return seq;
}

// ---------------------------------------------------------------------------
// Lexicons

struct Lexicon {
    std::string name;
    std::unordered_set<std::string> words;  // lowercase

    bool contains(std::string_view token) const {
        return words.count(str::to_lower(token)) > 0;
    }
};

// One lowercase word per line, '#' starts a comment, blank lines skipped.
// Entries are lowercased on load.
inline Lexicon load_lexicon(const std::string& path, std::string name = "") {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);
    Lexicon lex;
    lex.name = name.empty() ? path : std::move(name);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string_view word = str::trim(line);
        if (!word.empty()) lex.words.insert(str::to_lower(word));
    }
    return lex;
}

// The 11 basic English color terms plus common extended color words.
inline Lexicon default_color_lexicon() {
    return Lexicon{"colors",
                   {"black", "white", "red",    "green",  "yellow",    "blue",  "brown",
                    "orange", "pink",  "purple", "gray",   "grey",      "golden", "silver",
                    "violet", "maroon", "beige", "tan",    "navy",      "teal",  "turquoise"}};
}

// ---------------------------------------------------------------------------
// POS annotation

// Maps an external tagger's tag strings onto the internal tag set.
// Unmapped tags become Other.
struct TagMap {
    std::map<std::string, Pos> mapping;

    Pos resolve(const std::string& tag) const {
        auto it = mapping.find(tag);
        return it == mapping.end() ? Pos::Other : it->second;
    }

    static TagMap universal() {
        return TagMap{{{"NOUN", Pos::Noun}, {"PROPN", Pos::Propn}, {"ADJ", Pos::Adj}}};
    }
};

// Tag-map file: `external_tag<TAB>NOUN|PROPN|ADJ|OTHER` per line, '#' comments.
inline TagMap load_tag_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tag-map file: " + path);
    TagMap map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (str::trim(line).empty()) continue;
        auto fields = str::split(str::trim(line), '\t');
        if (fields.size() != 2) throw ParseError("tag-map line must be `tag<TAB>target`", lineno);
        std::string target(str::trim(fields[1]));
        Pos pos;
        if (target == "NOUN") pos = Pos::Noun;
        else if (target == "PROPN") pos = Pos::Propn;
        else if (target == "ADJ") pos = Pos::Adj;
        else if (target == "OTHER") pos = Pos::Other;
        else throw ParseError("unknown target tag `" + target + "`", lineno);
        map.mapping[std::string(str::trim(fields[0]))] = pos;
    }
    return map;
}

// One annotated sentence from a sidecar file: (token, raw tag) pairs.
using SidecarSentence = std::vector<std::pair<std::string, std::string>>;

// Sidecar format: `token<TAB>tag` per line, blank line between sentences.
inline std::vector<SidecarSentence> load_pos_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open POS sidecar file: " + path);
    std::vector<SidecarSentence> sentences;
    SidecarSentence current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (str::trim(line).empty()) {
            if (!current.empty()) sentences.push_back(std::move(current));
            current.clear();
            continue;
        }
        auto fields = str::split(line, '\t');
        if (fields.size() != 2) throw ParseError("sidecar line must be `token<TAB>tag`", lineno);
        current.emplace_back(fields[0], fields[1]);
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

// Sidecar-mode annotation. Tokens must match the sequence exactly; mismatches
// raise an AlignmentError naming the sentence index.
inline TokenSeq pos_annotate(const TokenSeq& seq, const SidecarSentence& sidecar,
                             std::size_t sentence_index, const TagMap& tag_map = TagMap::universal()) {
    if (sidecar.size() != seq.tokens.size())
        throw AlignmentError("sidecar has " + std::to_string(sidecar.size()) + " tags for " +
                                 std::to_string(seq.tokens.size()) + " tokens",
                             sentence_index);
    TokenSeq out = seq;
    std::vector<Pos> pos;
    pos.reserve(seq.tokens.size());
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (sidecar[i].first != seq.tokens[i])
            throw AlignmentError("sidecar token `" + sidecar[i].first + "` != corpus token `" +
                                     seq.tokens[i] + "`",
                                 sentence_index);
        pos.push_back(tag_map.resolve(sidecar[i].second));
    }
    out.pos = std::move(pos);
    return out;
}

// Lexicon-mode annotation: NOUN if the lowercase token is in the noun lexicon,
// else ADJ if in the adjective lexicon, else OTHER.
inline TokenSeq pos_annotate(const TokenSeq& seq, const Lexicon& nouns, const Lexicon& adjectives) {
    TokenSeq out = seq;
    std::vector<Pos> pos;
    pos.reserve(seq.tokens.size());
    for (const std::string& tok : seq.tokens) {
        if (nouns.contains(tok)) pos.push_back(Pos::Noun);
        else if (adjectives.contains(tok)) pos.push_back(Pos::Adj);
        else pos.push_back(Pos::Other);
    }
    out.pos = std::move(pos);
    return out;
}

// ---------------------------------------------------------------------------
// Subword segmentation and vocabulary pruning

inline constexpr const char* kUnkUnit = "<unk>";

struct SubwordVocab {
    std::vector<std::string> units;       // distinct, non-empty, order significant
    std::string continuation_marker;      // "" = plain longest match

    bool contains(std::string_view unit) const {
        return lookup_.count(std::string(unit)) > 0;
    }

    std::size_t max_unit_bytes() const { return max_unit_bytes_; }

    static SubwordVocab make(std::vector<std::string> units, std::string marker = "") {
        SubwordVocab vocab;
        vocab.continuation_marker = std::move(marker);
        for (auto& unit : units) {
            if (unit.empty()) throw Error("subword vocab unit must be non-empty");
            if (!vocab.lookup_.insert(unit).second)
                throw Error("duplicate subword vocab unit: " + unit);
            vocab.max_unit_bytes_ = std::max(vocab.max_unit_bytes_, unit.size());
            vocab.units.push_back(std::move(unit));
        }
        return vocab;
    }

private:
    std::unordered_set<std::string> lookup_;
    std::size_t max_unit_bytes_ = 0;
};

// Vocab file: one unit per line, order significant, no comment syntax
// (a unit may legitimately start with '#').
inline SubwordVocab load_vocab(const std::string& path, std::string marker = "") {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vocab file: " + path);
    std::vector<std::string> units;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) units.push_back(line);
    }
    return SubwordVocab::make(std::move(units), std::move(marker));
}

inline void write_vocab(const SubwordVocab& vocab, std::ostream& out) {
    for (const auto& unit : vocab.units) out << unit << '\n';
}

// Greedy longest-match-first segmentation, left to right, per whitespace-
// separated word. Unmatched codepoints emit <unk> and advance one codepoint.
inline std::vector<std::string> subword_segment(std::string_view text, const SubwordVocab& vocab) {
    std::vector<std::string> units;
    for (const std::string& word : str::split_ws(text)) {
        std::size_t pos = 0;
        while (pos < word.size()) {
            std::size_t best = 0;
            std::size_t limit = std::min(vocab.max_unit_bytes(), word.size() - pos);
            for (std::size_t len = limit; len >= 1; --len) {
                if (vocab.contains(std::string_view(word).substr(pos, len))) {
                    best = len;
                    break;
                }
            }
            if (best > 0) {
                units.emplace_back(word.substr(pos, best));
                pos += best;
            } else {
                auto [cp, cplen] = str::decode_utf8(word, pos);
                (void)cp;
                units.emplace_back(kUnkUnit);
                pos += cplen;
            }
        }
    }
    return units;
}

// Keeps exactly the units used when segmenting the corpora, plus <unk>, the
// continuation marker, and any extra declared specials. Order is preserved.
inline SubwordVocab prune_vocab(const SubwordVocab& vocab,
                                const std::vector<std::vector<std::string>>& corpora,
                                const std::vector<std::string>& extra_specials = {}) {
    std::unordered_set<std::string> used;
    for (const auto& corpus : corpora)
        for (const auto& sentence : corpus)
            for (auto& unit : subword_segment(sentence, vocab)) used.insert(std::move(unit));
    std::unordered_set<std::string> specials(extra_specials.begin(), extra_specials.end());
    specials.insert(kUnkUnit);
    if (!vocab.continuation_marker.empty()) specials.insert(vocab.continuation_marker);
    std::vector<std::string> kept;
    for (const auto& unit : vocab.units)
        if (used.count(unit) > 0 || specials.count(unit) > 0) kept.push_back(unit);
    return SubwordVocab::make(std::move(kept), vocab.continuation_marker);
}

}  // namespace mmt
