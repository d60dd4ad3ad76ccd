#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mmt::str {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && is_space(s[b])) ++b;
    std::size_t e = s.size();
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// Splits on a single delimiter, keeping empty fields.
inline std::vector<std::string> split(std::string_view s, char delim) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == delim) {
            fields.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

// Splits on runs of whitespace, dropping empty chunks.
inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> chunks;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) chunks.emplace_back(s.substr(start, i - start));
    }
    return chunks;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Trailing-'s' plural folding: "cars" -> "car". Single-letter strings are kept.
inline std::string_view fold_plural(std::string_view s) {
    if (s.size() > 1 && s.back() == 's') s.remove_suffix(1);
    return s;
}

// Case-insensitive comparison with plural folding on both sides.
inline bool plural_equal(std::string_view a, std::string_view b) {
    std::string la = to_lower(a), lb = to_lower(b);
    return fold_plural(la) == fold_plural(lb);
}

// Decodes the UTF-8 codepoint starting at `pos`; returns {codepoint, byte length}.
// Malformed bytes decode as one-byte codepoints so scanning always advances.
inline std::pair<std::uint32_t, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else return {b0, 1};
    if (pos + len > s.size()) return {b0, 1};
    for (std::size_t i = 1; i < len; ++i) {
        unsigned char bi = byte(pos + i);
        if ((bi & 0xC0) != 0x80) return {b0, 1};
        cp = (cp << 6) | (bi & 0x3F);
    }
    return {cp, len};
}

}  // namespace mmt::str
