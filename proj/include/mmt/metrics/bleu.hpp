#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmt/error.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

struct BleuBreakdown {
    std::array<double, 4> precisions{0.0, 0.0, 0.0, 0.0};  // p1..p4
    double brevity_penalty = 1.0;
    std::int64_t hyp_len = 0;
    std::int64_t ref_len = 0;
    double score = 0.0;  // in [0,100]
};

namespace detail {

// n-gram key: tokens joined by a separator byte that cannot appear in them
// (tokens never contain whitespace, let alone control bytes).
inline std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start,
                             std::size_t n) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) key += '\x1f';
        key += tokens[start + k];
    }
    return key;
}

}  // namespace detail

// Corpus BLEU, single reference per hypothesis: modified n-gram precision
// with per-sentence clipping, uniform 1/4 weights, no smoothing (any zero
// precision gives score 0), brevity penalty 1 if hyp_len >= ref_len else
// exp(1 - ref_len/hyp_len).
inline BleuBreakdown bleu(std::span<const TokenSeq> hyps, std::span<const TokenSeq> refs,
                          std::size_t max_n = 4) {
    if (hyps.size() != refs.size())
        throw Error("bleu: " + std::to_string(hyps.size()) + " hypotheses vs " +
                    std::to_string(refs.size()) + " references");
    if (hyps.empty()) throw Error("bleu: empty corpus");
    if (max_n == 0 || max_n > 4) throw Error("bleu: max_n must be in 1..4");

    std::array<std::int64_t, 4> correct{0, 0, 0, 0};
    std::array<std::int64_t, 4> total{0, 0, 0, 0};
    BleuBreakdown out;
    for (std::size_t s = 0; s < hyps.size(); ++s) {
        const auto& hyp = hyps[s].tokens;
        const auto& ref = refs[s].tokens;
        out.hyp_len += static_cast<std::int64_t>(hyp.size());
        out.ref_len += static_cast<std::int64_t>(ref.size());
        for (std::size_t n = 1; n <= max_n; ++n) {
            if (hyp.size() < n) continue;
            total[n - 1] += static_cast<std::int64_t>(hyp.size() - n + 1);
            std::unordered_map<std::string, std::int64_t> hyp_counts, ref_counts;
            for (std::size_t i = 0; i + n <= hyp.size(); ++i)
                ++hyp_counts[detail::ngram_key(hyp, i, n)];
            if (ref.size() >= n)
                for (std::size_t i = 0; i + n <= ref.size(); ++i)
                    ++ref_counts[detail::ngram_key(ref, i, n)];
            for (const auto& [key, count] : hyp_counts) {
                auto it = ref_counts.find(key);
                if (it != ref_counts.end()) correct[n - 1] += std::min(count, it->second);
            }
        }
    }

    // Orders with no hypothesis n-grams at all are vacuously precise: p_n = 1.
    // Required so BLEU(h,h) is 100 even for corpora shorter than max_n tokens.
    bool any_zero = false;
    for (std::size_t n = 0; n < max_n; ++n) {
        out.precisions[n] =
            total[n] > 0 ? static_cast<double>(correct[n]) / static_cast<double>(total[n]) : 1.0;
        if (out.precisions[n] == 0.0) any_zero = true;
    }
    out.brevity_penalty =
        (out.hyp_len >= out.ref_len || out.hyp_len == 0)
            ? 1.0
            : std::exp(1.0 - static_cast<double>(out.ref_len) / static_cast<double>(out.hyp_len));
    if (any_zero || out.hyp_len == 0) {
        out.score = 0.0;
    } else {
        double log_sum = 0.0;
        for (std::size_t n = 0; n < max_n; ++n) log_sum += std::log(out.precisions[n]);
        out.score = 100.0 * out.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
    }
    return out;
}

inline BleuBreakdown bleu(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs,
                          std::size_t max_n = 4) {
    return bleu(std::span<const TokenSeq>(hyps), std::span<const TokenSeq>(refs), max_n);
}

}  // namespace mmt
