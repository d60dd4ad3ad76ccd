#pragma once

#include <cmath>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmt/textproc.hpp"

namespace mmt {

struct RibesScore {
    double nkt = 0.0;                // normalized Kendall tau, in [0,1]
    double unigram_precision = 0.0;  // aligned / |hyp|
    double bp = 1.0;                 // min(1, exp(1 - |ref|/|hyp|))
    double score = 0.0;              // nkt * precision^alpha * bp^beta
};

namespace detail {

using PositionIndex = std::unordered_map<std::string, std::vector<std::size_t>>;

inline PositionIndex index_positions(const std::vector<std::string>& tokens) {
    PositionIndex index;
    for (std::size_t i = 0; i < tokens.size(); ++i) index[tokens[i]].push_back(i);
    return index;
}

inline std::size_t count_bigram(const std::vector<std::string>& tokens, const std::string& a,
                                const std::string& b, std::size_t* first_pos) {
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == a && tokens[i + 1] == b) {
            if (count == 0 && first_pos) *first_pos = i;
            ++count;
        }
    }
    return count;
}

// One-to-one word alignment: a hyp token aligns to a ref position when the
// token occurs exactly once in both sides, or when its previous/next bigram
// is unique in both sides and disambiguates it.
inline std::vector<std::size_t> align_positions(const std::vector<std::string>& hyp,
                                                const std::vector<std::string>& ref) {
    PositionIndex ref_index = index_positions(ref);
    PositionIndex hyp_index = index_positions(hyp);
    std::vector<std::size_t> aligned;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        auto ref_it = ref_index.find(hyp[i]);
        if (ref_it == ref_index.end()) continue;
        const auto& ref_positions = ref_it->second;
        const auto& hyp_positions = hyp_index[hyp[i]];
        if (ref_positions.size() == 1 && hyp_positions.size() == 1) {
            aligned.push_back(ref_positions.front());
            continue;
        }
        // Previous-token bigram.
        if (i > 0) {
            std::size_t ref_pos = 0, hyp_pos = 0;
            if (count_bigram(ref, hyp[i - 1], hyp[i], &ref_pos) == 1 &&
                count_bigram(hyp, hyp[i - 1], hyp[i], &hyp_pos) == 1) {
                aligned.push_back(ref_pos + 1);
                continue;
            }
        }
        // Next-token bigram.
        if (i + 1 < hyp.size()) {
            std::size_t ref_pos = 0, hyp_pos = 0;
            if (count_bigram(ref, hyp[i], hyp[i + 1], &ref_pos) == 1 &&
                count_bigram(hyp, hyp[i], hyp[i + 1], &hyp_pos) == 1) {
                aligned.push_back(ref_pos);
                continue;
            }
        }
    }
    return aligned;
}

}  // namespace detail

// Sentence RIBES. Fewer than two alignments give score 0; empty inputs are
// allowed.
inline RibesScore ribes(const TokenSeq& hyp, const TokenSeq& ref, double alpha = 0.25,
                        double beta = 0.10) {
    RibesScore out;
    if (hyp.tokens.empty()) return out;
    out.bp = std::min(1.0, std::exp(1.0 - static_cast<double>(ref.tokens.size()) /
                                              static_cast<double>(hyp.tokens.size())));
    auto aligned = detail::align_positions(hyp.tokens, ref.tokens);
    out.unigram_precision =
        static_cast<double>(aligned.size()) / static_cast<double>(hyp.tokens.size());
    if (aligned.size() < 2) return out;  // nkt 0, score 0
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i + 1 < aligned.size(); ++i) {
        for (std::size_t j = i + 1; j < aligned.size(); ++j) {
            if (aligned[i] < aligned[j]) ++concordant;
            else if (aligned[i] > aligned[j]) ++discordant;
        }
    }
    double pairs = static_cast<double>(aligned.size()) * (aligned.size() - 1) / 2.0;
    double tau = (concordant - discordant) / pairs;
    out.nkt = (tau + 1.0) / 2.0;
    out.score = out.nkt * std::pow(out.unigram_precision, alpha) * std::pow(out.bp, beta);
    return out;
}

// Corpus RIBES: mean of sentence scores.
inline double ribes_corpus(std::span<const TokenSeq> hyps, std::span<const TokenSeq> refs,
                           double alpha = 0.25, double beta = 0.10) {
    if (hyps.size() != refs.size())
        throw Error("ribes_corpus: " + std::to_string(hyps.size()) + " hypotheses vs " +
                    std::to_string(refs.size()) + " references");
    if (hyps.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < hyps.size(); ++i) sum += ribes(hyps[i], refs[i], alpha, beta).score;
    return sum / static_cast<double>(hyps.size());
}

inline double ribes_corpus(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs,
                           double alpha = 0.25, double beta = 0.10) {
    return ribes_corpus(std::span<const TokenSeq>(hyps), std::span<const TokenSeq>(refs), alpha,
                        beta);
}

}  // namespace mmt
