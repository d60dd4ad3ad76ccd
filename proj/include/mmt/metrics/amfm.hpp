#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmt/error.hpp"
#include "mmt/linalg.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

struct AmfmScore {
    double am = 0.0;     // adequacy: latent-space cosine, clipped to [0,1]
    double fm = 0.0;     // fluency: min/max ratio of LM probabilities
    double score = 0.0;  // lambda*am + (1-lambda)*fm
};

// Adequacy space: term-sentence TF-IDF matrix factored by truncated SVD.
// Unseen sentences fold in by term-vector multiplication (U_r^T q).
class AmSpace {
public:
    AmSpace() = default;

    // corpus: tokenized target-language sentences. rank is clamped to the
    // numerical rank of the TF-IDF matrix.
    static AmSpace train(const std::vector<std::vector<std::string>>& corpus, std::size_t rank) {
        if (corpus.size() < 2) throw Error("am space needs at least 2 training sentences");
        if (rank < 1) throw Error("am rank must be >= 1");
        AmSpace space;
        // Vocabulary in first-seen order; document frequencies.
        std::unordered_map<std::string, std::size_t> df;
        for (const auto& sentence : corpus) {
            std::unordered_map<std::string, bool> seen;
            for (const auto& tok : sentence) {
                if (space.term_index_.emplace(tok, space.term_index_.size()).second)
                    space.terms_.push_back(tok);
                if (!seen[tok]) {
                    seen[tok] = true;
                    ++df[tok];
                }
            }
        }
        if (space.terms_.empty()) throw Error("am space training corpus has no tokens");
        // Smoothed idf: strictly positive even for terms in every sentence,
        // so no in-vocabulary sentence maps to the zero vector.
        double n_sentences = static_cast<double>(corpus.size());
        space.idf_.resize(space.terms_.size());
        for (std::size_t t = 0; t < space.terms_.size(); ++t)
            space.idf_[t] = 1.0 + std::log(n_sentences / static_cast<double>(df[space.terms_[t]]));

        Matrix tfidf(space.terms_.size(), corpus.size());
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            auto vec = space.term_vector(corpus[j]);
            for (std::size_t t = 0; t < vec.size(); ++t) tfidf.at(t, j) = vec[t];
        }
        rank = std::min(rank, std::min(tfidf.rows(), tfidf.cols()));
        space.svd_ = truncated_svd(tfidf, rank);
        space.trained_ = true;
        return space;
    }

    bool trained() const { return trained_; }

    std::size_t rank() const { return svd_.sigma.size(); }

    // Raw TF-IDF vector: term count * (1 + ln(N/df)). Out-of-vocabulary
    // terms contribute nothing.
    std::vector<double> term_vector(const std::vector<std::string>& tokens) const {
        std::vector<double> vec(terms_.size(), 0.0);
        for (const auto& tok : tokens) {
            auto it = term_index_.find(tok);
            if (it != term_index_.end()) vec[it->second] += idf_[it->second];
        }
        return vec;
    }

    // Fold-in projection into the latent space.
    std::vector<double> project(const std::vector<std::string>& tokens) const {
        if (!trained_) throw Error("am space is untrained");
        auto q = term_vector(tokens);
        std::vector<double> latent(svd_.sigma.size(), 0.0);
        for (std::size_t k = 0; k < latent.size(); ++k) {
            const double* u = svd_.u.col(k);
            double s = 0.0;
            for (std::size_t t = 0; t < q.size(); ++t) s += u[t] * q[t];
            latent[k] = s;
        }
        return latent;
    }

    // Cosine of the latent projections, clipped to [0,1]. Identical token
    // sequences score exactly 1; a zero projection on either side scores 0.
    double similarity(const std::vector<std::string>& hyp,
                      const std::vector<std::string>& ref) const {
        auto x = project(hyp);
        auto y = project(ref);
        double xy = 0.0, xx = 0.0, yy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            xy += x[k] * y[k];
            xx += x[k] * x[k];
            yy += y[k] * y[k];
        }
        if (xx <= 0.0 || yy <= 0.0) return 0.0;
        if (xy <= 0.0) return 0.0;
        if (xy * xy >= xx * yy) return 1.0;
        return xy / std::sqrt(xx * yy);
    }

private:
    bool trained_ = false;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> term_index_;
    std::vector<double> idf_;
    Svd svd_;
};

// Fluency model: n-gram language model with add-k smoothing over the target
// vocabulary plus <unk>, with <s>/</s> sentence padding.
class FmModel {
public:
    FmModel() = default;

    static FmModel train(const std::vector<std::vector<std::string>>& corpus, std::size_t n = 3,
                         double k = 0.1) {
        if (corpus.empty()) throw Error("fm model needs a non-empty training corpus");
        if (n < 1) throw Error("fm model order must be >= 1");
        FmModel model;
        model.order_ = n;
        model.k_ = k;
        for (const auto& sentence : corpus)
            for (const auto& tok : sentence) model.vocab_.insert(tok);
        // Predicted symbols: vocabulary words, <unk>, </s>.
        model.event_space_ = static_cast<double>(model.vocab_.size()) + 2.0;
        for (const auto& sentence : corpus) {
            auto padded = model.pad(sentence);
            for (std::size_t i = n - 1; i < padded.size(); ++i) {
                std::string context = join_range(padded, i - (n - 1), i);
                ++model.context_counts_[context];
                ++model.ngram_counts_[context + '\x1f' + padded[i]];
            }
        }
        model.trained_ = true;
        return model;
    }

    bool trained() const { return trained_; }

    // Per-token geometric-mean probability of the sentence, </s> included.
    // Empty sentences score 0 by definition.
    double sentence_prob(const std::vector<std::string>& tokens) const {
        if (!trained_) throw Error("fm model is untrained");
        if (tokens.empty()) return 0.0;
        auto padded = pad(map_unk(tokens));
        double log_sum = 0.0;
        std::size_t events = 0;
        for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
            std::string context = join_range(padded, i - (order_ - 1), i);
            double context_count = 0.0, ngram_count = 0.0;
            auto cit = context_counts_.find(context);
            if (cit != context_counts_.end()) context_count = static_cast<double>(cit->second);
            auto nit = ngram_counts_.find(context + '\x1f' + padded[i]);
            if (nit != ngram_counts_.end()) ngram_count = static_cast<double>(nit->second);
            double p = (ngram_count + k_) / (context_count + k_ * event_space_);
            log_sum += std::log(p);
            ++events;
        }
        return std::exp(log_sum / static_cast<double>(events));
    }

private:
    static std::string join_range(const std::vector<std::string>& tokens, std::size_t begin,
                                  std::size_t end) {
        std::string out;
        for (std::size_t i = begin; i < end; ++i) {
            if (i > begin) out += '\x1f';
            out += tokens[i];
        }
        return out;
    }

    std::vector<std::string> pad(std::vector<std::string> tokens) const {
        std::vector<std::string> padded(order_ - 1, "<s>");
        for (auto& tok : tokens) padded.push_back(std::move(tok));
        padded.push_back("</s>");
        return padded;
    }

    std::vector<std::string> map_unk(const std::vector<std::string>& tokens) const {
        std::vector<std::string> mapped;
        mapped.reserve(tokens.size());
        for (const auto& tok : tokens)
            mapped.push_back(vocab_.count(tok) > 0 ? tok : std::string("<unk>"));
        return mapped;
    }

    bool trained_ = false;
    std::size_t order_ = 3;
    double k_ = 0.1;
    double event_space_ = 0.0;
    std::unordered_set<std::string> vocab_;
    std::unordered_map<std::string, std::int64_t> context_counts_;
    std::unordered_map<std::string, std::int64_t> ngram_counts_;
};

// fm = min(q_hyp, q_ref) / max(q_hyp, q_ref), 1 when both are 0.
inline double fluency_ratio(double q_hyp, double q_ref) {
    double lo = std::min(q_hyp, q_ref);
    double hi = std::max(q_hyp, q_ref);
    if (hi == 0.0) return 1.0;
    return lo / hi;
}

inline AmfmScore amfm(const std::vector<std::string>& hyp_tokens,
                      const std::vector<std::string>& ref_tokens, const AmSpace& am_space,
                      const FmModel& fm_lm, double lambda = 0.5) {
    if (!am_space.trained()) throw Error("amfm: am space is untrained");
    if (!fm_lm.trained()) throw Error("amfm: fm model is untrained");
    AmfmScore out;
    out.am = am_space.similarity(hyp_tokens, ref_tokens);
    out.fm = fluency_ratio(fm_lm.sentence_prob(hyp_tokens), fm_lm.sentence_prob(ref_tokens));
    out.score = lambda * out.am + (1.0 - lambda) * out.fm;
    return out;
}

// Text-level convenience: tokenizes with the supplied tokenizer (the target
// side uses tokenize_hi in this harness).
inline AmfmScore amfm(std::string_view hyp, std::string_view ref, const AmSpace& am_space,
                      const FmModel& fm_lm, double lambda = 0.5,
                      TokenSeq (*tokenizer)(std::string_view) = tokenize_hi) {
    return amfm(tokenizer(hyp).tokens, tokenizer(ref).tokens, am_space, fm_lm, lambda);
}

}  // namespace mmt
