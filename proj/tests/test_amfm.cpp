#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <mmt/metrics/amfm.hpp>

#include "oracles/tiny_svd.hpp"

using Corpus = std::vector<std::vector<std::string>>;

namespace {

// Independent TF-IDF route for the oracle: tf * (1 + ln(N/df)), terms in
// first-seen order.
struct OracleTfidf {
    std::vector<std::string> terms;
    std::map<std::string, std::size_t> index;
    std::map<std::string, double> idf;

    explicit OracleTfidf(const Corpus& corpus) {
        std::map<std::string, std::size_t> df;
        for (const auto& sentence : corpus) {
            std::set<std::string> uniq(sentence.begin(), sentence.end());
            for (const auto& t : uniq) ++df[t];
            for (const auto& t : sentence)
                if (index.emplace(t, terms.size()).second) terms.push_back(t);
        }
        for (const auto& [term, count] : df)
            idf[term] = 1.0 + std::log(static_cast<double>(corpus.size()) / count);
    }

    std::vector<double> vec(const std::vector<std::string>& sentence) const {
        std::vector<double> v(terms.size(), 0.0);
        for (const auto& t : sentence) {
            auto it = index.find(t);
            if (it != index.end()) v[it->second] += idf.at(t);
        }
        return v;
    }

    oracle::Cols matrix(const Corpus& corpus) const {
        oracle::Cols m;
        m.rows = terms.size();
        for (const auto& sentence : corpus) m.cols.push_back(vec(sentence));
        return m;
    }
};

// Independent add-k n-gram probability route for the oracle.
double oracle_sentence_prob(const Corpus& corpus, std::vector<std::string> query,
                            std::size_t n = 3, double k = 0.1) {
    if (query.empty()) return 0.0;
    std::set<std::string> vocab;
    for (const auto& s : corpus)
        for (const auto& t : s) vocab.insert(t);
    double event_space = static_cast<double>(vocab.size()) + 2.0;
    std::map<std::vector<std::string>, double> context_counts, ngram_counts;
    for (const auto& s : corpus) {
        std::vector<std::string> padded(n - 1, "<s>");
        padded.insert(padded.end(), s.begin(), s.end());
        padded.push_back("</s>");
        for (std::size_t i = n - 1; i < padded.size(); ++i) {
            std::vector<std::string> ctx(padded.begin() + (i - (n - 1)), padded.begin() + i);
            context_counts[ctx] += 1.0;
            ctx.push_back(padded[i]);
            ngram_counts[ctx] += 1.0;
        }
    }
    for (auto& t : query)
        if (vocab.count(t) == 0) t = "<unk>";
    std::vector<std::string> padded(n - 1, "<s>");
    padded.insert(padded.end(), query.begin(), query.end());
    padded.push_back("</s>");
    double log_sum = 0.0;
    std::size_t events = 0;
    for (std::size_t i = n - 1; i < padded.size(); ++i) {
        std::vector<std::string> ctx(padded.begin() + (i - (n - 1)), padded.begin() + i);
        double cc = context_counts.count(ctx) ? context_counts[ctx] : 0.0;
        ctx.push_back(padded[i]);
        double nc = ngram_counts.count(ctx) ? ngram_counts[ctx] : 0.0;
        log_sum += std::log((nc + k) / (cc + k * event_space));
        ++events;
    }
    return std::exp(log_sum / static_cast<double>(events));
}

const Corpus kToyCorpus = {{"the", "cat", "sat"},
                           {"the", "dog", "ran"},
                           {"a", "cat", "ran"},
                           {"green", "tea", "please"},
                           {"the", "cat", "sat", "sat"}};

}  // namespace

TEST_CASE("identity scores exactly 1.0 for in-vocabulary sentences") {
    auto space = mmt::AmSpace::train(kToyCorpus, 3);
    auto lm = mmt::FmModel::train(kToyCorpus);
    for (const auto& sentence : kToyCorpus) {
        auto s = mmt::amfm(sentence, sentence, space, lm);
        CHECK(s.am == 1.0);
        CHECK(s.fm == 1.0);
        CHECK(s.score == 1.0);
    }
}

TEST_CASE("amfm is symmetric") {
    auto space = mmt::AmSpace::train(kToyCorpus, 3);
    auto lm = mmt::FmModel::train(kToyCorpus);
    std::vector<std::string> h = {"the", "cat", "ran"};
    std::vector<std::string> r = {"a", "dog", "sat"};
    auto ab = mmt::amfm(h, r, space, lm);
    auto ba = mmt::amfm(r, h, space, lm);
    CHECK(std::fabs(ab.am - ba.am) <= 1e-12);
    CHECK(std::fabs(ab.fm - ba.fm) <= 1e-12);
    CHECK(std::fabs(ab.score - ba.score) <= 1e-12);
}

TEST_CASE("disjoint vocabulary gives am 0") {
    Corpus corpus = {{"aa", "aa"}, {"bb", "bb"}};
    auto space = mmt::AmSpace::train(corpus, 2);
    CHECK(space.similarity({"aa"}, {"bb"}) == 0.0);
}

TEST_CASE("rank-1 space over two orthogonal one-word sentences") {
    Corpus corpus = {{"aa"}, {"bb"}};
    auto space = mmt::AmSpace::train(corpus, 1);
    REQUIRE(space.rank() == 1);
    auto p0 = space.project({"aa"});
    auto p1 = space.project({"bb"});
    // Projections are orthogonal or zero.
    CHECK(std::fabs(p0[0] * p1[0]) <= 1e-12);
}

TEST_CASE("requested rank clamps to the matrix rank") {
    Corpus corpus = {{"aa"}, {"aa"}, {"aa"}};  // rank-1 matrix
    auto space = mmt::AmSpace::train(corpus, 3);
    CHECK(space.rank() == 1);
}

TEST_CASE("two-column latent space matches the closed-form oracle") {
    Corpus corpus = {{"u", "v", "v"}, {"v", "w"}};
    auto space = mmt::AmSpace::train(corpus, 2);

    OracleTfidf tfidf(corpus);
    auto svd = oracle::svd_two_columns(tfidf.matrix(corpus));

    std::vector<std::vector<std::string>> queries = {
        {"u", "v"}, {"v", "w"}, {"u", "w", "v"}, {"v", "v"}};
    for (const auto& h : queries) {
        for (const auto& r : queries) {
            double got = space.similarity(h, r);
            double want = oracle::clipped_cosine(oracle::project(svd, tfidf.vec(h), 2),
                                                 oracle::project(svd, tfidf.vec(r), 2));
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("five-sentence toy corpus matches the scripted oracle end to end") {
    auto space = mmt::AmSpace::train(kToyCorpus, 2);
    auto lm = mmt::FmModel::train(kToyCorpus);

    OracleTfidf tfidf(kToyCorpus);
    auto svd = oracle::svd_power_iteration(tfidf.matrix(kToyCorpus), 2);

    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs = {
        {{"the", "cat", "sat"}, {"the", "cat", "ran"}},
        {{"a", "dog", "ran"}, {"the", "dog", "ran"}},
        {{"green", "tea"}, {"green", "tea", "please"}},
    };
    for (const auto& [h, r] : pairs) {
        double am_want = oracle::clipped_cosine(oracle::project(svd, tfidf.vec(h), 2),
                                                oracle::project(svd, tfidf.vec(r), 2));
        double qh = oracle_sentence_prob(kToyCorpus, h);
        double qr = oracle_sentence_prob(kToyCorpus, r);
        double fm_want = (qh == 0.0 && qr == 0.0) ? 1.0 : std::min(qh, qr) / std::max(qh, qr);
        double want = 0.5 * am_want + 0.5 * fm_want;
        auto got = mmt::amfm(h, r, space, lm);
        CHECK(got.am == doctest::Approx(am_want).epsilon(1e-6));
        CHECK(got.fm == doctest::Approx(fm_want).epsilon(1e-9));
        CHECK(got.score == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("single-sentence fm model: hand-computed smoothed counts") {
    Corpus corpus = {{"a"}};
    auto lm = mmt::FmModel::train(corpus);
    // Events: P(a | <s> <s>) and P(</s> | <s> a), both (1 + 0.1)/(1 + 0.1*3).
    double p = 1.1 / 1.3;
    CHECK(lm.sentence_prob({"a"}) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("unseen words get nonzero probability") {
    auto lm = mmt::FmModel::train(kToyCorpus);
    CHECK(lm.sentence_prob({"zebra", "xylophone"}) > 0.0);
}

TEST_CASE("empty query scores 0 by definition") {
    auto lm = mmt::FmModel::train(kToyCorpus);
    CHECK(lm.sentence_prob({}) == 0.0);
}

TEST_CASE("untrained models are an error") {
    mmt::AmSpace space;
    mmt::FmModel lm;
    std::vector<std::string> tokens = {"a"};
    CHECK_THROWS_AS(mmt::amfm(tokens, tokens, space, lm), mmt::Error);
}
