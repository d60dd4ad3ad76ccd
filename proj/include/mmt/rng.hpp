#pragma once

#include <cstdint>
#include <vector>

namespace mmt {

// splitmix64. Fixed here (rather than <random>) so masked corpora are
// byte-identical across platforms and standard libraries.
class SmallRng {
public:
    explicit SmallRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Modulo reduction: bias is irrelevant here, determinism is not.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
};

// One stream per (seed, sentence, purpose) triple.
inline std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t sentence_index,
                                std::uint64_t stream_id) {
    SmallRng mixer(seed ^ (0xD1B54A32D192ED03ULL * (sentence_index + 1)) ^
                   (0x8CB92BA72F3D8DD7ULL * (stream_id + 1)));
    return mixer.next();
}

// Deterministic Fisher-Yates shuffle of a copy of `items`.
template <typename T>
std::vector<T> seeded_permutation(std::vector<T> items, std::uint64_t stream_seed) {
    SmallRng rng(stream_seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
    return items;
}

}  // namespace mmt
