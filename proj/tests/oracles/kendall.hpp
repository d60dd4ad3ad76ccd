#pragma once

// Test-only brute-force Kendall tau over a list of ranks: counts concordant
// and discordant pairs directly.

#include <cstddef>
#include <vector>

namespace oracle {

inline double kendall_tau(const std::vector<std::size_t>& ranks) {
    std::size_t n = ranks.size();
    if (n < 2) return 0.0;
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (ranks[i] < ranks[j]) ++concordant;
            else if (ranks[i] > ranks[j]) ++discordant;
        }
    }
    double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    return (concordant - discordant) / pairs;
}

}  // namespace oracle
