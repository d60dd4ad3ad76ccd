#pragma once

#include <cmath>

#include "mmt/error.hpp"

namespace mmt {

struct DegradationRow {
    double base_bleu = 0.0;
    double degraded_bleu = 0.0;
    double degradation_pct = 0.0;  // 100*(base - degraded)/base
};

// Robustness summary of the degradation tables: how much of the base score
// is lost under full masking.
inline double degradation_pct(double base, double degraded) {
    if (base <= 0.0) throw Error("degradation_pct: base score must be > 0");
    return 100.0 * (base - degraded) / base;
}

// Scores are reported rounded to one decimal.
inline double round1(double x) { return std::round(x * 10.0) / 10.0; }

}  // namespace mmt
