#pragma once

#include <string>
#include <vector>

namespace sbmeme {

/// Per-meme simulation quality.
struct FitReport {
    std::string meme_id;
    double pearson_r = 0.0;
    int peak_error_k = 0;   // |simulated t2 - observed t2| on the re-based axis
};

/// Product-moment correlation. Throws DegenerateSeries when either input
/// has zero variance; lengths must match and be >= 2.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct PrecisionAtK {
    int count = 0;
    double fraction = 0.0;
};

/// Count and fraction of reports with peak_error_k <= k.
PrecisionAtK precision_at_k(const std::vector<FitReport>& reports, int k);

/// Tick-wise average over the memes with a nonzero value at that tick;
/// ticks where no meme is active yield 0. Series are already aligned to the
/// re-based origin and may have different lengths.
std::vector<double> averaged_curve(const std::vector<std::vector<double>>& aligned);

} // namespace sbmeme
