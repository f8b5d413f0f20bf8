#include "sbmeme/eval.hpp"

#include "sbmeme/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbmeme {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pearson: series lengths differ");
    if (a.size() < 2)
        throw std::invalid_argument("pearson: need at least 2 points");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw DegenerateSeries("pearson: zero-variance series");
    return sab / std::sqrt(saa * sbb);
}

PrecisionAtK precision_at_k(const std::vector<FitReport>& reports, int k) {
    if (reports.empty())
        throw std::invalid_argument("precision_at_k: no reports");
    if (k < 0) throw std::invalid_argument("precision_at_k: k must be >= 0");
    PrecisionAtK out;
    for (const FitReport& r : reports)
        if (r.peak_error_k <= k) ++out.count;
    out.fraction = static_cast<double>(out.count) / static_cast<double>(reports.size());
    return out;
}

std::vector<double> averaged_curve(const std::vector<std::vector<double>>& aligned) {
    if (aligned.empty())
        throw std::invalid_argument("averaged_curve: empty collection");
    std::size_t max_len = 0;
    for (const auto& s : aligned) max_len = std::max(max_len, s.size());
    std::vector<double> out(max_len, 0.0);
    for (std::size_t t = 0; t < max_len; ++t) {
        double sum = 0.0;
        int active = 0;   // only memes with a nonzero value count
        for (const auto& s : aligned) {
            if (t < s.size() && s[t] != 0.0) {
                sum += s[t];
                ++active;
            }
        }
        out[t] = active > 0 ? sum / active : 0.0;
    }
    return out;
}

} // namespace sbmeme
