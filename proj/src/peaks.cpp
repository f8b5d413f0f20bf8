#include "sbmeme/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbmeme {

double spike_score(const TimeSeries& series, int i, int k) {
    if (k < 1) throw std::invalid_argument("spike_score: k must be >= 1");
    if (i < 0 || i > series.last_tick())
        throw std::invalid_argument("spike_score: tick out of range");
    const double si = series[i];
    double left = 0.0, right = 0.0;
    bool has_left = false, has_right = false;
    for (int j = 1; j <= k; ++j) {
        if (i - j >= 0) {
            double d = si - series[i - j];
            left = has_left ? std::max(left, d) : d;
            has_left = true;
        }
        if (i + j <= series.last_tick()) {
            double d = si - series[i + j];
            right = has_right ? std::max(right, d) : d;
            has_right = true;
        }
    }
    return (left + right) / 2.0;
}

PeakSet detect_peaks(const TimeSeries& series, const PeakParams& params) {
    if (params.k < 1) throw std::invalid_argument("detect_peaks: k must be >= 1");
    if (!(params.h > 0.0)) throw std::invalid_argument("detect_peaks: h must be > 0");

    const int n = series.size();
    PeakSet out;
    if (n < 2 * params.k + 1) {
        out.short_series = true;
        return out;
    }

    std::vector<double> scores(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        scores[static_cast<std::size_t>(i)] = spike_score(series, i, params.k);

    const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    const double stddev = std::sqrt(var / n);

    // positive score, above mean + h*stddev, and a local maximum within one
    // tick (shoulders of wide spikes would otherwise pass as candidates)
    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
        double sc = scores[static_cast<std::size_t>(i)];
        if (!(sc > 0.0) || !(sc - mean > params.h * stddev)) continue;
        if (i > 0 && series[i] < series[i - 1]) continue;
        if (i < n - 1 && series[i] < series[i + 1]) continue;
        candidates.push_back(i);
    }

    // keep only the highest-valued among candidates closer than k; value
    // ties keep the earlier tick
    std::vector<int> by_value = candidates;
    std::sort(by_value.begin(), by_value.end(), [&](int a, int b) {
        if (series[a] != series[b]) return series[a] > series[b];
        return a < b;
    });
    std::vector<int> kept;
    for (int i : by_value) {
        bool suppressed = false;
        for (int j : kept) {
            if (std::abs(i - j) < params.k) { suppressed = true; break; }
        }
        if (!suppressed) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());

    out.peaks.reserve(kept.size());
    for (int i : kept)
        out.peaks.push_back(Peak{i, series[i], scores[static_cast<std::size_t>(i)]});
    return out;
}

} // namespace sbmeme
