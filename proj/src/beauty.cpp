#include "sbmeme/beauty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbmeme {

namespace {

// Distance from (t, S(t)) to the line through (x1, S(x1)) and (x2, S(x2)).
double chord_distance(const TimeSeries& s, int x1, int x2, int t) {
    const double a = s[x2] - s[x1];
    const double b = static_cast<double>(x2 - x1);
    return std::abs(a * (t - x1) + b * (s[x1] - s[t])) / std::hypot(a, b);
}

} // namespace

ChordPick awakening_time(const TimeSeries& series, int anchor_start, int peak,
                         int search_lo) {
    if (anchor_start < 0 || peak > series.last_tick() || anchor_start >= peak)
        throw std::invalid_argument("awakening_time: anchor must precede peak");
    if (search_lo < anchor_start || search_lo >= peak)
        throw std::invalid_argument("awakening_time: search_lo out of [anchor, peak)");
    if (search_lo >= peak - 1) return {peak - 1, true};

    int best = search_lo;
    double best_d = -1.0;
    for (int t = search_lo; t < peak; ++t) {
        double d = chord_distance(series, anchor_start, peak, t);
        if (d >= best_d) {   // tie: latest tick
            best_d = d;
            best = t;
        }
    }
    return {best, false};
}

ChordPick falling_asleep_time(const TimeSeries& series, int peak, int anchor_end,
                              int search_hi) {
    if (peak < 0 || anchor_end > series.last_tick() || peak >= anchor_end)
        throw std::invalid_argument("falling_asleep_time: peak must precede anchor");
    if (search_hi <= peak || search_hi > anchor_end)
        throw std::invalid_argument("falling_asleep_time: search_hi out of (peak, anchor]");
    if (search_hi <= peak + 1) return {peak + 1, true};

    int best = peak + 1;
    double best_d = -1.0;
    for (int t = peak + 1; t <= search_hi; ++t) {
        double d = chord_distance(series, anchor_end, peak, t);
        if (d > best_d) {   // tie: earliest tick
            best_d = d;
            best = t;
        }
    }
    return {best, false};
}

double beauty_coefficient(const TimeSeries& series, int window_start,
                          int window_end, int line_end) {
    if (window_start >= window_end)
        throw std::invalid_argument("beauty_coefficient: zero-width window");
    if (window_end > line_end || line_end > series.last_tick() || window_start < 0)
        throw std::invalid_argument("beauty_coefficient: window out of range");

    const double slope =
        (series[line_end] - series[window_start]) / (line_end - window_start);
    double sum = 0.0;
    for (int t = window_start; t <= window_end; ++t) {
        const double line = slope * (t - window_start) + series[window_start];
        sum += (line - series[t]) / std::max(1.0, series[t]);
    }
    return sum / (window_end - window_start);
}

BeautyOutcome identify_two_beauties(const TimeSeries& series,
                                    const PeakParams& params, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("identify_two_beauties: alpha must be > 0");

    BeautyOutcome out;
    const int t_end = series.last_tick();

    const PeakSet peaks = detect_peaks(series, params);
    if (peaks.peaks.empty()) {
        out.reason = RejectReason::too_few_peaks;
        return out;
    }

    // t2: the highest-valued detected peak (ties: latest); it must carry the
    // series' global maximum
    const Peak* p2 = &peaks.peaks.front();
    for (const Peak& p : peaks.peaks) {
        if (p.value >= p2->value) p2 = &p;
    }
    const double global_max = *std::max_element(series.values().begin(),
                                                series.values().end());
    if (p2->value != global_max) {
        out.reason = RejectReason::too_few_peaks;
        return out;
    }
    const int t2 = p2->index;

    // t1: highest-valued detected peak strictly before t2 (ties: later)
    const Peak* p1 = nullptr;
    for (const Peak& p : peaks.peaks) {
        if (p.index >= t2) break;
        if (!p1 || p.value >= p1->value) p1 = &p;
    }
    if (!p1) {
        out.reason = RejectReason::too_few_peaks;
        return out;
    }
    const int t1 = p1->index;

    // windows collapse when a peak touches the series edge or its neighbor
    if (t1 < 1 || t1 + 1 >= t2 || t2 >= t_end) {
        out.reason = RejectReason::degenerate;
        return out;
    }

    const ChordPick a2 = awakening_time(series, 0, t2, t1 + 1);
    const ChordPick f2 = falling_asleep_time(series, t2, t_end, t_end);
    const ChordPick a1 = awakening_time(series, 0, t1, 0);
    const ChordPick f1 = falling_asleep_time(series, t1, t_end, a2.tick);
    if (a1.degenerate || a2.degenerate || f1.degenerate || f2.degenerate) {
        out.reason = RejectReason::degenerate;
        return out;
    }
    const int ta1 = a1.tick, tf1 = f1.tick, ta2 = a2.tick, tf2 = f2.tick;

    if (!(0 < ta1 && ta1 < t1 && t1 < tf1 && tf1 < ta2 && ta2 < t2 && t2 < tf2 &&
          tf2 <= t_end)) {
        out.reason = RejectReason::ordering;
        return out;
    }

    const double b1 = beauty_coefficient(series, 0, ta1, t1);
    const double b2 = beauty_coefficient(series, tf1, ta2, t2);
    if (!(b1 > alpha * series[t1] && b2 > alpha * series[t2])) {
        out.reason = RejectReason::threshold;
        return out;
    }

    const double v1 = (series[t1] - series[ta1]) / (t1 - ta1);
    const double v2 = (series[t2] - series[ta2]) / (t2 - ta2);
    if (!(v1 > 0.0 && v2 > 0.0)) {
        out.reason = RejectReason::threshold;
        return out;
    }

    double m1 = 0.0, m2 = 0.0;
    for (int t = ta1; t <= tf1; ++t) m1 += series[t];
    for (int t = ta2; t <= tf2; ++t) m2 += series[t];

    out.profile = TwoBeautyProfile::checked(series.meme_id(), 0, ta1, t1, tf1,
                                            ta2, t2, tf2, t_end, b1, b2, m1, m2,
                                            v1, v2, series[t1], series[t2], alpha);
    return out;
}

} // namespace sbmeme
