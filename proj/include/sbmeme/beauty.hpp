#pragma once

#include "sbmeme/core_types.hpp"
#include "sbmeme/peaks.hpp"

#include <optional>

namespace sbmeme {

/// Result of a chord-distance argmax. `degenerate` marks windows too small
/// to search; the tick is then the window edge next to the peak.
struct ChordPick {
    int tick = 0;
    bool degenerate = false;
};

/// Awakening time: argmax over t in [search_lo, peak) of the distance from
/// (t, S(t)) to the line through (anchor_start, S(anchor_start)) and
/// (peak, S(peak)). Distance ties pick the latest tick.
ChordPick awakening_time(const TimeSeries& series, int anchor_start, int peak,
                         int search_lo);

/// Falling-asleep time: argmax over t in (peak, search_hi] of the distance
/// from (t, S(t)) to the line through (peak, S(peak)) and
/// (anchor_end, S(anchor_end)). Distance ties pick the earliest tick.
ChordPick falling_asleep_time(const TimeSeries& series, int peak,
                              int anchor_end, int search_hi);

/// Mean normalized gap between the chord through (window_start, S) and
/// (line_end, S) and the trajectory over [window_start, window_end]:
///   (1/(window_end-window_start)) * sum (l(t) - S(t)) / max{1, S(t)}
double beauty_coefficient(const TimeSeries& series, int window_start,
                          int window_end, int line_end);

struct BeautyOutcome {
    std::optional<TwoBeautyProfile> profile;        // engaged iff accepted
    RejectReason reason = RejectReason::none;
};

/// Full identification pipeline for one series: peak detection, the eight
/// timestamps, ordering filter, and the alpha threshold on both beauty
/// coefficients. Never throws on rejection; the reason is machine readable.
BeautyOutcome identify_two_beauties(const TimeSeries& series,
                                    const PeakParams& params = {},
                                    double alpha = kDefaultAlpha);

} // namespace sbmeme
