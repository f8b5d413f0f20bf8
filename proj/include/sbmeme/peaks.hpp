#pragma once

#include "sbmeme/core_types.hpp"

namespace sbmeme {

/// Spike detection parameters. The defaults are universal across
/// granularities and media.
struct PeakParams {
    int k = 5;       // neighborhood half-width
    double h = 0.5;  // significance multiplier on the score stddev
};

/// Average of the max signed left and right differences within k ticks.
/// A side with no neighbors contributes 0.
double spike_score(const TimeSeries& series, int i, int k);

/// Keeps ticks whose positive score exceeds mean + h*stddev of all scores,
/// are local maxima within one tick, then suppresses candidates closer than
/// k to a higher-valued one (value ties keep the earlier tick). Series
/// shorter than 2k+1 yield an empty set flagged short_series.
PeakSet detect_peaks(const TimeSeries& series, const PeakParams& params = {});

} // namespace sbmeme
