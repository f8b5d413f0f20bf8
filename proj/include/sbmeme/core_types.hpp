#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sbmeme {

constexpr double kDefaultAlpha = 1.0 / 3.0;

/// Metadata only: every computation works on dimensionless integer ticks.
enum class Granularity { day, week, month, year };

std::string to_string(Granularity g);
Granularity granularity_from_string(const std::string& s);

/// One meme's popularity trajectory S(t) on contiguous ticks t = 0..T.
/// Immutable after construction; safe to share across threads.
class TimeSeries {
public:
    /// Validates: at least two ticks, all values finite and >= 0.
    TimeSeries(std::string meme_id, Granularity granularity,
               std::vector<double> values);

    const std::string& meme_id() const noexcept { return meme_id_; }
    Granularity granularity() const noexcept { return granularity_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Unchecked access, t must be in [0, last_tick()].
    double operator[](int t) const { return values_[static_cast<size_t>(t)]; }
    /// Bounds-checked access.
    double at(int t) const;

    int last_tick() const noexcept { return static_cast<int>(values_.size()) - 1; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

private:
    std::string meme_id_;
    Granularity granularity_;
    std::vector<double> values_;
};

/// A spike-detected candidate peak.
struct Peak {
    int index = 0;
    double value = 0.0;
    double spike_score = 0.0;
};

struct PeakSet {
    std::vector<Peak> peaks;     // sorted by tick
    bool short_series = false;   // series shorter than 2k+1, detection skipped
};

enum class RejectReason { none, too_few_peaks, ordering, threshold, degenerate };

std::string to_string(RejectReason r);
RejectReason reject_reason_from_string(const std::string& s);

/// The eight ordered timestamps of an accepted two-beauty meme plus its
/// derived measures. `t_end` is the last tick T of the series.
struct TwoBeautyProfile {
    std::string meme_id;
    int t0 = 0;
    int ta1 = 0;
    int t1 = 0;
    int tf1 = 0;
    int ta2 = 0;
    int t2 = 0;
    int tf2 = 0;
    int t_end = 0;
    double b1 = 0.0;
    double b2 = 0.0;
    double m1 = 0.0;   // awake-window popularity sums
    double m2 = 0.0;
    double v1 = 0.0;   // rising velocities
    double v2 = 0.0;
    int gap = 0;       // ta2 - tf1

    /// Validating factory. `s_t1`/`s_t2` are the series values at the two
    /// peaks; the thresholds b1 > alpha*s_t1 and b2 > alpha*s_t2 must hold,
    /// the stamps must strictly ascend with tf2 <= t_end, and gap must equal
    /// ta2 - tf1. Throws std::invalid_argument on any violation.
    static TwoBeautyProfile checked(std::string meme_id, int t0, int ta1,
                                    int t1, int tf1, int ta2, int t2, int tf2,
                                    int t_end, double b1, double b2, double m1,
                                    double m2, double v1, double v2,
                                    double s_t1, double s_t2,
                                    double alpha = kDefaultAlpha);
};

/// One Bass generation. The peak delay ln(q/p)/(p+q) must be positive,
/// hence q > p is required.
struct BassGeneration {
    double p = 0.0;   // innovation coefficient
    double q = 0.0;   // imitation coefficient
    double m = 0.0;   // diffusion potential
    int onset = 0;    // ticks after the re-based origin ta1

    /// Validates p > 0, q > p, m > 0, onset >= 0.
    static BassGeneration checked(double p, double q, double m, int onset);

    /// ln(q/p)/(p+q), the continuous peak delay of this generation.
    double peak_delay() const;
};

/// Two-generation Bass model on the re-based axis (t = 0 at ta1).
struct TwoStageBassModel {
    BassGeneration g1;   // onset 0
    BassGeneration g2;   // onset ta2 - ta1 > 0
    int horizon = 0;     // last simulated tick

    /// Validates g1.onset == 0, g2.onset > 0, horizon >= 1.
    static TwoStageBassModel checked(BassGeneration g1, BassGeneration g2,
                                     int horizon);
};

} // namespace sbmeme
