#include "sbmeme/core_types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sbmeme {

std::string to_string(Granularity g) {
    switch (g) {
        case Granularity::day: return "day";
        case Granularity::week: return "week";
        case Granularity::month: return "month";
        case Granularity::year: return "year";
    }
    throw std::logic_error("unknown granularity");
}

Granularity granularity_from_string(const std::string& s) {
    if (s == "day") return Granularity::day;
    if (s == "week") return Granularity::week;
    if (s == "month") return Granularity::month;
    if (s == "year") return Granularity::year;
    throw std::invalid_argument("granularity must be day|week|month|year, got '" + s + "'");
}

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::too_few_peaks: return "too-few-peaks";
        case RejectReason::ordering: return "ordering";
        case RejectReason::threshold: return "threshold";
        case RejectReason::degenerate: return "degenerate";
    }
    throw std::logic_error("unknown reject reason");
}

RejectReason reject_reason_from_string(const std::string& s) {
    if (s == "none") return RejectReason::none;
    if (s == "too-few-peaks") return RejectReason::too_few_peaks;
    if (s == "ordering") return RejectReason::ordering;
    if (s == "threshold") return RejectReason::threshold;
    if (s == "degenerate") return RejectReason::degenerate;
    throw std::invalid_argument("unknown rejection reason '" + s + "'");
}

TimeSeries::TimeSeries(std::string meme_id, Granularity granularity,
                       std::vector<double> values)
    : meme_id_(std::move(meme_id)), granularity_(granularity),
      values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("series '" + meme_id_ +
                                    "': needs at least 2 ticks, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
        double v = values_[t];
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os << "series '" << meme_id_ << "': value at tick " << t
               << " must be finite and non-negative, got " << v;
            throw std::invalid_argument(os.str());
        }
    }
}

double TimeSeries::at(int t) const {
    if (t < 0 || t > last_tick()) {
        throw std::invalid_argument("series '" + meme_id_ + "': tick " +
                                    std::to_string(t) + " out of [0, " +
                                    std::to_string(last_tick()) + "]");
    }
    return values_[static_cast<std::size_t>(t)];
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

TwoBeautyProfile TwoBeautyProfile::checked(std::string meme_id, int t0, int ta1,
                                           int t1, int tf1, int ta2, int t2,
                                           int tf2, int t_end, double b1,
                                           double b2, double m1, double m2,
                                           double v1, double v2, double s_t1,
                                           double s_t2, double alpha) {
    const std::string id = "profile '" + meme_id + "': ";
    require(t0 >= 0, id + "t0 must be >= 0");
    require(t0 < ta1 && ta1 < t1 && t1 < tf1 && tf1 < ta2 && ta2 < t2 && t2 < tf2,
            id + "timestamps must strictly ascend");
    require(tf2 <= t_end, id + "tf2 must not exceed the last tick");
    require(std::isfinite(b1) && std::isfinite(b2), id + "beauty coefficients must be finite");
    require(b1 > alpha * s_t1, id + "B1 must exceed alpha*S(t1)");
    require(b2 > alpha * s_t2, id + "B2 must exceed alpha*S(t2)");
    require(std::isfinite(m1) && m1 >= 0 && std::isfinite(m2) && m2 >= 0,
            id + "masses must be finite and non-negative");
    require(std::isfinite(v1) && v1 >= 0 && std::isfinite(v2) && v2 >= 0,
            id + "velocities must be finite and non-negative");

    TwoBeautyProfile p;
    p.meme_id = std::move(meme_id);
    p.t0 = t0;
    p.ta1 = ta1;
    p.t1 = t1;
    p.tf1 = tf1;
    p.ta2 = ta2;
    p.t2 = t2;
    p.tf2 = tf2;
    p.t_end = t_end;
    p.b1 = b1;
    p.b2 = b2;
    p.m1 = m1;
    p.m2 = m2;
    p.v1 = v1;
    p.v2 = v2;
    p.gap = ta2 - tf1;
    return p;
}

BassGeneration BassGeneration::checked(double p, double q, double m, int onset) {
    require(std::isfinite(p) && p > 0.0, "bass generation: p must be > 0");
    require(std::isfinite(q) && q > p,
            "bass generation: q must exceed p (positive peak delay)");
    require(std::isfinite(m) && m > 0.0, "bass generation: m must be > 0");
    require(onset >= 0, "bass generation: onset must be >= 0");
    return BassGeneration{p, q, m, onset};
}

double BassGeneration::peak_delay() const {
    return std::log(q / p) / (p + q);
}

TwoStageBassModel TwoStageBassModel::checked(BassGeneration g1, BassGeneration g2,
                                             int horizon) {
    require(g1.onset == 0, "two-stage model: first generation onset must be 0");
    require(g2.onset > 0, "two-stage model: second generation onset must be > 0");
    require(horizon >= 1, "two-stage model: horizon must be >= 1");
    return TwoStageBassModel{g1, g2, horizon};
}

} // namespace sbmeme
