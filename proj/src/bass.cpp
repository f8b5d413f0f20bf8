#include "sbmeme/bass.hpp"

#include "sbmeme/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sbmeme {

double bass_cdf(double t, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::invalid_argument("bass_cdf: p and q must be > 0");
    if (t < 0.0) return 0.0;
    const double e = std::exp(-(p + q) * t);
    const double f = (1.0 - e) / ((q / p) * e + 1.0);
    // e underflows for huge t; keep the stated open upper bound
    return f >= 1.0 ? std::nextafter(1.0, 0.0) : f;
}

double bass_pdf(double t, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::invalid_argument("bass_pdf: p and q must be > 0");
    if (t < 0.0) return 0.0;
    const double b = p + q;
    const double big_q = q / p;
    const double e = std::exp(-b * t);
    const double denom = big_q * e + 1.0;
    return b * (1.0 + big_q) * e / (denom * denom);
}

TimeSeries simulate(const TwoStageBassModel& model, const std::string& meme_id,
                    Granularity granularity) {
    std::vector<double> values(static_cast<std::size_t>(model.horizon) + 1);
    for (int t = 0; t <= model.horizon; ++t) {
        const double f1 = bass_cdf(t, model.g1.p, model.g1.q);
        const double f2 = bass_cdf(t - model.g2.onset, model.g2.p, model.g2.q);
        const double s1 = model.g1.m * f1 * (1.0 - f2);
        const double s2 = f2 * (model.g2.m + model.g1.m * f1);
        values[static_cast<std::size_t>(t)] = s1 + s2;
    }
    return TimeSeries(meme_id, granularity, std::move(values));
}

TimeSeries popularity_curve(const TwoStageBassModel& model,
                            const std::string& meme_id, Granularity granularity) {
    std::vector<double> values(static_cast<std::size_t>(model.horizon) + 1);
    for (int t = 0; t <= model.horizon; ++t) {
        const double d1 = bass_cdf(t, model.g1.p, model.g1.q) -
                          bass_cdf(t - 1, model.g1.p, model.g1.q);
        const double d2 = bass_cdf(t - model.g2.onset, model.g2.p, model.g2.q) -
                          bass_cdf(t - model.g2.onset - 1, model.g2.p, model.g2.q);
        values[static_cast<std::size_t>(t)] =
            std::max(0.0, model.g1.m * d1 + model.g2.m * d2);
    }
    return TimeSeries(meme_id, granularity, std::move(values));
}

double estimate_p(const TimeSeries& series, int ta, double m) {
    if (ta < 0 || ta + 1 > series.last_tick())
        throw std::invalid_argument("estimate_p: ta+1 must be within the series");
    if (!(m > 0.0)) throw std::invalid_argument("estimate_p: m must be > 0");
    const double p = (series[ta] + series[ta + 1]) / (2.0 * m);
    if (p == 0.0)
        throw NoInnovationSignal("estimate_p: popularity at ta and ta+1 both zero for '" +
                                 series.meme_id() + "'");
    return p;
}

namespace {

double imitation_f(double q, double p, double delta) {
    return std::log(q / p) - delta * (p + q);
}

// Bracketed bisection; the bracket must straddle a sign change (or touch a
// root at an endpoint).
double bisect_root(double lo, double hi, double p, double delta) {
    double flo = imitation_f(lo, p, delta);
    if (std::abs(flo) < 1e-10) return lo;
    double fhi = imitation_f(hi, p, delta);
    if (std::abs(fhi) < 1e-10) return hi;
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double fm = imitation_f(mid, p, delta);
        if (std::abs(fm) < 1e-10) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return mid;
}

} // namespace

ImitationRoots imitation_roots(double p, double peak_delay) {
    if (!(p > 0.0)) throw std::invalid_argument("imitation_roots: p must be > 0");
    if (!(peak_delay >= 1.0))
        throw std::invalid_argument("imitation_roots: peak delay must be >= 1");

    // f(q) = ln(q/p) - delta*(p+q) is concave with its maximum at q = 1/delta
    const double q_star = 1.0 / peak_delay;
    const double lo = p * (1.0 + 1e-9);
    if (q_star <= lo || imitation_f(q_star, p, peak_delay) < 0.0) {
        throw NoImitationSolution("imitation_roots: no q solves the peak-delay equation (p=" +
                                  std::to_string(p) + ", delay=" + std::to_string(peak_delay) + ")");
    }
    const double lower = bisect_root(lo, q_star, p, peak_delay);
    double hi = q_star;
    while (imitation_f(hi, p, peak_delay) >= 0.0) hi *= 2.0;
    const double upper = bisect_root(q_star, hi, p, peak_delay);
    return {lower, upper};
}

double estimate_q(double p, double peak_delay) {
    return imitation_roots(p, peak_delay).upper;
}

double estimate_m(const TimeSeries& series, int ta, int tf) {
    if (ta < 0 || tf > series.last_tick() || ta >= tf)
        throw std::invalid_argument("estimate_m: need 0 <= ta < tf <= T");
    double sum = 0.0;
    for (int t = ta; t <= tf; ++t) sum += series[t];
    if (sum == 0.0)
        throw EmptyWakeWindow("estimate_m: awake window [" + std::to_string(ta) +
                              ", " + std::to_string(tf) + "] sums to zero for '" +
                              series.meme_id() + "'");
    return sum;
}

std::string to_string(PMode m) {
    return m == PMode::observed ? "observed" : "corpus_mean";
}

PMode p_mode_from_string(const std::string& s) {
    if (s == "observed") return PMode::observed;
    if (s == "corpus_mean") return PMode::corpus_mean;
    throw std::invalid_argument("p mode must be observed|corpus_mean, got '" + s + "'");
}

std::string to_string(RootChoice c) {
    switch (c) {
        case RootChoice::single: return "single";
        case RootChoice::lower: return "lower";
        case RootChoice::upper: return "upper";
    }
    throw std::logic_error("unknown root choice");
}

namespace {

struct GenerationFit {
    double p = 0, q = 0, m = 0;
    RootChoice root = RootChoice::single;
};

GenerationFit fit_generation(const TimeSeries& series, int ta, int t_peak, int tf,
                             PMode p_mode, std::optional<double> corpus_p) {
    GenerationFit g;
    g.m = estimate_m(series, ta, tf);
    if (p_mode == PMode::observed) {
        g.p = estimate_p(series, ta, g.m);
    } else {
        if (!corpus_p)
            throw std::invalid_argument("fit: corpus_mean mode needs corpus p means");
        g.p = *corpus_p;
        if (!(g.p > 0.0)) throw std::invalid_argument("fit: corpus mean p must be > 0");
    }
    const ImitationRoots roots = imitation_roots(g.p, t_peak - ta);
    if (roots.upper - roots.lower < 1e-9) {
        g.q = roots.upper;
        g.root = RootChoice::single;
        return g;
    }
    // both roots reproduce the peak timing; pick the one whose implied peak
    // rate matches the observed peak height, ties to the larger root
    const double observed_peak = series[t_peak];
    auto implied_peak = [&](double q) {
        return g.m * (g.p + q) * (g.p + q) / (4.0 * q);
    };
    const double err_upper = std::abs(implied_peak(roots.upper) - observed_peak);
    const double err_lower = std::abs(implied_peak(roots.lower) - observed_peak);
    if (err_lower < err_upper) {
        g.q = roots.lower;
        g.root = RootChoice::lower;
    } else {
        g.q = roots.upper;
        g.root = RootChoice::upper;
    }
    return g;
}

} // namespace

FitOutcome fit(const TimeSeries& series, const TwoBeautyProfile& profile,
               PMode p_mode, std::optional<std::pair<double, double>> corpus_p) {
    std::optional<double> cp1, cp2;
    if (corpus_p) {
        cp1 = corpus_p->first;
        cp2 = corpus_p->second;
    }
    const GenerationFit g1 = fit_generation(series, profile.ta1, profile.t1,
                                            profile.tf1, p_mode, cp1);
    const GenerationFit g2 = fit_generation(series, profile.ta2, profile.t2,
                                            profile.tf2, p_mode, cp2);
    FitOutcome out{
        TwoStageBassModel::checked(
            BassGeneration::checked(g1.p, g1.q, g1.m, 0),
            BassGeneration::checked(g2.p, g2.q, g2.m, profile.ta2 - profile.ta1),
            profile.t_end - profile.ta1),
        g1.root, g2.root};
    return out;
}

} // namespace sbmeme
