#pragma once

#include "sbmeme/core_types.hpp"

#include <optional>
#include <string>
#include <utility>

namespace sbmeme {

/// Bass diffusion rate F(t): 0 for t < 0, else
/// (1 - e^{-(p+q)t}) / ((q/p) e^{-(p+q)t} + 1). Strictly increasing on
/// t >= 0 and bounded in [0, 1).
double bass_cdf(double t, double p, double q);

/// Time derivative of bass_cdf; 0 for t < 0.
double bass_pdf(double t, double p, double q);

/// The two-generation trajectory exactly as modeled:
///   S1(t) = m1 F1(t) (1 - F2(t - onset))
///   S2(t) = F2(t - onset) (m2 + m1 F1(t))
/// evaluated at integer ticks t = 0..horizon on the re-based axis.
TimeSeries simulate(const TwoStageBassModel& model,
                    const std::string& meme_id = "simulated",
                    Granularity granularity = Granularity::day);

/// Per-tick popularity view of the model: the tick increments of the total
/// diffusion, m1*(F1(t)-F1(t-1)) + m2*(F2(t-onset)-F2(t-onset-1)). This is
/// the representation comparable to observed popularity counts.
TimeSeries popularity_curve(const TwoStageBassModel& model,
                            const std::string& meme_id = "simulated",
                            Granularity granularity = Granularity::day);

/// Innovation coefficient (S(ta) + S(ta+1)) / (2m). Throws
/// NoInnovationSignal when both samples are zero.
double estimate_p(const TimeSeries& series, int ta, double m);

/// The two roots q > p of ln(q/p) = delta*(p+q); lower == upper at a double
/// root. Throws NoImitationSolution when no root exists.
struct ImitationRoots {
    double lower = 0.0;
    double upper = 0.0;
};
ImitationRoots imitation_roots(double p, double peak_delay);

/// The larger root of the imitation equation.
double estimate_q(double p, double peak_delay);

/// Diffusion potential: sum of S(t) over [ta, tf]. Throws EmptyWakeWindow
/// when the window sums to zero.
double estimate_m(const TimeSeries& series, int ta, int tf);

enum class PMode { observed, corpus_mean };

std::string to_string(PMode m);
PMode p_mode_from_string(const std::string& s);

enum class RootChoice { single, lower, upper };

std::string to_string(RootChoice c);

struct FitOutcome {
    TwoStageBassModel model;
    RootChoice g1_root = RootChoice::single;
    RootChoice g2_root = RootChoice::single;
};

/// Fits both generations from an accepted profile. m_i is the awake-window
/// sum, p_i the observed estimate or the supplied corpus mean, q_i the
/// imitation root whose implied peak rate m(p+q)^2/(4q) is closest to the
/// observed peak value (ties take the larger root). The model horizon is
/// t_end - ta1. Propagates NoInnovationSignal / NoImitationSolution /
/// EmptyWakeWindow.
FitOutcome fit(const TimeSeries& series, const TwoBeautyProfile& profile,
               PMode p_mode,
               std::optional<std::pair<double, double>> corpus_p = {});

} // namespace sbmeme
