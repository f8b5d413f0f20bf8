#pragma once

#include "sbmeme/core_types.hpp"

#include <optional>
#include <vector>

namespace sbmeme {

struct ExponentialFit {
    double lambda = 0.0;
    double pearson_r = 0.0;   // histogram vs lambda*exp(-lambda*x)
};

struct PowerLawFit {
    double alpha = 0.0;       // exponent of m2 = c * m1^alpha
    double pearson_r = 0.0;   // on (ln m1, ln m2)
};

struct GaussianFit {
    double a = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double r2 = 0.0;
};

/// Corpus-level aggregates. Gaussian fits are absent when a generation has
/// fewer than 30 innovation estimates; q means are absent with no fitted
/// models.
struct CorpusReport {
    double lambda = 0.0;
    double lambda_fit_R = 0.0;
    double alpha_m = 0.0;
    double alpha_fit_R = 0.0;
    double velocity_ratio_mean = 0.0;
    std::optional<GaussianFit> p_gauss_g1;
    std::optional<GaussianFit> p_gauss_g2;
    std::optional<double> q_mean_g1;
    std::optional<double> q_mean_g2;
    int n_profiles = 0;
};

/// Length of the second hibernation, ta2 - tf1.
int wake_gap(const TwoBeautyProfile& profile);

/// Maximum-likelihood exponential rate 1/mean plus the Pearson correlation
/// between the unit-width histogram densities and the fitted density at the
/// integer bin centers. Requires at least 10 gaps.
ExponentialFit fit_exponential(const std::vector<int>& gaps);

/// Least-squares slope of ln m2 on ln m1 (with intercept) and the Pearson r
/// of the log pairs. Non-positive pairs are skipped with a warning; at
/// least 10 usable pairs required.
PowerLawFit fit_power_law(const std::vector<double>& m1s,
                          const std::vector<double>& m2s,
                          std::vector<std::string>* warnings = nullptr);

/// (S(t_i) - S(ta_i)) / (t_i - ta_i) for generation 1 or 2.
double rising_velocity(const TimeSeries& series, const TwoBeautyProfile& profile,
                       int generation);

/// Free-Gaussian least squares a*exp(-(x-mu)^2/(2 sigma^2)) on a histogram
/// with ceil(sqrt(N)) bins. Requires at least 30 values; throws
/// ZeroVariance when all values are equal. sigma is returned positive.
GaussianFit fit_gaussian(const std::vector<double>& values);

/// (q/m) * sum of S(t) over [ta_i, t_n]; t_n must lie inside the
/// generation's awake window.
double imitation_pressure(const TimeSeries& series, const TwoBeautyProfile& profile,
                          int generation, double q, double m, int t_n);

/// Equal-width histogram over [min, max]; densities integrate to 1.
struct Histogram {
    std::vector<double> centers;
    std::vector<double> densities;
    double bin_width = 0.0;
};
Histogram histogram(const std::vector<double>& values, int bins);

} // namespace sbmeme
