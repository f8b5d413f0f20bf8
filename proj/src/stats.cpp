#include "sbmeme/stats.hpp"

#include "sbmeme/errors.hpp"
#include "sbmeme/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbmeme {

int wake_gap(const TwoBeautyProfile& profile) {
    return profile.ta2 - profile.tf1;
}

ExponentialFit fit_exponential(const std::vector<int>& gaps) {
    if (gaps.size() < 10)
        throw InsufficientSample("fit_exponential: need at least 10 gaps, got " +
                                 std::to_string(gaps.size()));
    long long total = 0;
    int max_gap = 0;
    for (int g : gaps) {
        if (g <= 0) throw std::invalid_argument("fit_exponential: gaps must be positive");
        total += g;
        max_gap = std::max(max_gap, g);
    }
    ExponentialFit fit;
    fit.lambda = static_cast<double>(gaps.size()) / static_cast<double>(total);

    if (max_gap < 2) {
        fit.pearson_r = 1.0;   // single unit-width bin, nothing to correlate
        return fit;
    }
    // unit-width bins centered on the integers 1..max_gap
    std::vector<double> empirical(static_cast<std::size_t>(max_gap), 0.0);
    for (int g : gaps) empirical[static_cast<std::size_t>(g - 1)] += 1.0;
    for (double& d : empirical) d /= static_cast<double>(gaps.size());
    std::vector<double> model(empirical.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        model[i] = fit.lambda * std::exp(-fit.lambda * x);
    }
    fit.pearson_r = pearson(empirical, model);
    return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& m1s,
                          const std::vector<double>& m2s,
                          std::vector<std::string>* warnings) {
    if (m1s.size() != m2s.size())
        throw std::invalid_argument("fit_power_law: pair lists differ in length");
    std::vector<double> x, y;
    x.reserve(m1s.size());
    y.reserve(m2s.size());
    for (std::size_t i = 0; i < m1s.size(); ++i) {
        if (!(m1s[i] > 0.0) || !(m2s[i] > 0.0)) {
            if (warnings)
                warnings->push_back("fit_power_law: skipping non-positive pair #" +
                                    std::to_string(i));
            continue;
        }
        x.push_back(std::log(m1s[i]));
        y.push_back(std::log(m2s[i]));
    }
    if (x.size() < 10)
        throw InsufficientSample("fit_power_law: need at least 10 positive pairs, got " +
                                 std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw ZeroVariance("fit_power_law: all first-generation masses equal");
    PowerLawFit fit;
    fit.alpha = sxy / sxx;
    fit.pearson_r = pearson(x, y);
    return fit;
}

double rising_velocity(const TimeSeries& series, const TwoBeautyProfile& profile,
                       int generation) {
    int ta, tp;
    if (generation == 1) {
        ta = profile.ta1;
        tp = profile.t1;
    } else if (generation == 2) {
        ta = profile.ta2;
        tp = profile.t2;
    } else {
        throw std::invalid_argument("rising_velocity: generation must be 1 or 2");
    }
    return (series[tp] - series[ta]) / (tp - ta);
}

Histogram histogram(const std::vector<double>& values, int bins) {
    if (values.empty() || bins < 1)
        throw std::invalid_argument("histogram: need values and bins >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw ZeroVariance("histogram: all values equal");
    Histogram h;
    h.bin_width = (hi - lo) / bins;
    h.centers.resize(static_cast<std::size_t>(bins));
    h.densities.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b)
        h.centers[static_cast<std::size_t>(b)] = lo + (b + 0.5) * h.bin_width;
    for (double v : values) {
        int b = static_cast<int>((v - lo) / h.bin_width);
        b = std::min(b, bins - 1);
        h.densities[static_cast<std::size_t>(b)] += 1.0;
    }
    const double norm = static_cast<double>(values.size()) * h.bin_width;
    for (double& d : h.densities) d /= norm;
    return h;
}

namespace {

// 3x3 linear solve by Cramer's rule; returns false when near singular.
bool solve3(const double a[3][3], const double b[3], double x[3]) {
    const double det =
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
        a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
        a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if (std::abs(det) < 1e-300) return false;
    double m[3][3];
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
        for (int i = 0; i < 3; ++i) m[i][c] = b[i];
        const double detc =
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        x[c] = detc / det;
    }
    return true;
}

double gaussian_sse(const std::vector<double>& xs, const std::vector<double>& ys,
                    double a, double mu, double sigma) {
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = (xs[i] - mu) / sigma;
        const double r = a * std::exp(-0.5 * z * z) - ys[i];
        sse += r * r;
    }
    return sse;
}

} // namespace

GaussianFit fit_gaussian(const std::vector<double>& values) {
    if (values.size() < 30)
        throw InsufficientSample("fit_gaussian: need at least 30 values, got " +
                                 std::to_string(values.size()));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) throw ZeroVariance("fit_gaussian: all values equal");

    const int bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
    const Histogram h = histogram(values, bins);
    const std::vector<double>& xs = h.centers;
    const std::vector<double>& ys = h.densities;

    const double n = static_cast<double>(values.size());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= n;

    // damped Gauss-Newton on (a, mu, sigma); steps that leave the data range
    // count as failures so degenerate histograms cannot send the center off
    const double range = *hi - *lo;
    double a = *std::max_element(ys.begin(), ys.end());
    double mu = mean;
    double sigma = std::sqrt(var);
    double lambda = 1e-3;
    double sse = gaussian_sse(xs, ys, a, mu, sigma);
    for (int iter = 0; iter < 200; ++iter) {
        double jtj[3][3] = {{0}};
        double jtr[3] = {0};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double z = (xs[i] - mu) / sigma;
            const double w = std::exp(-0.5 * z * z);
            const double r = a * w - ys[i];
            const double j[3] = {w, a * w * z / sigma, a * w * z * z / sigma};
            for (int u = 0; u < 3; ++u) {
                jtr[u] += j[u] * r;
                for (int v = 0; v < 3; ++v) jtj[u][v] += j[u] * j[v];
            }
        }
        const double diag_floor =
            1e-10 * std::max({jtj[0][0], jtj[1][1], jtj[2][2], 1e-300});
        double damped[3][3];
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v)
                damped[u][v] =
                    jtj[u][v] + (u == v ? lambda * (jtj[u][u] + diag_floor) : 0.0);
        double step[3];
        const double rhs[3] = {-jtr[0], -jtr[1], -jtr[2]};
        if (!solve3(damped, rhs, step)) break;
        const double na = a + step[0];
        const double nmu = mu + step[1];
        double nsigma = std::abs(sigma + step[2]);
        const bool sane = std::isfinite(na) && std::isfinite(nmu) &&
                          std::isfinite(nsigma) &&
                          std::abs(nmu - (*lo + *hi) / 2.0) < 2.0 * range &&
                          nsigma > 1e-9 * range && nsigma < 10.0 * range;
        const double nsse =
            sane ? gaussian_sse(xs, ys, na, nmu, nsigma) : sse + 1.0;
        if (nsse < sse) {
            const bool converged = (sse - nsse) < 1e-14 * (sse + 1e-300);
            a = na;
            mu = nmu;
            sigma = nsigma;
            sse = nsse;
            lambda = std::max(lambda * 0.5, 1e-12);
            if (converged) break;
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
    }

    GaussianFit fit;
    fit.a = a;
    fit.mu = mu;
    fit.sigma = std::abs(sigma);   // the model depends on sigma^2 only
    const double ymean = std::accumulate(ys.begin(), ys.end(), 0.0) /
                         static_cast<double>(ys.size());
    double sstot = 0.0;
    for (double y : ys) sstot += (y - ymean) * (y - ymean);
    fit.r2 = sstot > 0.0 ? 1.0 - sse / sstot : 0.0;
    return fit;
}

double imitation_pressure(const TimeSeries& series, const TwoBeautyProfile& profile,
                          int generation, double q, double m, int t_n) {
    int ta, tf;
    if (generation == 1) {
        ta = profile.ta1;
        tf = profile.tf1;
    } else if (generation == 2) {
        ta = profile.ta2;
        tf = profile.tf2;
    } else {
        throw std::invalid_argument("imitation_pressure: generation must be 1 or 2");
    }
    if (t_n < ta || t_n > tf)
        throw std::invalid_argument("imitation_pressure: t_n outside the awake window");
    if (!(m > 0.0)) throw std::invalid_argument("imitation_pressure: m must be > 0");
    double sum = 0.0;
    for (int t = ta; t <= t_n; ++t) sum += series[t];
    return q / m * sum;
}

} // namespace sbmeme
