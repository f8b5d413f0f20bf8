#include "sbmeme/pipeline.hpp"

#include "sbmeme/errors.hpp"
#include "sbmeme/eval.hpp"
#include "sbmeme/stats.hpp"
#include "sbmeme/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <thread>

namespace sbmeme {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SB_MEME_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

DetectOutput detect_corpus(const Corpus& corpus, const PipelineConfig& cfg) {
    const std::size_t n = corpus.series.size();
    std::vector<BeautyOutcome> outcomes(n);
    parallel_for(n, resolve_threads(cfg.threads), [&](std::size_t i) {
        outcomes[i] = identify_two_beauties(corpus.series[i], cfg.peak_params, cfg.alpha);
    });

    DetectOutput out;
    for (std::size_t i = 0; i < n; ++i) {
        if (outcomes[i].profile) {
            out.profiles.push_back(std::move(*outcomes[i].profile));
        } else {
            out.rejections.push_back({corpus.series[i].meme_id(), outcomes[i].reason});
        }
    }
    return out;   // corpus order is canonical (sorted by meme id)
}

namespace {

const TimeSeries& series_for(const Corpus& corpus, const std::string& meme_id,
                             const char* stage) {
    const TimeSeries* s = corpus.find(meme_id);
    if (!s)
        throw SchemaError(std::string(stage) + ": meme_id '" + meme_id +
                          "' from the profiles artifact is missing in the corpus");
    return *s;
}

} // namespace

std::vector<ModelRecord> fit_corpus(const Corpus& corpus,
                                    const std::vector<TwoBeautyProfile>& profiles,
                                    const PipelineConfig& cfg,
                                    std::optional<std::pair<double, double>>* corpus_p_out) {
    // observed innovation estimates, also recorded in the output records
    std::vector<std::optional<double>> obs_p1(profiles.size()), obs_p2(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const TwoBeautyProfile& pr = profiles[i];
        const TimeSeries& s = series_for(corpus, pr.meme_id, "fit");
        try {
            obs_p1[i] = estimate_p(s, pr.ta1, estimate_m(s, pr.ta1, pr.tf1));
        } catch (const Error&) {
        }
        try {
            obs_p2[i] = estimate_p(s, pr.ta2, estimate_m(s, pr.ta2, pr.tf2));
        } catch (const Error&) {
        }
    }

    std::optional<std::pair<double, double>> corpus_p;
    if (profiles.empty()) {
        if (corpus_p_out) *corpus_p_out = corpus_p;
        return {};
    }
    if (cfg.p_mode == PMode::corpus_mean) {
        // sequential pass in canonical order keeps the means deterministic
        double sum1 = 0.0, sum2 = 0.0;
        int n1 = 0, n2 = 0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (obs_p1[i]) { sum1 += *obs_p1[i]; ++n1; }
            if (obs_p2[i]) { sum2 += *obs_p2[i]; ++n2; }
        }
        if (n1 == 0 || n2 == 0)
            throw InsufficientSample("fit: no observed innovation estimates to average");
        corpus_p = {sum1 / n1, sum2 / n2};
    }
    if (corpus_p_out) *corpus_p_out = corpus_p;

    std::vector<ModelRecord> records(profiles.size());
    parallel_for(profiles.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        const TwoBeautyProfile& pr = profiles[i];
        const TimeSeries& s = series_for(corpus, pr.meme_id, "fit");
        ModelRecord rec;
        rec.meme_id = pr.meme_id;
        rec.p1_observed = obs_p1[i];
        rec.p2_observed = obs_p2[i];
        try {
            const FitOutcome fo = fit(s, pr, cfg.p_mode, corpus_p);
            rec.fitted = true;
            rec.p1 = fo.model.g1.p;
            rec.q1 = fo.model.g1.q;
            rec.m1 = fo.model.g1.m;
            rec.p2 = fo.model.g2.p;
            rec.q2 = fo.model.g2.q;
            rec.m2 = fo.model.g2.m;
            rec.onset = fo.model.g2.onset;
            rec.horizon = fo.model.horizon;
            rec.root_choice_g1 = to_string(fo.g1_root);
            rec.root_choice_g2 = to_string(fo.g2_root);
        } catch (const NoInnovationSignal&) {
            rec.rejection = "no-innovation-signal";
        } catch (const NoImitationSolution&) {
            rec.rejection = "no-imitation-solution";
        } catch (const EmptyWakeWindow&) {
            rec.rejection = "empty-wake-window";
        }
        records[i] = std::move(rec);
    });
    return records;
}

StatsOutput corpus_stats(const Corpus& corpus,
                         const std::vector<TwoBeautyProfile>& profiles,
                         const std::vector<ModelRecord>& models) {
    if (profiles.size() < 10)
        throw InsufficientSample("stats: need at least 10 profiles, got " +
                                 std::to_string(profiles.size()));

    StatsOutput out;
    out.report.n_profiles = static_cast<int>(profiles.size());

    std::vector<int> gaps;
    std::vector<double> m1s, m2s;
    double ratio_sum = 0.0;
    for (const TwoBeautyProfile& pr : profiles) {
        series_for(corpus, pr.meme_id, "stats");   // schema check
        gaps.push_back(wake_gap(pr));
        m1s.push_back(pr.m1);
        m2s.push_back(pr.m2);
        out.figures.velocities.push_back(
            {pr.meme_id, pr.v1, pr.v2, pr.v2 / pr.v1});
        ratio_sum += pr.v2 / pr.v1;
    }
    out.report.velocity_ratio_mean = ratio_sum / static_cast<double>(profiles.size());

    const ExponentialFit ef = fit_exponential(gaps);
    out.report.lambda = ef.lambda;
    out.report.lambda_fit_R = ef.pearson_r;
    if (!(out.report.lambda > 0.0))
        throw std::logic_error("stats: lambda must be positive");

    const PowerLawFit pf = fit_power_law(m1s, m2s);
    out.report.alpha_m = pf.alpha;
    out.report.alpha_fit_R = pf.pearson_r;

    // gap histogram and fitted exponential at integer centers
    const int max_gap = *std::max_element(gaps.begin(), gaps.end());
    std::vector<double> counts(static_cast<std::size_t>(max_gap), 0.0);
    for (int g : gaps) counts[static_cast<std::size_t>(g - 1)] += 1.0;
    for (int x = 1; x <= max_gap; ++x) {
        const double density = counts[static_cast<std::size_t>(x - 1)] / gaps.size();
        out.figures.gap_hist.push_back(
            {static_cast<double>(x), density,
             out.report.lambda * std::exp(-out.report.lambda * x)});
    }
    for (std::size_t i = 0; i < m1s.size(); ++i)
        out.figures.mass_pairs.push_back({m1s[i], m2s[i]});

    // innovation-coefficient distributions per generation
    auto p_distribution = [&](int generation, std::optional<GaussianFit>& fit_out) {
        std::vector<double> values;
        for (const ModelRecord& m : models) {
            const auto& obs = generation == 1 ? m.p1_observed : m.p2_observed;
            if (obs) values.push_back(*obs);
        }
        if (values.size() >= 30) {
            try {
                fit_out = fit_gaussian(values);
            } catch (const ZeroVariance&) {
            }
        }
        if (values.size() >= 2 &&
            *std::max_element(values.begin(), values.end()) >
                *std::min_element(values.begin(), values.end())) {
            const int bins =
                static_cast<int>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
            const Histogram h = histogram(values, bins);
            for (std::size_t i = 0; i < h.centers.size(); ++i) {
                double fitted = std::numeric_limits<double>::quiet_NaN();
                if (fit_out) {
                    const double z = (h.centers[i] - fit_out->mu) / fit_out->sigma;
                    fitted = fit_out->a * std::exp(-0.5 * z * z);
                }
                out.figures.p_dist.push_back(
                    {generation, h.centers[i], h.densities[i], fitted});
            }
        }
    };
    p_distribution(1, out.report.p_gauss_g1);
    p_distribution(2, out.report.p_gauss_g2);

    // imitation-coefficient distribution and means from the fitted models
    auto q_distribution = [&](int generation, std::optional<double>& mean_out) {
        std::vector<double> values;
        for (const ModelRecord& m : models)
            if (m.fitted) values.push_back(generation == 1 ? m.q1 : m.q2);
        if (values.empty()) return;
        mean_out = std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
        if (values.size() >= 2 &&
            *std::max_element(values.begin(), values.end()) >
                *std::min_element(values.begin(), values.end())) {
            const int bins =
                static_cast<int>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
            const Histogram h = histogram(values, bins);
            for (std::size_t i = 0; i < h.centers.size(); ++i)
                out.figures.q_dist.push_back(
                    {generation, h.centers[i], h.densities[i],
                     std::numeric_limits<double>::quiet_NaN()});
        }
    };
    q_distribution(1, out.report.q_mean_g1);
    q_distribution(2, out.report.q_mean_g2);

    return out;
}

namespace {

std::vector<double> rebased_observed(const TimeSeries& s, int ta1) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(s.last_tick() - ta1 + 1));
    for (int t = ta1; t <= s.last_tick(); ++t) out.push_back(s[t]);
    return out;
}

// observed popularity of one generation on the re-based axis, zero outside
// its awake window
std::vector<double> observed_generation(const TimeSeries& s,
                                        const TwoBeautyProfile& pr, int gen) {
    const int ta = gen == 1 ? pr.ta1 : pr.ta2;
    const int tf = gen == 1 ? pr.tf1 : pr.tf2;
    std::vector<double> out(static_cast<std::size_t>(s.last_tick() - pr.ta1 + 1), 0.0);
    for (int t = ta; t <= tf; ++t)
        out[static_cast<std::size_t>(t - pr.ta1)] = s[t];
    return out;
}

std::vector<double> simulated_generation(const TwoStageBassModel& model, int gen) {
    const BassGeneration& g = gen == 1 ? model.g1 : model.g2;
    std::vector<double> out(static_cast<std::size_t>(model.horizon) + 1, 0.0);
    for (int t = 0; t <= model.horizon; ++t) {
        const double d = bass_cdf(t - g.onset, g.p, g.q) -
                         bass_cdf(t - g.onset - 1, g.p, g.q);
        out[static_cast<std::size_t>(t)] = std::max(0.0, g.m * d);
    }
    return out;
}

} // namespace

EvalOutput evaluate_corpus(const Corpus& corpus,
                           const std::vector<TwoBeautyProfile>& profiles,
                           const std::vector<ModelRecord>& models,
                           const PipelineConfig& cfg) {
    std::map<std::string, const TwoBeautyProfile*> by_id;
    for (const TwoBeautyProfile& pr : profiles) by_id[pr.meme_id] = &pr;

    struct Row {
        bool present = false;
        FitReport report;
        std::vector<double> obs_g1, sim_g1, obs_g2, sim_g2;
    };
    std::vector<Row> rows(models.size());
    parallel_for(models.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        const ModelRecord& mr = models[i];
        if (!mr.fitted) return;
        auto it = by_id.find(mr.meme_id);
        if (it == by_id.end())
            throw SchemaError("eval: meme_id '" + mr.meme_id +
                              "' from the models artifact is missing in the profiles");
        const TwoBeautyProfile& pr = *it->second;
        const TimeSeries& s = series_for(corpus, mr.meme_id, "eval");
        const TwoStageBassModel model = mr.to_model();

        std::vector<double> obs = rebased_observed(s, pr.ta1);
        const TimeSeries sim = popularity_curve(model, mr.meme_id, s.granularity());
        std::vector<double> simv = sim.values();
        const std::size_t len = std::min(obs.size(), simv.size());
        obs.resize(len);
        simv.resize(len);

        Row& row = rows[i];
        row.report.meme_id = mr.meme_id;
        row.report.pearson_r = pearson(obs, simv);

        // simulated second peak: argmax of the total curve on t >= onset,
        // ties to the earliest tick
        int sim_t2 = model.g2.onset;
        for (int t = model.g2.onset; t < static_cast<int>(len); ++t)
            if (simv[static_cast<std::size_t>(t)] >
                simv[static_cast<std::size_t>(sim_t2)])
                sim_t2 = t;
        row.report.peak_error_k = std::abs(sim_t2 - (pr.t2 - pr.ta1));

        row.obs_g1 = observed_generation(s, pr, 1);
        row.obs_g2 = observed_generation(s, pr, 2);
        row.sim_g1 = simulated_generation(model, 1);
        row.sim_g2 = simulated_generation(model, 2);
        row.present = true;
    });

    EvalOutput out;
    std::vector<std::vector<double>> obs_g1, sim_g1, obs_g2, sim_g2;
    for (Row& row : rows) {
        if (!row.present) continue;
        out.section.per_meme.push_back(row.report);
        obs_g1.push_back(std::move(row.obs_g1));
        sim_g1.push_back(std::move(row.sim_g1));
        obs_g2.push_back(std::move(row.obs_g2));
        sim_g2.push_back(std::move(row.sim_g2));
    }
    if (out.section.per_meme.empty())
        throw InsufficientSample("eval: no fitted models to evaluate");

    for (int k = 0; k <= 3; ++k)
        out.section.p_at_k[k] = precision_at_k(out.section.per_meme, k);
    double r_sum = 0.0;
    int above = 0;
    for (const FitReport& r : out.section.per_meme) {
        r_sum += r.pearson_r;
        if (r.pearson_r > 0.4) ++above;
    }
    out.section.mean_r = r_sum / static_cast<double>(out.section.per_meme.size());
    out.section.frac_r_gt_0_4 =
        static_cast<double>(above) / static_cast<double>(out.section.per_meme.size());

    const std::vector<double> avg_obs_g1 = averaged_curve(obs_g1);
    const std::vector<double> avg_sim_g1 = averaged_curve(sim_g1);
    const std::vector<double> avg_obs_g2 = averaged_curve(obs_g2);
    const std::vector<double> avg_sim_g2 = averaged_curve(sim_g2);
    const std::size_t len = std::max(std::max(avg_obs_g1.size(), avg_sim_g1.size()),
                                     std::max(avg_obs_g2.size(), avg_sim_g2.size()));
    auto get = [](const std::vector<double>& v, std::size_t t) {
        return t < v.size() ? v[t] : 0.0;
    };
    for (std::size_t t = 0; t < len; ++t)
        out.figures.averaged.push_back({static_cast<double>(t), get(avg_obs_g1, t),
                                        get(avg_sim_g1, t), get(avg_obs_g2, t),
                                        get(avg_sim_g2, t)});

    // fixed-width histogram of per-meme r on [-1, 1]
    constexpr int kRBins = 40;
    std::vector<double> counts(kRBins, 0.0);
    for (const FitReport& r : out.section.per_meme) {
        int b = static_cast<int>((r.pearson_r + 1.0) / 0.05);
        b = std::clamp(b, 0, kRBins - 1);
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    for (int b = 0; b < kRBins; ++b)
        out.figures.r_hist.push_back(
            {-1.0 + (b + 0.5) * 0.05,
             counts[static_cast<std::size_t>(b)] /
                 (out.section.per_meme.size() * 0.05)});
    return out;
}

namespace {

std::ofstream open_figure(const std::filesystem::path& dir, const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ParseError("cannot write figure file '" + (dir / name).string() + "'");
    return out;
}

std::string cell(double v) {
    return std::isnan(v) ? std::string() : format_sig6(v);
}

} // namespace

void write_stats_figures(const StatsFigures& figs, const std::filesystem::path& dir) {
    {
        auto out = open_figure(dir, "fig3.csv");
        out << "gap,empirical_density,fitted_density\n";
        for (const auto& row : figs.gap_hist)
            out << format_sig6(row[0]) << ',' << format_sig6(row[1]) << ','
                << format_sig6(row[2]) << '\n';
    }
    {
        auto out = open_figure(dir, "fig4.csv");
        out << "m1,m2\n";
        for (const auto& row : figs.mass_pairs)
            out << format_sig6(row[0]) << ',' << format_sig6(row[1]) << '\n';
    }
    {
        auto out = open_figure(dir, "fig5.csv");
        out << "meme_id,v1,v2,ratio\n";
        for (const auto& row : figs.velocities)
            out << row.meme_id << ',' << format_sig6(row.v1) << ','
                << format_sig6(row.v2) << ',' << format_sig6(row.ratio) << '\n';
    }
    {
        auto out = open_figure(dir, "fig6.csv");
        out << "generation,bin_center,density,gaussian_fit\n";
        for (const auto& row : figs.p_dist)
            out << row.generation << ',' << format_sig6(row.center) << ','
                << format_sig6(row.density) << ',' << cell(row.fit) << '\n';
    }
    {
        auto out = open_figure(dir, "fig7.csv");
        out << "generation,bin_center,density\n";
        for (const auto& row : figs.q_dist)
            out << row.generation << ',' << format_sig6(row.center) << ','
                << format_sig6(row.density) << '\n';
    }
}

void write_eval_figures(const EvalFigures& figs, const std::filesystem::path& dir,
                        PMode p_mode) {
    const char* name = p_mode == PMode::corpus_mean ? "fig8.csv" : "fig9.csv";
    {
        auto out = open_figure(dir, name);
        out << "t,observed_g1_avg,simulated_g1_avg,observed_g2_avg,simulated_g2_avg\n";
        for (const auto& row : figs.averaged)
            out << static_cast<long>(row[0]) << ',' << format_sig6(row[1]) << ','
                << format_sig6(row[2]) << ',' << format_sig6(row[3]) << ','
                << format_sig6(row[4]) << '\n';
    }
    {
        auto out = open_figure(dir, "fig10.csv");
        out << "bin_center,density\n";
        for (const auto& row : figs.r_hist)
            out << format_sig6(row[0]) << ',' << format_sig6(row[1]) << '\n';
    }
}

} // namespace sbmeme
