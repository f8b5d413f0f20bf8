#pragma once

#include "sbmeme/bass.hpp"
#include "sbmeme/beauty.hpp"
#include "sbmeme/ingest.hpp"
#include "sbmeme/report.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace sbmeme {

struct PipelineConfig {
    PeakParams peak_params;
    double alpha = kDefaultAlpha;
    PMode p_mode = PMode::corpus_mean;
    int threads = 0;   // 0: SB_MEME_THREADS env or hardware concurrency
};

/// Worker count to use: `requested` when positive, else the SB_MEME_THREADS
/// environment variable, else the hardware concurrency.
int resolve_threads(int requested);

struct DetectOutput {
    std::vector<TwoBeautyProfile> profiles;   // sorted by meme id
    std::vector<Rejection> rejections;        // sorted by meme id
};

/// Runs identify_two_beauties over the corpus in parallel. Output order is
/// canonical (meme id), independent of the worker count.
DetectOutput detect_corpus(const Corpus& corpus, const PipelineConfig& cfg);

/// Fits every profile. In corpus_mean mode the per-generation mean of the
/// observed innovation estimates is computed in a sequential prior pass.
std::vector<ModelRecord> fit_corpus(const Corpus& corpus,
                                    const std::vector<TwoBeautyProfile>& profiles,
                                    const PipelineConfig& cfg,
                                    std::optional<std::pair<double, double>>* corpus_p_out = nullptr);

/// Rows for the figure-analogue CSVs emitted next to stats.json.
struct StatsFigures {
    // fig3: gap, empirical density, fitted density
    std::vector<std::array<double, 3>> gap_hist;
    // fig4: m1, m2 per profile
    std::vector<std::array<double, 2>> mass_pairs;
    // fig5: meme_id, v1, v2, v2/v1
    struct VelocityRow { std::string meme_id; double v1, v2, ratio; };
    std::vector<VelocityRow> velocities;
    // fig6: generation, bin center, density, gaussian fit value (nan if none)
    struct DistRow { int generation; double center, density, fit; };
    std::vector<DistRow> p_dist;
    // fig7: generation, bin center, density
    std::vector<DistRow> q_dist;
};

struct StatsOutput {
    CorpusReport report;
    StatsFigures figures;
};

/// Aggregates the corpus statistics. Throws InsufficientSample below 10
/// profiles and SchemaError when a profile references a missing meme.
StatsOutput corpus_stats(const Corpus& corpus,
                         const std::vector<TwoBeautyProfile>& profiles,
                         const std::vector<ModelRecord>& models);

struct EvalFigures {
    // fig8/fig9: t, observed g1 avg, simulated g1 avg, observed g2 avg, simulated g2 avg
    std::vector<std::array<double, 5>> averaged;
    // fig10: bin center, density of per-meme pearson r (width 0.05 on [-1, 1])
    std::vector<std::array<double, 2>> r_hist;
};

struct EvalOutput {
    EvalSection section;
    EvalFigures figures;
};

/// Simulates every fitted model on the re-based axis, compares the per-tick
/// popularity view against the observed series, and aggregates p@k.
EvalOutput evaluate_corpus(const Corpus& corpus,
                           const std::vector<TwoBeautyProfile>& profiles,
                           const std::vector<ModelRecord>& models,
                           const PipelineConfig& cfg);

void write_stats_figures(const StatsFigures& figs, const std::filesystem::path& dir);

/// fig8.csv for corpus-mean models, fig9.csv for observed-p models, plus
/// fig10.csv.
void write_eval_figures(const EvalFigures& figs, const std::filesystem::path& dir,
                        PMode p_mode);

} // namespace sbmeme
