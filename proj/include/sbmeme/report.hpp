#pragma once

#include "sbmeme/bass.hpp"
#include "sbmeme/core_types.hpp"
#include "sbmeme/eval.hpp"
#include "sbmeme/stats.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sbmeme {

enum class ReportFormat { json, csv };

struct Rejection {
    std::string meme_id;
    RejectReason reason = RejectReason::none;
};

/// Serialized form of one fitted (or unfittable) meme model. Observed
/// innovation estimates are kept even when the fit failed later, so the
/// corpus distributions can still use them.
struct ModelRecord {
    std::string meme_id;
    bool fitted = false;
    std::string rejection;   // kebab-case fit error when !fitted
    double p1 = 0.0, q1 = 0.0, m1 = 0.0;
    double p2 = 0.0, q2 = 0.0, m2 = 0.0;
    int onset = 0;
    int horizon = 0;
    std::string root_choice_g1, root_choice_g2;
    std::optional<double> p1_observed, p2_observed;

    TwoStageBassModel to_model() const;   // throws std::logic_error if !fitted
};

struct EvalSection {
    std::vector<FitReport> per_meme;           // sorted by meme id
    std::map<int, PrecisionAtK> p_at_k;        // k = 0..3
    double mean_r = 0.0;
    double frac_r_gt_0_4 = 0.0;
};

/// The full analysis document; stages populate their own sections.
struct AnalysisReport {
    std::string source;
    std::optional<double> alpha;
    std::optional<int> k;
    std::optional<double> h;
    std::optional<std::string> p_mode;
    std::optional<std::pair<double, double>> corpus_p;
    std::vector<TwoBeautyProfile> profiles;    // sorted by meme id
    std::vector<Rejection> rejections;         // sorted by meme id
    std::vector<ModelRecord> models;           // sorted by meme id
    std::optional<CorpusReport> stats;
    std::optional<EvalSection> eval;
};

/// Stable serialization: sorted keys, floats rounded to 6 significant
/// digits, so identical reports are byte-identical. The csv format writes
/// the profile table only.
void write_report(const AnalysisReport& report, const std::filesystem::path& path,
                  ReportFormat format = ReportFormat::json);

/// Reads back any subset of sections from a JSON report.
AnalysisReport load_report(const std::filesystem::path& path);

} // namespace sbmeme
