// sb-meme: batch pipeline for two-sleeping-beauty detection, two-generation
// Bass fitting, corpus statistics and simulation evaluation.

#include "sbmeme/bass.hpp"
#include "sbmeme/errors.hpp"
#include "sbmeme/ingest.hpp"
#include "sbmeme/pipeline.hpp"
#include "sbmeme/report.hpp"
#include "sbmeme/synth.hpp"
#include "sbmeme/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace sbmeme;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIoError = 1;
constexpr int kExitEmpty = 2;

struct Options {
    std::string input;
    std::string out_dir = ".";
    std::string granularity = "day";
    int k = 5;
    double h = 0.5;
    double alpha = kDefaultAlpha;
    std::string p_mode = "corpus_mean";
    std::uint64_t seed = 42;
    // synth extras
    int reps = 4;
    std::string noise = "none";
    double m1_base = 300.0;
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

PipelineConfig make_config(const Options& opt) {
    PipelineConfig cfg;
    cfg.peak_params.k = opt.k;
    cfg.peak_params.h = opt.h;
    cfg.alpha = opt.alpha;
    cfg.p_mode = p_mode_from_string(opt.p_mode);
    return cfg;
}

LoadResult load_input(const Options& opt) {
    LoadResult lr = load_corpus(opt.input, granularity_from_string(opt.granularity));
    print_warnings(lr.warnings);
    return lr;
}

int cmd_detect(const Options& opt) {
    const LoadResult lr = load_input(opt);
    const PipelineConfig cfg = make_config(opt);

    AnalysisReport report;
    report.source = lr.corpus.source_label;
    report.k = opt.k;
    report.h = opt.h;
    report.alpha = opt.alpha;
    DetectOutput det = detect_corpus(lr.corpus, cfg);
    report.profiles = std::move(det.profiles);
    report.rejections = std::move(det.rejections);

    fs::create_directories(opt.out_dir);
    write_report(report, fs::path(opt.out_dir) / "profiles.json");
    std::cerr << "detect: " << report.profiles.size() << " accepted, "
              << report.rejections.size() << " rejected\n";
    return lr.corpus.series.empty() ? kExitEmpty : kExitOk;
}

int cmd_fit(const Options& opt) {
    const LoadResult lr = load_input(opt);
    const PipelineConfig cfg = make_config(opt);
    const AnalysisReport profiles =
        load_report(fs::path(opt.out_dir) / "profiles.json");

    AnalysisReport report;
    report.source = lr.corpus.source_label;
    report.p_mode = opt.p_mode;
    std::optional<std::pair<double, double>> corpus_p;
    report.models = fit_corpus(lr.corpus, profiles.profiles, cfg, &corpus_p);
    report.corpus_p = corpus_p;

    write_report(report, fs::path(opt.out_dir) / "models.json");
    std::size_t fitted = 0;
    for (const ModelRecord& m : report.models) fitted += m.fitted ? 1 : 0;
    std::cerr << "fit: " << fitted << "/" << report.models.size() << " fitted ("
              << opt.p_mode << " mode)\n";
    return report.models.empty() ? kExitEmpty : kExitOk;
}

int cmd_simulate(const Options& opt) {
    const AnalysisReport models = load_report(fs::path(opt.out_dir) / "models.json");
    Corpus rate, total;
    rate.source_label = "simulated-popularity";
    total.source_label = "simulated-diffusion";
    for (const ModelRecord& mr : models.models) {
        if (!mr.fitted) continue;
        const TwoStageBassModel model = mr.to_model();
        rate.series.push_back(popularity_curve(model, mr.meme_id));
        total.series.push_back(simulate(model, mr.meme_id));
    }
    if (rate.series.empty()) {
        std::cerr << "simulate: no fitted models\n";
        return kExitEmpty;
    }
    save_corpus(rate, fs::path(opt.out_dir) / "simulated_popularity.csv");
    save_corpus(total, fs::path(opt.out_dir) / "simulated_diffusion.csv");
    std::cerr << "simulate: wrote " << rate.series.size() << " trajectories\n";
    return kExitOk;
}

int cmd_stats(const Options& opt) {
    const LoadResult lr = load_input(opt);
    const AnalysisReport profiles =
        load_report(fs::path(opt.out_dir) / "profiles.json");
    const AnalysisReport models = load_report(fs::path(opt.out_dir) / "models.json");

    const StatsOutput so = corpus_stats(lr.corpus, profiles.profiles, models.models);

    AnalysisReport report;
    report.source = lr.corpus.source_label;
    report.stats = so.report;
    write_report(report, fs::path(opt.out_dir) / "stats.json");
    write_stats_figures(so.figures, opt.out_dir);
    std::cerr << "stats: lambda=" << format_sig6(so.report.lambda)
              << " alpha_m=" << format_sig6(so.report.alpha_m) << " over "
              << so.report.n_profiles << " profiles\n";
    return kExitOk;
}

int cmd_eval(const Options& opt) {
    const LoadResult lr = load_input(opt);
    const PipelineConfig cfg = make_config(opt);
    const AnalysisReport profiles =
        load_report(fs::path(opt.out_dir) / "profiles.json");
    const AnalysisReport models = load_report(fs::path(opt.out_dir) / "models.json");

    const EvalOutput eo =
        evaluate_corpus(lr.corpus, profiles.profiles, models.models, cfg);

    AnalysisReport report;
    report.source = lr.corpus.source_label;
    report.eval = eo.section;
    write_report(report, fs::path(opt.out_dir) / "eval.json");
    const PMode mode = models.p_mode ? p_mode_from_string(*models.p_mode)
                                     : PMode::corpus_mean;
    write_eval_figures(eo.figures, opt.out_dir, mode);
    std::cerr << "eval: mean_r=" << format_sig6(eo.section.mean_r) << " p@1="
              << format_sig6(eo.section.p_at_k.at(1).fraction) << " over "
              << eo.section.per_meme.size() << " memes\n";
    return kExitOk;
}

int cmd_synth(const Options& opt) {
    SynthParams params;
    params.reps = opt.reps;
    params.seed = opt.seed;
    params.m1_base = opt.m1_base;
    if (opt.noise == "poisson") {
        params.noise = SynthNoise::poisson;
    } else if (opt.noise != "none") {
        throw std::invalid_argument("synth: --noise must be none|poisson");
    }
    const SynthCorpus sc = synth_corpus(params);
    fs::create_directories(opt.out_dir);
    save_corpus(sc.corpus, fs::path(opt.out_dir) / "synthetic.csv");
    save_truth(sc, fs::path(opt.out_dir) / "synthetic_truth.json", params);
    std::cerr << "synth: wrote " << sc.corpus.series.size() << " memes\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sleeping-beauty meme analysis"};
    app.require_subcommand(1);

    app.set_help_flag("--help", "print help");

    Options opt;
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        sub->set_help_flag("--help", "print help");   // frees -h for the spike flag
        if (needs_input)
            sub->add_option("--input", opt.input, "corpus CSV or JSON file")->required();
        sub->add_option("--out-dir", opt.out_dir, "artifact directory");
        sub->add_option("--granularity", opt.granularity, "day|week|month|year");
        sub->add_option("--k", opt.k, "peak neighborhood half-width");
        sub->add_option("--h", opt.h, "peak significance multiplier");
        sub->add_option("--alpha", opt.alpha, "beauty threshold fraction");
        sub->add_option("--p-mode", opt.p_mode, "observed|corpus_mean");
        sub->add_option("--seed", opt.seed, "seed for synthetic data");
    };

    CLI::App* detect = app.add_subcommand("detect", "identify two-beauty profiles");
    add_common(detect, true);
    CLI::App* fit = app.add_subcommand("fit", "fit two-generation Bass models");
    add_common(fit, true);
    CLI::App* simulate = app.add_subcommand("simulate", "write simulated trajectories");
    add_common(simulate, false);
    CLI::App* stats = app.add_subcommand("stats", "corpus statistics and figure data");
    add_common(stats, true);
    CLI::App* eval = app.add_subcommand("eval", "per-meme simulation quality");
    add_common(eval, true);
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    add_common(synth, false);
    synth->add_option("--reps", opt.reps, "replicas per grid cell");
    synth->add_option("--noise", opt.noise, "none|poisson");
    synth->add_option("--m1-base", opt.m1_base, "base first-generation potential");

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) return cmd_detect(opt);
        if (fit->parsed()) return cmd_fit(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (stats->parsed()) return cmd_stats(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (synth->parsed()) return cmd_synth(opt);
    } catch (const InsufficientSample& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitOk;
}
