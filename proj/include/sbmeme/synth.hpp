#pragma once

#include "sbmeme/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sbmeme {

enum class SynthNoise { none, poisson };

/// Grid generator settings. Each (p, q, gap) cell is replicated `reps`
/// times with varied mass and second-to-first potential ratio.
struct SynthParams {
    std::vector<double> ps{0.005, 0.01, 0.02};
    std::vector<double> qs{0.1, 0.2, 0.3};
    std::vector<int> gaps{20, 40, 60};
    int reps = 4;
    double m1_base = 300.0;
    std::uint64_t seed = 42;
    SynthNoise noise = SynthNoise::none;
};

/// Ground truth for one generated meme. `t1`/`t2` are the argmax ticks of
/// the noiseless series inside each generation, `s1`/`s2` the generation
/// onsets (the true awakening ticks).
struct SynthTruth {
    std::string meme_id;
    double p1 = 0, q1 = 0, m1 = 0;
    double p2 = 0, q2 = 0, m2 = 0;
    int s1 = 0, s2 = 0;
    int t1 = 0, t2 = 0;
    int length = 0;
    int requested_gap = 0;
    int sleep = 0;   // quiet ticks actually inserted before s2
};

struct SynthCorpus {
    Corpus corpus;
    std::vector<SynthTruth> truths;   // same order as corpus.series
};

/// Builds two-pulse memes: per-tick adoption counts of a two-generation
/// Bass model, zeros elsewhere. The lead-in sleep and the inter-generation
/// sleep are floored so the emitted memes satisfy the two-beauty geometry
/// (a sleep must exceed roughly twice the following rise). Poisson noise,
/// when enabled, draws each tick count from the noiseless rate with the
/// fixed seed.
SynthCorpus synth_corpus(const SynthParams& params);

void save_truth(const SynthCorpus& sc, const std::filesystem::path& path,
                const SynthParams& params);

} // namespace sbmeme
