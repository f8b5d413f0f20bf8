#include "sbmeme/synth.hpp"

#include "sbmeme/bass.hpp"
#include "sbmeme/errors.hpp"
#include "sbmeme/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace sbmeme {

namespace {

// per-tick adoption count of one generation, d ticks after its onset
double pulse(int d, double p, double q, double m) {
    if (d < 0) return 0.0;
    return m * (bass_cdf(d, p, q) - bass_cdf(d - 1, p, q));
}

int pulse_argmax(double p, double q) {
    int best = 0;
    double best_v = -1.0;
    const int scan_pad = static_cast<int>(std::ceil(10.0 / (p + q)));
    for (int d = 0; d <= best + scan_pad; ++d) {
        const double v = pulse(d, p, q, 1.0);
        if (v > best_v) {
            best_v = v;
            best = d;
        }
    }
    return best;
}

std::string format_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

SynthCorpus synth_corpus(const SynthParams& params) {
    if (params.reps < 1) throw std::invalid_argument("synth: reps must be >= 1");
    // second-to-first potential ratios cycled over the replicas; modest
    // ratios keep the first pulse detectable next to the second
    const double ratios[] = {2.5, 3.0, 3.25, 3.5};
    constexpr int n_ratios = 4;
    constexpr double tail_factor = 2.5;

    SynthCorpus out;
    out.corpus.source_label = "synthetic";
    std::mt19937_64 rng(params.seed);

    for (double p : params.ps) {
        for (double q : params.qs) {
            if (!(p > 0.0) || !(q > p))
                throw std::invalid_argument("synth: need 0 < p < q in the grid");
            for (int gap : params.gaps) {
                if (gap < 1) throw std::invalid_argument("synth: gaps must be >= 1");
                for (int rep = 0; rep < params.reps; ++rep) {
                    const double m1 = params.m1_base + 50.0 * rep;
                    const double m2 = m1 * ratios[rep % n_ratios];
                    const int d_peak = pulse_argmax(p, q);
                    const double peak1 = pulse(d_peak, p, q, m1);
                    // ticks for the first pulse to decay below peak/200
                    int decay = d_peak;
                    while (pulse(decay, p, q, m1) > peak1 / 200.0) ++decay;
                    decay -= d_peak;
                    // a sleep must exceed roughly twice the next rise for the
                    // beauty threshold to hold; floor both sleeps accordingly
                    const int lead = std::max(12, 2 * (d_peak + 1) + 8);
                    const int sleep = std::max(gap, 2 * (d_peak + 2) + 8);
                    const int s1 = lead;
                    const int s2 = s1 + d_peak + decay + sleep;
                    const int core = s2 + d_peak +
                                     static_cast<int>(std::ceil(6.0 / (p + q)));
                    const int horizon = static_cast<int>(core * (1.0 + tail_factor));

                    std::vector<double> values(static_cast<std::size_t>(horizon) + 1);
                    for (int t = 0; t <= horizon; ++t)
                        values[static_cast<std::size_t>(t)] =
                            pulse(t - s1, p, q, m1) + pulse(t - s2, p, q, m2);
                    if (params.noise == SynthNoise::poisson) {
                        for (double& v : values) {
                            if (v > 0.0) {
                                std::poisson_distribution<long> noise(v);
                                v = static_cast<double>(noise(rng));
                            }
                        }
                    }

                    std::ostringstream id;
                    id << "synth-p" << format_param(p) << "-q" << format_param(q)
                       << "-g" << gap << "-r" << rep;

                    SynthTruth truth;
                    truth.meme_id = id.str();
                    truth.p1 = truth.p2 = p;
                    truth.q1 = truth.q2 = q;
                    truth.m1 = m1;
                    truth.m2 = m2;
                    truth.s1 = s1;
                    truth.s2 = s2;
                    truth.length = horizon + 1;
                    truth.requested_gap = gap;
                    truth.sleep = sleep;
                    // discrete ground truth peaks of the emitted series
                    auto argmax_in = [&](int lo, int hi) {
                        int best = lo;
                        for (int t = lo; t < hi; ++t)
                            if (values[static_cast<std::size_t>(t)] >
                                values[static_cast<std::size_t>(best)])
                                best = t;
                        return best;
                    };
                    truth.t1 = argmax_in(s1, s2);
                    truth.t2 = argmax_in(s2, horizon + 1);

                    out.corpus.series.emplace_back(truth.meme_id, Granularity::day,
                                                   std::move(values));
                    out.truths.push_back(std::move(truth));
                }
            }
        }
    }

    std::vector<std::size_t> order(out.truths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.truths[a].meme_id < out.truths[b].meme_id;
    });
    SynthCorpus sorted;
    sorted.corpus.source_label = out.corpus.source_label;
    for (std::size_t i : order) {
        sorted.corpus.series.push_back(std::move(out.corpus.series[i]));
        sorted.truths.push_back(std::move(out.truths[i]));
    }
    return sorted;
}

void save_truth(const SynthCorpus& sc, const std::filesystem::path& path,
                const SynthParams& params) {
    nlohmann::json memes = nlohmann::json::array();
    for (const SynthTruth& t : sc.truths) {
        memes.push_back({{"meme_id", t.meme_id},
                         {"p1", round_sig6(t.p1)},
                         {"q1", round_sig6(t.q1)},
                         {"m1", round_sig6(t.m1)},
                         {"p2", round_sig6(t.p2)},
                         {"q2", round_sig6(t.q2)},
                         {"m2", round_sig6(t.m2)},
                         {"s1", t.s1},
                         {"s2", t.s2},
                         {"t1", t.t1},
                         {"t2", t.t2},
                         {"length", t.length},
                         {"requested_gap", t.requested_gap},
                         {"sleep", t.sleep}});
    }
    nlohmann::json j;
    j["seed"] = params.seed;
    j["noise"] = params.noise == SynthNoise::poisson ? "poisson" : "none";
    j["memes"] = memes;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write truth file '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

} // namespace sbmeme
