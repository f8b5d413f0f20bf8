#include "sbmeme/ingest.hpp"

#include "sbmeme/errors.hpp"
#include "sbmeme/report.hpp"
#include "sbmeme/util.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sbmeme;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "sbmeme-ingest-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 12 ticks so the series survives the minimum-span filter
std::string long_series_rows(const std::string& id, int offset = 0) {
    std::ostringstream os;
    for (int t = 0; t < 12; ++t)
        os << id << ',' << (offset + t) << ',' << (t % 5) + 1 << "\n";
    return os.str();
}

} // namespace

TEST_CASE("csv loading zero-fills gaps") {
    const fs::path p = write_file(
        "gaps.csv", "meme_id,t,value\na,0,5\na,2,7\n" + long_series_rows("b"));
    const LoadResult lr = load_corpus(p, Granularity::day);
    // 'a' spans 3 ticks and is skipped; use a variant long enough to keep
    CHECK(lr.corpus.series.size() == 1);
    CHECK(lr.warnings.size() == 1);

    const fs::path p2 = write_file(
        "gaps2.csv",
        "meme_id,t,value\na,0,5\na,2,7\na,11,1\n");
    const LoadResult lr2 = load_corpus(p2, Granularity::day);
    REQUIRE(lr2.corpus.series.size() == 1);
    const TimeSeries& s = lr2.corpus.series[0];
    CHECK(s.size() == 12);
    CHECK(s[0] == 5.0);
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 7.0);
    CHECK(s[11] == 1.0);
}

TEST_CASE("csv loading re-indexes ticks to start at zero") {
    const fs::path p = write_file("shift.csv",
                                  "meme_id,t,value\n" + long_series_rows("a", 100));
    const LoadResult lr = load_corpus(p, Granularity::week);
    REQUIRE(lr.corpus.series.size() == 1);
    CHECK(lr.corpus.series[0].size() == 12);
    CHECK(lr.corpus.series[0][0] == 1.0);
    CHECK(lr.corpus.series[0].granularity() == Granularity::week);
}

TEST_CASE("empty corpus files load with a warning") {
    const fs::path empty = write_file("empty.csv", "");
    const LoadResult a = load_corpus(empty, Granularity::day);
    CHECK(a.corpus.series.empty());
    CHECK(a.warnings.size() == 1);

    const fs::path header_only = write_file("header.csv", "meme_id,t,value\n");
    const LoadResult b = load_corpus(header_only, Granularity::day);
    CHECK(b.corpus.series.empty());
    CHECK(b.warnings.size() == 1);
}

TEST_CASE("csv errors name the offending line") {
    const fs::path dup = write_file("dup.csv", "meme_id,t,value\na,0,1\na,0,2\n");
    CHECK_THROWS_WITH_AS(load_corpus(dup, Granularity::day),
                         doctest::Contains("dup.csv:3"), ParseError);

    const fs::path neg = write_file("neg.csv", "meme_id,t,value\na,0,1\na,1,-3\n");
    CHECK_THROWS_WITH_AS(load_corpus(neg, Granularity::day),
                         doctest::Contains("neg.csv:3"), ParseError);

    const fs::path bad = write_file("bad.csv", "meme_id,t,value\na,zero,1\n");
    CHECK_THROWS_WITH_AS(load_corpus(bad, Granularity::day),
                         doctest::Contains("bad.csv:2"), ParseError);

    const fs::path fields = write_file("fields.csv", "meme_id,t,value\na,0\n");
    CHECK_THROWS_AS(load_corpus(fields, Granularity::day), ParseError);

    const fs::path header = write_file("badheader.csv", "id,tick,count\na,0,1\n");
    CHECK_THROWS_AS(load_corpus(header, Granularity::day), ParseError);

    CHECK_THROWS_AS(load_corpus(temp_dir() / "missing.csv", Granularity::day),
                    ParseError);
}

TEST_CASE("crlf line endings are accepted") {
    std::string content = "meme_id,t,value\r\n";
    for (int t = 0; t < 12; ++t)
        content += "a," + std::to_string(t) + "," + std::to_string(t) + "\r\n";
    const fs::path p = write_file("crlf.csv", content);
    const LoadResult lr = load_corpus(p, Granularity::day);
    REQUIRE(lr.corpus.series.size() == 1);
    CHECK(lr.corpus.series[0][11] == 11.0);
}

TEST_CASE("short series are skipped with a warning") {
    // a spans 11 ticks, c spans 6: both below the 12-tick minimum
    const fs::path p = write_file("short.csv",
                                  "meme_id,t,value\na,0,1\na,10,2\n" +
                                      long_series_rows("b") + "c,0,1\nc,5,2\n");
    const LoadResult lr = load_corpus(p, Granularity::day);
    REQUIRE(lr.corpus.series.size() == 1);
    CHECK(lr.corpus.series[0].meme_id() == "b");
    CHECK(lr.warnings.size() == 2);
}

TEST_CASE("json corpus input") {
    const fs::path p = write_file(
        "corpus.json",
        R"([{"meme_id":"x","values":[0,1,2,3,4,5,6,7,8,9,10,11]},)"
        R"({"meme_id":"y","values":[1,1]}])");
    const LoadResult lr = load_corpus(p, Granularity::month);
    REQUIRE(lr.corpus.series.size() == 1);   // y is too short
    CHECK(lr.corpus.series[0].meme_id() == "x");
    CHECK(lr.corpus.series[0][11] == 11.0);
    CHECK(lr.warnings.size() == 1);

    const fs::path dup = write_file(
        "dup.json", R"([{"meme_id":"x","values":[1,2]},{"meme_id":"x","values":[3,4]}])");
    CHECK_THROWS_AS(load_corpus(dup, Granularity::day), ParseError);

    const fs::path neg = write_file("neg.json", R"([{"meme_id":"x","values":[1,-2]}])");
    CHECK_THROWS_AS(load_corpus(neg, Granularity::day), ParseError);
}

TEST_CASE("corpus round-trips through save and load") {
    std::vector<TimeSeries> series;
    series.emplace_back("alpha", Granularity::day,
                        std::vector<double>{0, 1.5, 0, 2.25, 0, 7, 0, 0, 1, 0, 3, 0.125});
    series.emplace_back("beta", Granularity::day,
                        std::vector<double>{1, 0, 0, 4, 5, 6, 7, 0, 0, 10, 11, 12, 13});
    Corpus corpus{std::move(series), "test"};

    const fs::path p = temp_dir() / "roundtrip.csv";
    save_corpus(corpus, p);
    const LoadResult lr = load_corpus(p, Granularity::day);
    REQUIRE(lr.corpus.series.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(lr.corpus.series[i].meme_id() == corpus.series[i].meme_id());
        CHECK(lr.corpus.series[i].values() == corpus.series[i].values());
    }

    // a second save is byte-identical
    const fs::path p2 = temp_dir() / "roundtrip2.csv";
    save_corpus(lr.corpus, p2);
    CHECK(read_file(p) == read_file(p2));
}

namespace {

AnalysisReport sample_report() {
    AnalysisReport report;
    report.source = "unit";
    report.alpha = 1.0 / 3.0;
    report.k = 5;
    report.h = 0.5;
    report.profiles.push_back(TwoBeautyProfile::checked(
        "alpha", 0, 5, 10, 15, 30, 40, 50, 60, 4.1234567, 10.7654321, 50.5, 401.25,
        1.625, 9.875, 9.0, 27.0));
    report.rejections.push_back({"beta", RejectReason::too_few_peaks});
    ModelRecord m;
    m.meme_id = "alpha";
    m.fitted = true;
    m.p1 = 0.0123456789;
    m.q1 = 0.198765432;
    m.m1 = 50.5;
    m.p2 = 0.0111111111;
    m.q2 = 0.3;
    m.m2 = 401.25;
    m.onset = 25;
    m.horizon = 55;
    m.root_choice_g1 = "upper";
    m.root_choice_g2 = "lower";
    m.p1_observed = 0.0123456789;
    m.p2_observed = 0.0111111111;
    report.models.push_back(m);
    return report;
}

} // namespace

TEST_CASE("report json round-trips every field") {
    const AnalysisReport report = sample_report();
    const fs::path p = temp_dir() / "report.json";
    write_report(report, p);

    const AnalysisReport loaded = load_report(p);
    CHECK(loaded.source == "unit");
    REQUIRE(loaded.profiles.size() == 1);
    const TwoBeautyProfile& got = loaded.profiles[0];
    const TwoBeautyProfile& want = report.profiles[0];
    CHECK(got.meme_id == want.meme_id);
    CHECK(got.ta1 == want.ta1);
    CHECK(got.tf2 == want.tf2);
    CHECK(got.t_end == want.t_end);
    CHECK(got.gap == want.gap);
    // floats come back at six significant digits
    CHECK(got.b1 == round_sig6(want.b1));
    CHECK(got.b2 == round_sig6(want.b2));
    CHECK(got.m2 == round_sig6(want.m2));
    CHECK(got.v2 == round_sig6(want.v2));
    REQUIRE(loaded.rejections.size() == 1);
    CHECK(loaded.rejections[0].reason == RejectReason::too_few_peaks);
    REQUIRE(loaded.models.size() == 1);
    CHECK(loaded.models[0].fitted);
    CHECK(loaded.models[0].q1 == round_sig6(report.models[0].q1));
    CHECK(loaded.models[0].root_choice_g2 == "lower");
    CHECK(loaded.models[0].p2_observed.has_value());
}

TEST_CASE("re-serializing a loaded report is byte identical") {
    const fs::path p1 = temp_dir() / "stable1.json";
    const fs::path p2 = temp_dir() / "stable2.json";
    write_report(sample_report(), p1);
    write_report(load_report(p1), p2);
    CHECK(read_file(p1) == read_file(p2));
}

TEST_CASE("an empty report is a valid document") {
    AnalysisReport empty;
    empty.source = "none";
    const fs::path p = temp_dir() / "empty.json";
    write_report(empty, p);
    const AnalysisReport loaded = load_report(p);
    CHECK(loaded.profiles.empty());
    CHECK(loaded.rejections.empty());
    CHECK(loaded.models.empty());
    CHECK_FALSE(loaded.stats.has_value());
    CHECK_FALSE(loaded.eval.has_value());
}

TEST_CASE("csv report format writes the profile table") {
    const fs::path p = temp_dir() / "profiles.csv";
    write_report(sample_report(), p, ReportFormat::csv);
    const std::string content = read_file(p);
    CHECK(content.find("meme_id,t0,ta1,t1,tf1,ta2,t2,tf2,T,B1,B2,m1,m2,v1,v2,gap") == 0);
    CHECK(content.find("alpha,0,5,10,15,30,40,50,60,") != std::string::npos);

    AnalysisReport empty;
    const fs::path pe = temp_dir() / "profiles_empty.csv";
    write_report(empty, pe, ReportFormat::csv);
    CHECK(read_file(pe) == "meme_id,t0,ta1,t1,tf1,ta2,t2,tf2,T,B1,B2,m1,m2,v1,v2,gap\n");
}

TEST_CASE("stats and eval sections survive the round trip") {
    AnalysisReport report;
    report.source = "unit";
    CorpusReport stats;
    stats.lambda = 0.0456789;
    stats.lambda_fit_R = 0.91;
    stats.alpha_m = 1.1234;
    stats.alpha_fit_R = 0.88;
    stats.velocity_ratio_mean = 3.21;
    stats.p_gauss_g1 = GaussianFit{12.0, 0.0211111, 0.00711111, 0.93};
    stats.q_mean_g1 = 0.25;
    stats.n_profiles = 42;
    report.stats = stats;
    EvalSection eval;
    eval.per_meme.push_back({"alpha", 0.987654, 1});
    eval.p_at_k[0] = {10, 0.5};
    eval.p_at_k[1] = {20, 1.0};
    eval.mean_r = 0.8123456;
    eval.frac_r_gt_0_4 = 0.75;
    report.eval = eval;

    const fs::path p = temp_dir() / "sections.json";
    write_report(report, p);
    const AnalysisReport loaded = load_report(p);
    REQUIRE(loaded.stats.has_value());
    CHECK(loaded.stats->lambda == round_sig6(0.0456789));
    CHECK(loaded.stats->p_gauss_g1.has_value());
    CHECK_FALSE(loaded.stats->p_gauss_g2.has_value());
    CHECK(loaded.stats->q_mean_g1 == 0.25);
    CHECK_FALSE(loaded.stats->q_mean_g2.has_value());
    CHECK(loaded.stats->n_profiles == 42);
    REQUIRE(loaded.eval.has_value());
    CHECK(loaded.eval->per_meme.size() == 1);
    CHECK(loaded.eval->p_at_k.at(1).count == 20);
    CHECK(loaded.eval->mean_r == round_sig6(0.8123456));
}
