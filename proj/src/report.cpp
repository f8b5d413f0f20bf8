#include "sbmeme/report.hpp"

#include "sbmeme/errors.hpp"
#include "sbmeme/util.hpp"

#include <json.hpp>

#include <fstream>

namespace sbmeme {

using nlohmann::json;

namespace {

json num(double v) { return round_sig6(v); }

json profile_to_json(const TwoBeautyProfile& p) {
    json j;
    j["meme_id"] = p.meme_id;
    j["t0"] = p.t0;
    j["ta1"] = p.ta1;
    j["t1"] = p.t1;
    j["tf1"] = p.tf1;
    j["ta2"] = p.ta2;
    j["t2"] = p.t2;
    j["tf2"] = p.tf2;
    j["T"] = p.t_end;
    j["B1"] = num(p.b1);
    j["B2"] = num(p.b2);
    j["m1"] = num(p.m1);
    j["m2"] = num(p.m2);
    j["v1"] = num(p.v1);
    j["v2"] = num(p.v2);
    j["gap"] = p.gap;
    return j;
}

TwoBeautyProfile profile_from_json(const json& j) {
    TwoBeautyProfile p;
    p.meme_id = j.at("meme_id").get<std::string>();
    p.t0 = j.at("t0").get<int>();
    p.ta1 = j.at("ta1").get<int>();
    p.t1 = j.at("t1").get<int>();
    p.tf1 = j.at("tf1").get<int>();
    p.ta2 = j.at("ta2").get<int>();
    p.t2 = j.at("t2").get<int>();
    p.tf2 = j.at("tf2").get<int>();
    p.t_end = j.at("T").get<int>();
    p.b1 = j.at("B1").get<double>();
    p.b2 = j.at("B2").get<double>();
    p.m1 = j.at("m1").get<double>();
    p.m2 = j.at("m2").get<double>();
    p.v1 = j.at("v1").get<double>();
    p.v2 = j.at("v2").get<double>();
    p.gap = j.at("gap").get<int>();
    return p;
}

json model_to_json(const ModelRecord& m) {
    json j;
    j["meme_id"] = m.meme_id;
    j["fitted"] = m.fitted;
    if (m.fitted) {
        j["p1"] = num(m.p1);
        j["q1"] = num(m.q1);
        j["m1"] = num(m.m1);
        j["p2"] = num(m.p2);
        j["q2"] = num(m.q2);
        j["m2"] = num(m.m2);
        j["onset"] = m.onset;
        j["horizon"] = m.horizon;
        j["root_choice"] = json::array({m.root_choice_g1, m.root_choice_g2});
    } else {
        j["rejection"] = m.rejection;
    }
    if (m.p1_observed) j["p1_observed"] = num(*m.p1_observed);
    if (m.p2_observed) j["p2_observed"] = num(*m.p2_observed);
    return j;
}

ModelRecord model_from_json(const json& j) {
    ModelRecord m;
    m.meme_id = j.at("meme_id").get<std::string>();
    m.fitted = j.at("fitted").get<bool>();
    if (m.fitted) {
        m.p1 = j.at("p1").get<double>();
        m.q1 = j.at("q1").get<double>();
        m.m1 = j.at("m1").get<double>();
        m.p2 = j.at("p2").get<double>();
        m.q2 = j.at("q2").get<double>();
        m.m2 = j.at("m2").get<double>();
        m.onset = j.at("onset").get<int>();
        m.horizon = j.at("horizon").get<int>();
        m.root_choice_g1 = j.at("root_choice").at(0).get<std::string>();
        m.root_choice_g2 = j.at("root_choice").at(1).get<std::string>();
    } else {
        m.rejection = j.at("rejection").get<std::string>();
    }
    if (j.contains("p1_observed")) m.p1_observed = j.at("p1_observed").get<double>();
    if (j.contains("p2_observed")) m.p2_observed = j.at("p2_observed").get<double>();
    return m;
}

json gauss_to_json(const std::optional<GaussianFit>& g) {
    if (!g) return nullptr;
    json j;
    j["a"] = num(g->a);
    j["mu"] = num(g->mu);
    j["sigma"] = num(g->sigma);
    j["r2"] = num(g->r2);
    return j;
}

std::optional<GaussianFit> gauss_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    GaussianFit g;
    g.a = j.at("a").get<double>();
    g.mu = j.at("mu").get<double>();
    g.sigma = j.at("sigma").get<double>();
    g.r2 = j.at("r2").get<double>();
    return g;
}

json stats_to_json(const CorpusReport& s) {
    json j;
    j["lambda"] = num(s.lambda);
    j["lambda_fit_R"] = num(s.lambda_fit_R);
    j["alpha_m"] = num(s.alpha_m);
    j["alpha_fit_R"] = num(s.alpha_fit_R);
    j["velocity_ratio_mean"] = num(s.velocity_ratio_mean);
    j["p_gauss"] = {{"g1", gauss_to_json(s.p_gauss_g1)},
                    {"g2", gauss_to_json(s.p_gauss_g2)}};
    j["q_mean"] = {{"g1", s.q_mean_g1 ? json(num(*s.q_mean_g1)) : json(nullptr)},
                   {"g2", s.q_mean_g2 ? json(num(*s.q_mean_g2)) : json(nullptr)}};
    j["n_profiles"] = s.n_profiles;
    return j;
}

CorpusReport stats_from_json(const json& j) {
    CorpusReport s;
    s.lambda = j.at("lambda").get<double>();
    s.lambda_fit_R = j.at("lambda_fit_R").get<double>();
    s.alpha_m = j.at("alpha_m").get<double>();
    s.alpha_fit_R = j.at("alpha_fit_R").get<double>();
    s.velocity_ratio_mean = j.at("velocity_ratio_mean").get<double>();
    s.p_gauss_g1 = gauss_from_json(j.at("p_gauss").at("g1"));
    s.p_gauss_g2 = gauss_from_json(j.at("p_gauss").at("g2"));
    if (!j.at("q_mean").at("g1").is_null())
        s.q_mean_g1 = j.at("q_mean").at("g1").get<double>();
    if (!j.at("q_mean").at("g2").is_null())
        s.q_mean_g2 = j.at("q_mean").at("g2").get<double>();
    s.n_profiles = j.at("n_profiles").get<int>();
    return s;
}

json eval_to_json(const EvalSection& e) {
    json per = json::array();
    for (const FitReport& r : e.per_meme) {
        per.push_back({{"meme_id", r.meme_id},
                       {"pearson_r", num(r.pearson_r)},
                       {"peak_error_k", r.peak_error_k}});
    }
    json pk;
    for (const auto& [k, v] : e.p_at_k) {
        pk[std::to_string(k)] = {{"count", v.count}, {"fraction", num(v.fraction)}};
    }
    json j;
    j["per_meme"] = per;
    j["p_at_k"] = pk;
    j["mean_r"] = num(e.mean_r);
    j["frac_r_gt_0.4"] = num(e.frac_r_gt_0_4);
    return j;
}

EvalSection eval_from_json(const json& j) {
    EvalSection e;
    for (const auto& r : j.at("per_meme")) {
        FitReport fr;
        fr.meme_id = r.at("meme_id").get<std::string>();
        fr.pearson_r = r.at("pearson_r").get<double>();
        fr.peak_error_k = r.at("peak_error_k").get<int>();
        e.per_meme.push_back(std::move(fr));
    }
    for (const auto& [key, v] : j.at("p_at_k").items()) {
        PrecisionAtK pk;
        pk.count = v.at("count").get<int>();
        pk.fraction = v.at("fraction").get<double>();
        e.p_at_k[std::stoi(key)] = pk;
    }
    e.mean_r = j.at("mean_r").get<double>();
    e.frac_r_gt_0_4 = j.at("frac_r_gt_0.4").get<double>();
    return e;
}

void write_profiles_csv(const AnalysisReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write report file '" + path.string() + "'");
    out << "meme_id,t0,ta1,t1,tf1,ta2,t2,tf2,T,B1,B2,m1,m2,v1,v2,gap\n";
    for (const TwoBeautyProfile& p : report.profiles) {
        out << p.meme_id << ',' << p.t0 << ',' << p.ta1 << ',' << p.t1 << ','
            << p.tf1 << ',' << p.ta2 << ',' << p.t2 << ',' << p.tf2 << ','
            << p.t_end << ',' << format_sig6(p.b1) << ',' << format_sig6(p.b2)
            << ',' << format_sig6(p.m1) << ',' << format_sig6(p.m2) << ','
            << format_sig6(p.v1) << ',' << format_sig6(p.v2) << ',' << p.gap
            << '\n';
    }
    if (!out) throw ParseError("write failed for report file '" + path.string() + "'");
}

} // namespace

TwoStageBassModel ModelRecord::to_model() const {
    if (!fitted) throw std::logic_error("ModelRecord::to_model: meme '" + meme_id +
                                        "' was not fitted");
    return TwoStageBassModel::checked(BassGeneration::checked(p1, q1, m1, 0),
                                      BassGeneration::checked(p2, q2, m2, onset),
                                      horizon);
}

void write_report(const AnalysisReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
    if (format == ReportFormat::csv) {
        write_profiles_csv(report, path);
        return;
    }
    json j;
    j["source"] = report.source;
    if (report.alpha) j["alpha"] = num(*report.alpha);
    if (report.k) j["k"] = *report.k;
    if (report.h) j["h"] = num(*report.h);
    if (report.p_mode) j["p_mode"] = *report.p_mode;
    if (report.corpus_p)
        j["corpus_p"] = json::array({num(report.corpus_p->first), num(report.corpus_p->second)});

    json profiles = json::array();
    for (const TwoBeautyProfile& p : report.profiles) profiles.push_back(profile_to_json(p));
    j["profiles"] = profiles;

    json rejections = json::array();
    for (const Rejection& r : report.rejections)
        rejections.push_back({{"meme_id", r.meme_id}, {"reason", to_string(r.reason)}});
    j["rejections"] = rejections;

    json models = json::array();
    for (const ModelRecord& m : report.models) models.push_back(model_to_json(m));
    j["models"] = models;

    if (report.stats) j["stats"] = stats_to_json(*report.stats);
    if (report.eval) j["eval"] = eval_to_json(*report.eval);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write report file '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw ParseError("write failed for report file '" + path.string() + "'");
}

AnalysisReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open report file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    AnalysisReport report;
    try {
        report.source = j.value("source", "");
        if (j.contains("alpha")) report.alpha = j.at("alpha").get<double>();
        if (j.contains("k")) report.k = j.at("k").get<int>();
        if (j.contains("h")) report.h = j.at("h").get<double>();
        if (j.contains("p_mode")) report.p_mode = j.at("p_mode").get<std::string>();
        if (j.contains("corpus_p") && !j.at("corpus_p").is_null())
            report.corpus_p = {j.at("corpus_p").at(0).get<double>(),
                               j.at("corpus_p").at(1).get<double>()};
        if (j.contains("profiles"))
            for (const auto& p : j.at("profiles"))
                report.profiles.push_back(profile_from_json(p));
        if (j.contains("rejections"))
            for (const auto& r : j.at("rejections"))
                report.rejections.push_back(
                    {r.at("meme_id").get<std::string>(),
                     reject_reason_from_string(r.at("reason").get<std::string>())});
        if (j.contains("models"))
            for (const auto& m : j.at("models"))
                report.models.push_back(model_from_json(m));
        if (j.contains("stats") && !j.at("stats").is_null())
            report.stats = stats_from_json(j.at("stats"));
        if (j.contains("eval") && !j.at("eval").is_null())
            report.eval = eval_from_json(j.at("eval"));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return report;
}

} // namespace sbmeme
