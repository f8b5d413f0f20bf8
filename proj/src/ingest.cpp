#include "sbmeme/ingest.hpp"

#include "sbmeme/errors.hpp"
#include "sbmeme/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sbmeme {

namespace {

constexpr int kMinTicks = 12;

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

ParseError row_error(const std::filesystem::path& path, std::size_t line,
                     const std::string& what) {
    return ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_tick(const std::string& field, long& out) {
    if (field.empty()) return false;
    for (char c : field)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    try {
        out = std::stol(field);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

bool parse_value(const std::string& field, double& out) {
    if (field.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(field, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == field.size() && std::isfinite(out);
}

LoadResult load_corpus_csv(const std::filesystem::path& path, Granularity granularity) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file '" + path.string() + "'");

    LoadResult result;
    result.corpus.source_label = path.filename().string();

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        result.warnings.push_back("corpus '" + path.string() + "' is empty");
        return result;
    }
    ++line_no;
    if (strip_cr(line) != "meme_id,t,value")
        throw row_error(path, line_no, "expected header 'meme_id,t,value'");

    // per meme: tick -> value, plus the line that defined it for error context
    std::map<std::string, std::map<long, double>> rows;
    bool any_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id, tick_str, value_str, extra;
        if (!std::getline(ss, id, ',') || !std::getline(ss, tick_str, ',') ||
            !std::getline(ss, value_str, ','))
            throw row_error(path, line_no, "expected 3 comma-separated fields");
        if (std::getline(ss, extra, ','))
            throw row_error(path, line_no, "expected 3 comma-separated fields");
        if (id.empty()) throw row_error(path, line_no, "empty meme_id");
        long tick = 0;
        if (!parse_tick(tick_str, tick))
            throw row_error(path, line_no, "tick '" + tick_str + "' is not a non-negative integer");
        double value = 0.0;
        if (!parse_value(value_str, value))
            throw row_error(path, line_no, "value '" + value_str + "' is not a finite number");
        if (value < 0.0)
            throw row_error(path, line_no, "negative value for meme '" + id + "'");
        auto [it, inserted] = rows[id].emplace(tick, value);
        (void)it;
        if (!inserted)
            throw row_error(path, line_no, "duplicate (meme_id, t) key ('" + id +
                                           "', " + std::to_string(tick) + ")");
        any_row = true;
    }
    if (!any_row) {
        result.warnings.push_back("corpus '" + path.string() + "' has no data rows");
        return result;
    }

    for (const auto& [id, ticks] : rows) {
        const long lo = ticks.begin()->first;
        const long hi = ticks.rbegin()->first;
        const long span = hi - lo + 1;
        if (span < kMinTicks) {
            result.warnings.push_back("series '" + id + "' spans " +
                                      std::to_string(span) +
                                      " ticks (< 12), skipped");
            continue;
        }
        std::vector<double> values(static_cast<std::size_t>(span), 0.0);
        for (const auto& [t, v] : ticks)
            values[static_cast<std::size_t>(t - lo)] = v;
        result.corpus.series.emplace_back(id, granularity, std::move(values));
    }
    return result;
}

LoadResult load_corpus_json(const std::filesystem::path& path, Granularity granularity) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!doc.is_array())
        throw ParseError(path.string() + ": expected a JSON array of series objects");

    LoadResult result;
    result.corpus.source_label = path.filename().string();
    if (doc.empty()) {
        result.warnings.push_back("corpus '" + path.string() + "' is empty");
        return result;
    }
    std::map<std::string, std::vector<double>> by_id;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        if (!entry.is_object() || !entry.contains("meme_id") || !entry.contains("values"))
            throw ParseError(path.string() + ": entry #" + std::to_string(i) +
                             " needs meme_id and values");
        const std::string id = entry.at("meme_id").get<std::string>();
        std::vector<double> values;
        for (const auto& v : entry.at("values")) {
            const double x = v.get<double>();
            if (!std::isfinite(x) || x < 0.0)
                throw ParseError(path.string() + ": series '" + id +
                                 "' has a negative or non-finite value");
            values.push_back(x);
        }
        if (!by_id.emplace(id, std::move(values)).second)
            throw ParseError(path.string() + ": duplicate meme_id '" + id + "'");
    }
    for (auto& [id, values] : by_id) {
        if (values.size() < kMinTicks) {
            result.warnings.push_back("series '" + id + "' spans " +
                                      std::to_string(values.size()) +
                                      " ticks (< 12), skipped");
            continue;
        }
        result.corpus.series.emplace_back(id, granularity, std::move(values));
    }
    return result;
}

} // namespace

const TimeSeries* Corpus::find(const std::string& meme_id) const {
    auto it = std::lower_bound(series.begin(), series.end(), meme_id,
                               [](const TimeSeries& s, const std::string& id) {
                                   return s.meme_id() < id;
                               });
    if (it != series.end() && it->meme_id() == meme_id) return &*it;
    // loaders keep corpora sorted; fall back to a scan for hand-built ones
    for (const TimeSeries& s : series)
        if (s.meme_id() == meme_id) return &s;
    return nullptr;
}

LoadResult load_corpus(const std::filesystem::path& path, Granularity granularity) {
    LoadResult result = path.extension() == ".json"
                            ? load_corpus_json(path, granularity)
                            : load_corpus_csv(path, granularity);
    std::sort(result.corpus.series.begin(), result.corpus.series.end(),
              [](const TimeSeries& a, const TimeSeries& b) {
                  return a.meme_id() < b.meme_id();
              });
    return result;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write corpus file '" + path.string() + "'");
    out << "meme_id,t,value\n";
    std::vector<const TimeSeries*> ordered;
    ordered.reserve(corpus.series.size());
    for (const TimeSeries& s : corpus.series) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const TimeSeries* a, const TimeSeries* b) {
                  return a->meme_id() < b->meme_id();
              });
    for (const TimeSeries* s : ordered) {
        for (int t = 0; t <= s->last_tick(); ++t)
            out << s->meme_id() << ',' << t << ',' << format_exact((*s)[t]) << '\n';
    }
    if (!out) throw ParseError("write failed for corpus file '" + path.string() + "'");
}

} // namespace sbmeme
