#pragma once

#include "sbmeme/core_types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sbmeme {

/// A set of series with unique meme ids, sorted by meme id.
struct Corpus {
    std::vector<TimeSeries> series;
    std::string source_label;

    const TimeSeries* find(const std::string& meme_id) const;
};

struct LoadResult {
    Corpus corpus;
    std::vector<std::string> warnings;
};

/// Loads a corpus from CSV (`meme_id,t,value` header) or, for a .json path,
/// from an array of {"meme_id": ..., "values": [...]}. Ticks are re-indexed
/// to start at 0 and gaps are zero-filled. Series spanning fewer than 12
/// ticks are skipped with a warning. Malformed rows, negative values and
/// duplicate (meme_id, t) keys raise ParseError naming the line.
LoadResult load_corpus(const std::filesystem::path& path, Granularity granularity);

/// Canonical CSV form of a corpus; values keep full round-trip precision so
/// load(save(load(x))) == load(x).
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

} // namespace sbmeme
