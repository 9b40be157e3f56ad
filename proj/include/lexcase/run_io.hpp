#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lexcase/corpus_io.hpp"
#include "lexcase/scored_list.hpp"

namespace lexcase::run_io {

using Run = std::map<std::string, std::vector<DocId>>;

/// JSON-lines `{"query": id, "retrieved": [ids...]}`, one line per query in
/// id order. Retrieval order is rank order.
void write_run(const std::filesystem::path& path, const Run& run);
Run read_run(const std::filesystem::path& path);

/// JSON-lines `{"query": id, "entries": [{"id": .., "score": ..}, ...]}`.
void write_scores(const std::filesystem::path& path, const std::vector<ScoredList>& lists);
std::vector<ScoredList> read_scores(const std::filesystem::path& path);

/// JSON-lines `{"id": .., "label": "Y"|"N"}` (extra fields are ignored on read).
void write_predictions(const std::filesystem::path& path, const std::map<std::string, bool>& labels,
                       const std::map<std::string, double>& probabilities = {});
std::map<std::string, bool> read_predictions(const std::filesystem::path& path);

}  // namespace lexcase::run_io
