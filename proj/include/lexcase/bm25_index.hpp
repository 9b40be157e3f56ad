#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lexcase/corpus_io.hpp"
#include "lexcase/scored_list.hpp"

namespace lexcase::bm25 {

struct Posting {
  DocId doc_id;
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const;
};

/// Term-sorted postings over one candidate pool plus the corpus statistics
/// BM25 needs. Postings lists are sorted by doc id.
struct InvertedIndex {
  std::map<std::string, std::vector<Posting>> postings;
  std::map<DocId, std::size_t> doc_len;
  std::size_t num_docs = 0;
  double avgdl = 0.0;

  std::size_t df(const std::string& term) const;
  /// Frequency of `term` in `doc_id`, 0 when absent.
  std::uint32_t tf(const std::string& term, const DocId& doc_id) const;
  bool contains(const DocId& doc_id) const { return doc_len.contains(doc_id); }

  friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;
};

/// Throws empty_corpus for an empty list and duplicate_id for repeated ids.
/// Documents with no tokens are allowed.
InvertedIndex build_index(std::span<const Document> docs);

/// ln(1 + (N - df + 0.5) / (df + 0.5)); strictly positive.
double idf(const InvertedIndex& index, const std::string& term);

/// Contribution of a single query-token instance given its frequency in a
/// document of length `doc_len`.
double term_weight(double idf_value, double tf, double doc_len, double avgdl, const Params& params);

/// Sum over query-token instances. Throws missing_document for unknown ids.
double score(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
             const DocId& doc_id);

/// Scores a token stream that is not part of the index, using the index's
/// N, df and avgdl.
double score_external(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
                      std::span<const std::string> doc_tokens);

ScoredList rank(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
                std::span<const DocId> candidate_ids, const std::string& query_id = {});

void to_json(nlohmann::json& j, const InvertedIndex& index);
void from_json(const nlohmann::json& j, InvertedIndex& index);

}  // namespace lexcase::bm25
