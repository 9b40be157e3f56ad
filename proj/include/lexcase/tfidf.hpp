#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lexcase/corpus_io.hpp"
#include "lexcase/scored_list.hpp"

namespace lexcase::tfidf {

/// (column, weight) pairs sorted by column.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

/// Raw-count tf times smoothed idf ln((1+N)/(1+df)) + 1, rows L2-normalized.
struct TfidfModel {
  std::map<std::string, std::size_t> vocab;  // columns assigned in term order
  std::vector<double> idf;
  std::map<DocId, SparseVector> doc_vectors;

  friend bool operator==(const TfidfModel&, const TfidfModel&) = default;
};

TfidfModel fit(std::span<const Document> docs);

/// Out-of-vocabulary tokens are ignored; an empty support yields {}.
SparseVector transform(const TfidfModel& model, std::span<const std::string> tokens);

double dot(const SparseVector& a, const SparseVector& b);
double norm(const SparseVector& v);

/// Dot product of two unit vectors, clamped into [0, 1].
double cosine(const SparseVector& a, const SparseVector& b);

ScoredList rank_cosine(const TfidfModel& model, std::span<const std::string> query_tokens,
                       std::span<const DocId> candidate_ids, const std::string& query_id = {});

void to_json(nlohmann::json& j, const TfidfModel& model);
void from_json(const nlohmann::json& j, TfidfModel& model);

}  // namespace lexcase::tfidf
