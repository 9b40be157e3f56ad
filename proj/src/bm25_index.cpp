#include "lexcase/bm25_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"

namespace lexcase::bm25 {

void Params::validate() const {
  if (!(k1 >= 0.0)) throw Error(ErrorCode::invalid_config, "bm25 k1 must be >= 0");
  if (!(b >= 0.0 && b <= 1.0)) throw Error(ErrorCode::invalid_config, "bm25 b must lie in [0, 1]");
}

std::size_t InvertedIndex::df(const std::string& term) const {
  auto it = postings.find(term);
  return it == postings.end() ? 0 : it->second.size();
}

std::uint32_t InvertedIndex::tf(const std::string& term, const DocId& doc_id) const {
  auto it = postings.find(term);
  if (it == postings.end()) return 0;
  const auto& list = it->second;
  auto pos = std::lower_bound(list.begin(), list.end(), doc_id,
                              [](const Posting& p, const DocId& id) { return p.doc_id < id; });
  return pos != list.end() && pos->doc_id == doc_id ? pos->tf : 0;
}

InvertedIndex build_index(std::span<const Document> docs) {
  if (docs.empty()) throw Error(ErrorCode::empty_corpus, "cannot index an empty document list");
  InvertedIndex index;
  for (const auto& doc : docs) {
    if (!index.doc_len.emplace(doc.id, doc.tokens.size()).second) {
      throw Error(ErrorCode::duplicate_id, "document id " + doc.id + " appears twice");
    }
    std::map<std::string, std::uint32_t> counts;
    for (const auto& t : doc.tokens) ++counts[t];
    for (const auto& [term, count] : counts) index.postings[term].push_back(Posting{doc.id, count});
  }
  for (auto& [term, list] : index.postings) {
    std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
  }
  index.num_docs = index.doc_len.size();
  double total = 0.0;
  for (const auto& [id, len] : index.doc_len) total += static_cast<double>(len);
  index.avgdl = total / static_cast<double>(index.num_docs);
  return index;
}

double idf(const InvertedIndex& index, const std::string& term) {
  const double n = static_cast<double>(index.num_docs);
  const double df = static_cast<double>(index.df(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double term_weight(double idf_value, double tf, double doc_len, double avgdl, const Params& params) {
  if (tf <= 0.0) return 0.0;
  // avgdl > 0 whenever some document holds the term.
  const double norm = 1.0 - params.b + params.b * doc_len / avgdl;
  return idf_value * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
}

double score(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
             const DocId& doc_id) {
  auto len_it = index.doc_len.find(doc_id);
  if (len_it == index.doc_len.end()) throw Error(ErrorCode::missing_document, "document " + doc_id + " is not indexed");
  const double len = static_cast<double>(len_it->second);
  double total = 0.0;
  for (const auto& q : query_tokens) {
    const auto tf = index.tf(q, doc_id);
    if (tf == 0) continue;
    total += term_weight(idf(index, q), tf, len, index.avgdl, params);
  }
  return total;
}

double score_external(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
                      std::span<const std::string> doc_tokens) {
  std::unordered_map<std::string, std::uint32_t> counts;
  for (const auto& t : doc_tokens) ++counts[t];
  const double len = static_cast<double>(doc_tokens.size());
  // An external document may be longer than an empty corpus average.
  const double avgdl = index.avgdl > 0.0 ? index.avgdl : std::max(len, 1.0);
  double total = 0.0;
  for (const auto& q : query_tokens) {
    auto it = counts.find(q);
    if (it == counts.end()) continue;
    total += term_weight(idf(index, q), it->second, len, avgdl, params);
  }
  return total;
}

ScoredList rank(const InvertedIndex& index, const Params& params, std::span<const std::string> query_tokens,
                std::span<const DocId> candidate_ids, const std::string& query_id) {
  ScoredList list;
  list.query_id = query_id;
  list.entries.reserve(candidate_ids.size());
  for (const auto& id : candidate_ids) list.entries.push_back(ScoredEntry{id, score(index, params, query_tokens, id)});
  list.sort();
  return list;
}

void to_json(nlohmann::json& j, const InvertedIndex& index) {
  nlohmann::json postings = nlohmann::json::object();
  for (const auto& [term, list] : index.postings) {
    auto arr = nlohmann::json::array();
    for (const auto& p : list) arr.push_back({p.doc_id, p.tf});
    postings[term] = std::move(arr);
  }
  j = nlohmann::json{{"num_docs", index.num_docs},
                     {"avgdl", index.avgdl},
                     {"doc_len", index.doc_len},
                     {"postings", std::move(postings)}};
}

void from_json(const nlohmann::json& j, InvertedIndex& index) {
  index = InvertedIndex{};
  index.num_docs = j.at("num_docs").get<std::size_t>();
  index.avgdl = j.at("avgdl").get<double>();
  index.doc_len = j.at("doc_len").get<std::map<DocId, std::size_t>>();
  for (const auto& [term, arr] : j.at("postings").items()) {
    auto& list = index.postings[term];
    for (const auto& p : arr) list.push_back(Posting{p.at(0).get<std::string>(), p.at(1).get<std::uint32_t>()});
  }
  if (index.num_docs != index.doc_len.size()) throw Error(ErrorCode::parse, "bm25 index: num_docs mismatch");
}

}  // namespace lexcase::bm25
