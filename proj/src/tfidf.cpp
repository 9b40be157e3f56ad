#include "lexcase/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"

namespace lexcase::tfidf {

namespace {

void normalize(SparseVector& v) {
  const double n = norm(v);
  if (n == 0.0) {
    v.clear();
    return;
  }
  for (auto& [col, w] : v) w /= n;
}

SparseVector weigh(const TfidfModel& model, std::span<const std::string> tokens) {
  std::map<std::size_t, double> counts;
  for (const auto& t : tokens) {
    if (auto it = model.vocab.find(t); it != model.vocab.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  v.reserve(counts.size());
  for (const auto& [col, tf] : counts) v.emplace_back(col, tf * model.idf[col]);
  normalize(v);
  return v;
}

}  // namespace

TfidfModel fit(std::span<const Document> docs) {
  if (docs.empty()) throw Error(ErrorCode::empty_corpus, "cannot fit tf-idf on an empty document list");
  std::map<std::string, std::size_t> df;
  std::set<DocId> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw Error(ErrorCode::duplicate_id, "document id " + d.id + " appears twice");
    for (const auto& t : std::set<std::string>(d.tokens.begin(), d.tokens.end())) ++df[t];
  }
  TfidfModel model;
  const double n = static_cast<double>(docs.size());
  model.idf.reserve(df.size());
  for (const auto& [term, count] : df) {
    model.vocab.emplace(term, model.idf.size());
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  for (const auto& d : docs) model.doc_vectors.emplace(d.id, weigh(model, d.tokens));
  return model;
}

SparseVector transform(const TfidfModel& model, std::span<const std::string> tokens) { return weigh(model, tokens); }

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

double norm(const SparseVector& v) {
  double s = 0.0;
  for (const auto& [col, w] : v) s += w * w;
  return std::sqrt(s);
}

double cosine(const SparseVector& a, const SparseVector& b) { return std::clamp(dot(a, b), 0.0, 1.0); }

ScoredList rank_cosine(const TfidfModel& model, std::span<const std::string> query_tokens,
                       std::span<const DocId> candidate_ids, const std::string& query_id) {
  const auto q = transform(model, query_tokens);
  ScoredList list;
  list.query_id = query_id;
  list.entries.reserve(candidate_ids.size());
  for (const auto& id : candidate_ids) {
    auto it = model.doc_vectors.find(id);
    if (it == model.doc_vectors.end()) throw Error(ErrorCode::missing_document, "document " + id + " is not in the tf-idf model");
    list.entries.push_back(ScoredEntry{id, cosine(q, it->second)});
  }
  list.sort();
  return list;
}

void to_json(nlohmann::json& j, const TfidfModel& model) {
  std::vector<std::string> terms(model.vocab.size());
  for (const auto& [term, col] : model.vocab) terms[col] = term;
  nlohmann::json docs = nlohmann::json::object();
  for (const auto& [id, vec] : model.doc_vectors) docs[id] = vec;
  j = nlohmann::json{{"terms", terms}, {"idf", model.idf}, {"docs", std::move(docs)}};
}

void from_json(const nlohmann::json& j, TfidfModel& model) {
  model = TfidfModel{};
  const auto terms = j.at("terms").get<std::vector<std::string>>();
  model.idf = j.at("idf").get<std::vector<double>>();
  if (terms.size() != model.idf.size()) throw Error(ErrorCode::parse, "tf-idf model: terms/idf length mismatch");
  for (std::size_t i = 0; i < terms.size(); ++i) model.vocab.emplace(terms[i], i);
  for (const auto& [id, vec] : j.at("docs").items()) model.doc_vectors.emplace(id, vec.get<SparseVector>());
}

}  // namespace lexcase::tfidf
