#include "lexcase/rank_fusion.hpp"

#include <algorithm>
#include <set>

#include "lexcase/error.hpp"

namespace lexcase::fusion {

void SelectionRule::validate() const {
  if (max_k < 1) throw Error(ErrorCode::invalid_config, "selection max_k must be >= 1");
  if (!(rel_frac > 0.0 && rel_frac <= 1.0)) throw Error(ErrorCode::invalid_config, "rel_frac must lie in (0, 1]");
  if (mode == SelectionMode::top_n && n < 1) throw Error(ErrorCode::invalid_config, "top-n needs n >= 1");
}

SelectionRule SelectionRule::top_k_relative(double rel_frac, std::size_t max_k) {
  return SelectionRule{SelectionMode::top_k_relative, max_k, rel_frac, 100};
}

SelectionRule SelectionRule::argmax() { return SelectionRule{SelectionMode::argmax, 1, 1.0, 1}; }

SelectionRule SelectionRule::top_n(std::size_t n) { return SelectionRule{SelectionMode::top_n, 10, 1.0, n}; }

ScoredList shift_nonnegative(ScoredList list) {
  if (list.entries.empty()) return list;
  const auto [lo, hi] = std::minmax_element(list.entries.begin(), list.entries.end(),
                                            [](const ScoredEntry& a, const ScoredEntry& b) { return a.score < b.score; });
  const double min = lo->score;
  const double max = hi->score;
  if (min >= 0.0) return list;
  const double range = max - min;
  for (auto& e : list.entries) e.score = range > 0.0 ? (e.score - min) / range : 1.0;
  list.sort();
  return list;
}

ScoredList fuse_multiply(const ScoredList& a, const ScoredList& b) {
  const auto sa = shift_nonnegative(a);
  const auto sb = shift_nonnegative(b);
  std::map<DocId, double> other;
  for (const auto& e : sb.entries) other.emplace(e.doc_id, e.score);
  if (other.size() != sb.entries.size() || sa.entries.size() != sb.entries.size()) {
    throw Error(ErrorCode::fusion_mismatch, "query " + a.query_id + ": score lists cover different documents");
  }
  ScoredList fused;
  fused.query_id = a.query_id;
  fused.entries.reserve(sa.entries.size());
  for (const auto& e : sa.entries) {
    auto it = other.find(e.doc_id);
    if (it == other.end()) {
      throw Error(ErrorCode::fusion_mismatch, "query " + a.query_id + ": document " + e.doc_id + " missing from one list");
    }
    fused.entries.push_back(ScoredEntry{e.doc_id, e.score * it->second});
  }
  fused.sort();
  return fused;
}

std::vector<DocId> select(const ScoredList& list, const SelectionRule& rule) {
  rule.validate();
  std::vector<DocId> out;
  const auto& entries = list.entries;
  switch (rule.mode) {
    case SelectionMode::argmax:
      if (entries.empty()) throw Error(ErrorCode::empty_selection, "query " + list.query_id + ": nothing to select from");
      out.push_back(entries.front().doc_id);
      break;
    case SelectionMode::top_n:
      for (std::size_t i = 0; i < entries.size() && i < rule.n; ++i) out.push_back(entries[i].doc_id);
      break;
    case SelectionMode::top_k_relative: {
      if (entries.empty()) break;
      const double top = entries.size() == 1 ? entries[0].score : (entries[0].score + entries[1].score) / 2.0;
      const double threshold = rule.rel_frac * top;
      for (const auto& e : entries) {
        if (out.size() >= rule.max_k) break;
        if (e.score > threshold) out.push_back(e.doc_id);
      }
      break;
    }
  }
  return out;
}

Variant parse_variant(std::string_view name) {
  if (name == "d2v") return Variant::d2v;
  if (name == "bm25") return Variant::bm25;
  if (name == "docbm") return Variant::docbm;
  if (name == "tfidf") return Variant::tfidf;
  throw Error(ErrorCode::invalid_config, "unknown variant '" + std::string(name) + "'");
}

Task parse_task(std::string_view name) {
  if (name == "t1") return Task::t1;
  if (name == "t2") return Task::t2;
  if (name == "t3") return Task::t3;
  throw Error(ErrorCode::invalid_config, "unknown task '" + std::string(name) + "'");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::d2v: return "d2v";
    case Variant::bm25: return "bm25";
    case Variant::docbm: return "docbm";
    case Variant::tfidf: return "tfidf";
  }
  return "?";
}

std::string_view to_string(Task t) {
  switch (t) {
    case Task::t1: return "t1";
    case Task::t2: return "t2";
    case Task::t3: return "t3";
  }
  return "?";
}

SelectionRule default_rule(Variant variant, Task task, bool long_list) {
  switch (task) {
    case Task::t1:
      return SelectionRule::top_k_relative(variant == Variant::docbm ? 0.8 : 0.9);
    case Task::t2:
      return SelectionRule::argmax();
    case Task::t3:
      return long_list ? SelectionRule::top_n(100) : SelectionRule::argmax();
  }
  return SelectionRule::argmax();
}

void RetrievalCorpus::validate() const {
  std::set<std::string> qids;
  for (const auto& q : queries) {
    if (!qids.insert(q.id).second) throw Error(ErrorCode::duplicate_id, "query id " + q.id + " appears twice");
    if (!q.gold) continue;
    const auto& pool = pool_of(q);
    for (const auto& g : *q.gold) {
      const bool found = std::any_of(pool.begin(), pool.end(), [&](const Document& d) { return d.id == g; });
      if (!found) throw Error(ErrorCode::gold_mismatch, "query " + q.id + ": gold id " + g + " is not in its pool");
    }
  }
}

namespace {

std::vector<Document> prepared(const std::vector<Document>& docs, const textprep::PrepConfig& cfg) {
  std::vector<Document> out = docs;
  textprep::preprocess_all(out, cfg);
  return out;
}

}  // namespace

IndexStore build_pool_indexes(const RetrievalCorpus& corpus, const textprep::PrepConfig& lexical_prep) {
  IndexStore store;
  auto add = [&](const std::string& key, const std::vector<Document>& pool) {
    const auto docs = prepared(pool, lexical_prep);
    store.emplace(key, PoolIndex{bm25::build_index(docs), tfidf::fit(docs)});
  };
  if (corpus.uses_shared_pool()) {
    add(std::string(kSharedPoolId), corpus.shared_pool);
  } else {
    for (const auto& q : corpus.queries) add(q.id, q.candidates);
  }
  return store;
}

std::string query_key(const QueryCase& q) { return "q:" + q.id; }

std::string candidate_key(const RetrievalCorpus& corpus, const QueryCase& q, const Document& cand) {
  return corpus.uses_shared_pool() ? "a:" + cand.id : "c:" + q.id + "/" + cand.id;
}

std::vector<Document> embedding_corpus(const RetrievalCorpus& corpus, const textprep::PrepConfig& embed_prep) {
  std::vector<Document> docs;
  for (const auto& q : corpus.queries) {
    docs.push_back(Document{query_key(q), q.base.text, {}});
    if (!corpus.uses_shared_pool()) {
      for (const auto& c : q.candidates) docs.push_back(Document{candidate_key(corpus, q, c), c.text, {}});
    }
  }
  if (corpus.uses_shared_pool()) {
    for (const auto& c : corpus.shared_pool) docs.push_back(Document{"a:" + c.id, c.text, {}});
  }
  textprep::preprocess_all(docs, embed_prep);
  return docs;
}

std::map<std::string, QueryResult> run_variant(Variant variant, Task task, const RetrievalCorpus& corpus,
                                               const VariantConfig& cfg, const Resources& resources,
                                               std::vector<std::string>* warnings) {
  const bool needs_embedding = variant == Variant::d2v || variant == Variant::docbm;
  const bool needs_lexical = variant != Variant::d2v;
  if (needs_embedding && !resources.embedding) {
    throw Error(ErrorCode::configuration,
                "variant " + std::string(to_string(variant)) + " needs a trained embedding model (train-embed)");
  }
  corpus.validate();
  cfg.bm25.validate();
  const SelectionRule rule = cfg.rule.value_or(default_rule(variant, task, cfg.long_list));
  rule.validate();

  IndexStore built;
  const IndexStore* indexes = resources.indexes;
  if (needs_lexical && !indexes) {
    built = build_pool_indexes(corpus, cfg.lexical_prep);
    indexes = &built;
  }

  std::vector<const QueryCase*> order;
  for (const auto& q : corpus.queries) order.push_back(&q);
  std::sort(order.begin(), order.end(), [](const QueryCase* a, const QueryCase* b) { return a->id < b->id; });

  std::map<std::string, QueryResult> results;
  for (const QueryCase* q : order) {
    const auto& pool = corpus.pool_of(*q);
    std::vector<DocId> ids;
    ids.reserve(pool.size());
    for (const auto& d : pool) ids.push_back(d.id);

    std::optional<ScoredList> lexical;
    if (needs_lexical) {
      const std::string pool_key = corpus.uses_shared_pool() ? std::string(kSharedPoolId) : q->id;
      auto it = indexes->find(pool_key);
      if (it == indexes->end()) {
        throw Error(ErrorCode::configuration, "index store has no pool for query " + q->id);
      }
      const auto query_tokens = textprep::preprocess_text(q->base.text, cfg.lexical_prep);
      if (variant == Variant::tfidf) {
        lexical = tfidf::rank_cosine(it->second.tfidf, query_tokens, ids, q->id);
      } else {
        lexical = bm25::rank(it->second.bm25, cfg.bm25, query_tokens, ids, q->id);
      }
    }

    std::optional<ScoredList> semantic;
    if (needs_embedding) {
      std::vector<Document> keyed;
      keyed.reserve(pool.size());
      std::map<std::string, DocId> back;
      for (const auto& d : pool) {
        auto key = candidate_key(corpus, *q, d);
        back.emplace(key, d.id);
        keyed.push_back(Document{key, {}, {}});
        if (!resources.embedding->doc_vectors.contains(key)) {
          keyed.back().tokens = textprep::preprocess_text(d.text, cfg.embed_prep);
        }
      }
      const auto query_tokens = textprep::preprocess_text(q->base.text, cfg.embed_prep);
      auto list = embed::rank_embed(*resources.embedding, query_tokens, keyed, cfg.infer_steps, q->id, warnings);
      for (auto& e : list.entries) e.doc_id = back.at(e.doc_id);
      list.sort();
      semantic = std::move(list);
    }

    QueryResult r;
    switch (variant) {
      case Variant::d2v: r.scores = std::move(*semantic); break;
      case Variant::bm25:
      case Variant::tfidf: r.scores = std::move(*lexical); break;
      case Variant::docbm: r.scores = fuse_multiply(*semantic, *lexical); break;
    }
    if (!r.scores.entries.empty() || rule.mode != SelectionMode::argmax) r.selected = select(r.scores, rule);
    results.emplace(q->id, std::move(r));
  }
  return results;
}

}  // namespace lexcase::fusion
