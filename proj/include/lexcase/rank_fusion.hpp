#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexcase/bm25_index.hpp"
#include "lexcase/corpus_io.hpp"
#include "lexcase/pvdm_embed.hpp"
#include "lexcase/scored_list.hpp"
#include "lexcase/textprep.hpp"
#include "lexcase/tfidf.hpp"

namespace lexcase::fusion {

enum class SelectionMode { top_k_relative, argmax, top_n };

struct SelectionRule {
  SelectionMode mode = SelectionMode::top_k_relative;
  std::size_t max_k = 10;
  double rel_frac = 0.9;
  std::size_t n = 100;  // top_n only

  void validate() const;

  static SelectionRule top_k_relative(double rel_frac, std::size_t max_k = 10);
  static SelectionRule argmax();
  static SelectionRule top_n(std::size_t n);
};

/// Min-max rescales the list into [0, 1] when it holds a negative score and
/// returns it unchanged otherwise. A constant negative list maps to all 1.
ScoredList shift_nonnegative(ScoredList list);

/// Per-document product of the two (shifted) lists, re-sorted. Both lists
/// must cover the same ids; otherwise fusion_mismatch.
ScoredList fuse_multiply(const ScoredList& a, const ScoredList& b);

/// top_k_relative: ids whose score is strictly above
/// rel_frac * mean(top two scores) (just the top score when there is one
/// candidate), in list order, at most max_k.
/// argmax: the first id; empty_selection on an empty list.
/// top_n: the first min(n, size) ids.
std::vector<DocId> select(const ScoredList& list, const SelectionRule& rule);

enum class Variant { d2v, bm25, docbm, tfidf };
enum class Task { t1, t2, t3 };

Variant parse_variant(std::string_view name);
Task parse_task(std::string_view name);
std::string_view to_string(Variant v);
std::string_view to_string(Task t);

/// Selection used when none is given: T1 relative 0.9 (0.8 for fused
/// scores), T2 argmax, T3 argmax or top-100 for the long-list runs.
SelectionRule default_rule(Variant variant, Task task, bool long_list);

/// Queries with their own candidate pools (tasks 1 and 2), or queries that
/// all share one pool such as the statute articles (task 3).
struct RetrievalCorpus {
  std::vector<QueryCase> queries;
  std::vector<Document> shared_pool;

  bool uses_shared_pool() const { return !shared_pool.empty(); }
  const std::vector<Document>& pool_of(const QueryCase& q) const {
    return uses_shared_pool() ? shared_pool : q.candidates;
  }
  /// Gold ids must lie in the query's pool (gold_mismatch otherwise).
  void validate() const;
};

inline constexpr std::string_view kSharedPoolId = "*";

/// Per-pool lexical indexes.
struct PoolIndex {
  bm25::InvertedIndex bm25;
  tfidf::TfidfModel tfidf;

  friend bool operator==(const PoolIndex&, const PoolIndex&) = default;
};
using IndexStore = std::map<std::string, PoolIndex>;

/// Keyed by query id, or kSharedPoolId for a shared pool.
IndexStore build_pool_indexes(const RetrievalCorpus& corpus, const textprep::PrepConfig& lexical_prep);

/// Training keys used for paragraph vectors: "q:<query>" for a query text,
/// "c:<query>/<candidate>" for a pooled candidate, "a:<id>" for a shared
/// pool document.
std::string query_key(const QueryCase& q);
std::string candidate_key(const RetrievalCorpus& corpus, const QueryCase& q, const Document& cand);

/// Every query and pool document of the corpus, keyed as above and
/// preprocessed with `embed_prep`; the input to embedding training.
std::vector<Document> embedding_corpus(const RetrievalCorpus& corpus, const textprep::PrepConfig& embed_prep);

struct VariantConfig {
  textprep::PrepConfig embed_prep;    // stage1 by default
  textprep::PrepConfig lexical_prep;  // stage2 by default
  bm25::Params bm25;
  int infer_steps = 50;
  bool long_list = false;
  std::optional<SelectionRule> rule;  // overrides default_rule
};

struct Resources {
  const embed::EmbeddingModel* embedding = nullptr;
  const IndexStore* indexes = nullptr;  // built on demand when null
};

struct QueryResult {
  ScoredList scores;
  std::vector<DocId> selected;
};

/// Runs one model variant over every query, in query-id order. d2v scores
/// use embed_prep tokens, bm25/tfidf lexical_prep tokens; docbm multiplies
/// d2v and bm25. Throws configuration when the variant needs an embedding model
/// and none is supplied.
std::map<std::string, QueryResult> run_variant(Variant variant, Task task, const RetrievalCorpus& corpus,
                                               const VariantConfig& cfg, const Resources& resources,
                                               std::vector<std::string>* warnings = nullptr);

}  // namespace lexcase::fusion
