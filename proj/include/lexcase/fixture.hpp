#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lexcase/corpus_io.hpp"

namespace lexcase::fixture {

/// Synthetic case-law corpus. Each query's gold candidates share a block of
/// query-specific rare words with the base case; everything else is drawn
/// from a common background vocabulary. Fully determined by the seed.
struct CaseOptions {
  std::size_t queries = 5;
  std::size_t candidates = 20;
  std::uint64_t seed = 3;
  std::size_t max_gold = 4;
};

std::vector<QueryCase> generate_cases(const CaseOptions& options);

/// Statute-style corpus: one shared article pool plus queries whose gold
/// articles carry the query's rare block.
struct StatuteOptions {
  std::size_t queries = 20;
  std::size_t articles = 120;
  std::uint64_t seed = 3;
};

struct StatuteCorpus {
  std::vector<Document> articles;
  std::vector<QueryCase> queries;  // no candidates; gold ids refer to articles
};

StatuteCorpus generate_statute(const StatuteOptions& options);

/// Labeled entailment pairs over a generated article collection: "Y" pairs
/// restate part of t1, "N" pairs negate it or draw from another article.
struct EntailOptions {
  std::size_t pairs = 60;
  std::size_t articles = 30;
  std::uint64_t seed = 3;
};

struct EntailCorpus {
  std::vector<Document> articles;
  std::vector<EntailPair> pairs;
};

EntailCorpus generate_entail(const EntailOptions& options);

/// Layouts: cases -> `<out>/<query>/...`; statute -> `<out>/articles.jsonl`
/// and `<out>/queries/<query>/...`; entail -> `<out>/articles.jsonl` and
/// `<out>/pairs.xml`.
void write_cases(const std::filesystem::path& out, const std::vector<QueryCase>& queries);
void write_statute(const std::filesystem::path& out, const StatuteCorpus& corpus);
void write_entail(const std::filesystem::path& out, const EntailCorpus& corpus);

}  // namespace lexcase::fixture
