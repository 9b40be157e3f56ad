#pragma once

#include <string>
#include <vector>

#include "lexcase/corpus_io.hpp"

namespace lexcase {

struct ScoredEntry {
  DocId doc_id;
  double score = 0.0;

  friend bool operator==(const ScoredEntry&, const ScoredEntry&) = default;
};

/// Per-query candidates ordered by descending score, ascending id on ties.
struct ScoredList {
  std::string query_id;
  std::vector<ScoredEntry> entries;

  /// Restores the ordering invariant.
  void sort();
  bool is_ordered() const;
  bool has_unique_ids() const;
  std::vector<DocId> ids() const;

  friend bool operator==(const ScoredList&, const ScoredList&) = default;
};

/// Ranking order used everywhere: higher score first, then smaller id.
bool ranks_before(const ScoredEntry& a, const ScoredEntry& b);

}  // namespace lexcase
