#include "lexcase/scored_list.hpp"

#include <algorithm>
#include <set>

namespace lexcase {

bool ranks_before(const ScoredEntry& a, const ScoredEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

void ScoredList::sort() { std::sort(entries.begin(), entries.end(), ranks_before); }

bool ScoredList::is_ordered() const {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (ranks_before(entries[i], entries[i - 1])) return false;
  }
  return true;
}

bool ScoredList::has_unique_ids() const {
  std::set<DocId> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.doc_id).second) return false;
  }
  return true;
}

std::vector<DocId> ScoredList::ids() const {
  std::vector<DocId> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.doc_id);
  return out;
}

}  // namespace lexcase
