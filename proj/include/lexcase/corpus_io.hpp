#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lexcase {

using DocId = std::string;

/// A unit of text: a case, a candidate, a statute article, a paragraph or
/// one side of an entailment pair. `tokens` stays empty until textprep runs.
struct Document {
  DocId id;
  std::string text;
  std::vector<std::string> tokens;

  friend bool operator==(const Document&, const Document&) = default;
};

struct QueryCase {
  DocId id;
  Document base;
  std::vector<Document> candidates;
  std::optional<std::set<DocId>> gold;

  friend bool operator==(const QueryCase&, const QueryCase&) = default;
};

struct EntailPair {
  DocId id;
  Document t1;
  Document t2;
  std::optional<bool> label;

  friend bool operator==(const EntailPair&, const EntailPair&) = default;
};

namespace corpus {

/// Reads `<root>/<query-id>/{base.txt, candidates/<id>.txt, gold.json}`.
/// Queries and candidates come back sorted by id. A query directory without
/// a `candidates/` subdirectory is accepted (statute-style queries whose
/// pool is a shared article collection); its gold ids are then checked by
/// the caller against that pool instead.
std::vector<QueryCase> load_case_queries(const std::filesystem::path& root);

/// Gold sets only, keyed by query id. Query directories without gold.json
/// are omitted.
std::map<DocId, std::set<DocId>> load_gold(const std::filesystem::path& root);

/// JSON-lines `{"id": ..., "text": ...}`, file order preserved.
std::vector<Document> load_articles(const std::filesystem::path& path);

/// XML with `<pair id=".." label="Y|N"><t1>..</t1><t2>..</t2></pair>` children
/// under any root element.
std::vector<EntailPair> load_pairs(const std::filesystem::path& path);

void write_case_queries(const std::filesystem::path& root, const std::vector<QueryCase>& queries);
void write_articles(const std::filesystem::path& path, const std::vector<Document>& docs);
void write_pairs(const std::filesystem::path& path, const std::vector<EntailPair>& pairs);

/// Whole file as a string; throws on unreadable files or invalid UTF-8.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace corpus
}  // namespace lexcase
