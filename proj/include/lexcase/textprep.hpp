#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lexcase/corpus_io.hpp"
#include "lexcase/stemmer.hpp"

namespace lexcase::textprep {

enum class Stage { stage1, stage2 };

Stage parse_stage(std::string_view name);
std::string_view to_string(Stage stage);

struct PrepConfig {
  Stage stage = Stage::stage1;
  std::unordered_set<std::string> stopwords;
  std::size_t min_token_len = 3;
  std::shared_ptr<const Stemmer> stemmer;

  /// Throws invalid_config: min_token_len < 1, a stopword with uppercase
  /// ASCII, or stage2 without a stemmer.
  void validate() const;

  /// Loads stopwords.txt and stemmer_rules.tsv from `data_dir`.
  static PrepConfig load(Stage stage, const std::filesystem::path& data_dir);
};

/// Data directory resolution: explicit path if nonempty, else
/// $LEXCASE_DATA_DIR, else the directory baked in at build time.
std::filesystem::path resolve_data_dir(const std::filesystem::path& explicit_dir = {});

/// One lowercase word per line; blank lines and `#` comments skipped.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

/// Lowercased maximal runs of alphanumeric characters. ASCII letters and
/// digits count, as do Latin-1/Latin Extended-A/B letters (U+00C0..U+024F
/// minus the multiplication and division signs); everything else separates.
std::vector<std::string> tokenize(std::string_view text);

/// Drops `[N]`, `N.` or `(N)` at the start of a line (after optional
/// indentation) when followed by whitespace or the end of the line, together
/// with the whitespace that follows on the same line.
std::string strip_paragraph_numbers(std::string_view text);

/// Stage1: strip_paragraph_numbers then tokenize.
/// Stage2: Stage1, then drop short tokens, all-digit tokens and stopwords,
/// then stem. The same three filters run again on the stems so that
/// re-preprocessing the output is a no-op.
std::vector<std::string> preprocess_text(std::string_view text, const PrepConfig& cfg);

Document preprocess(Document doc, const PrepConfig& cfg);

void preprocess_all(std::vector<Document>& docs, const PrepConfig& cfg);

}  // namespace lexcase::textprep
