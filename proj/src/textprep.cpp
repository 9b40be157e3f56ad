#include "lexcase/textprep.hpp"

#include <algorithm>
#include <cstdlib>

#include "lexcase/error.hpp"
#include "lexcase/utf8.hpp"

namespace lexcase::textprep {

Stage parse_stage(std::string_view name) {
  if (name == "stage1") return Stage::stage1;
  if (name == "stage2") return Stage::stage2;
  throw Error(ErrorCode::invalid_config, "unknown preprocessing stage '" + std::string(name) + "'");
}

std::string_view to_string(Stage stage) { return stage == Stage::stage1 ? "stage1" : "stage2"; }

void PrepConfig::validate() const {
  if (min_token_len < 1) throw Error(ErrorCode::invalid_config, "min_token_len must be >= 1");
  for (const auto& w : stopwords) {
    if (std::any_of(w.begin(), w.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
      throw Error(ErrorCode::invalid_config, "stopword '" + w + "' is not lowercase");
    }
  }
  if (stage == Stage::stage2 && !stemmer) throw Error(ErrorCode::invalid_config, "stage2 requires a stemmer");
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
  const auto content = corpus::read_text_file(path);
  std::unordered_set<std::string> words;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    start = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    words.insert(std::move(line));
  }
  return words;
}

PrepConfig PrepConfig::load(Stage stage, const std::filesystem::path& data_dir) {
  PrepConfig cfg;
  cfg.stage = stage;
  cfg.stopwords = load_word_list(data_dir / "stopwords.txt");
  cfg.stemmer = std::make_shared<const Stemmer>(Stemmer::from_file(data_dir / "stemmer_rules.tsv"));
  cfg.validate();
  return cfg;
}

std::filesystem::path resolve_data_dir(const std::filesystem::path& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("LEXCASE_DATA_DIR"); env && *env) return env;
  return LEXCASE_DEFAULT_DATA_DIR;
}

namespace {

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_digit); }

// Length of a paragraph marker at the start of `line`, 0 if none.
std::size_t marker_length(std::string_view line) {
  std::size_t i = 0;
  char close = 0;
  if (!line.empty() && (line[0] == '[' || line[0] == '(')) {
    close = line[0] == '[' ? ']' : ')';
    i = 1;
  }
  const std::size_t digits_start = i;
  while (i < line.size() && is_digit(line[i])) ++i;
  if (i == digits_start) return 0;
  const char expect = close ? close : '.';
  if (i >= line.size() || line[i] != expect) return 0;
  ++i;
  if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') return 0;
  return i;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode(text, pos);
    if (is_word_char(cp)) {
      utf8::append(current, to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::size_t char_count(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

std::string strip_paragraph_numbers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = text.size();
    std::string_view line = text.substr(start, end - start);

    std::size_t indent = 0;
    while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) ++indent;
    if (const std::size_t m = marker_length(line.substr(indent)); m > 0) {
      std::size_t cut = indent + m;
      while (cut < line.size() && (line[cut] == ' ' || line[cut] == '\t')) ++cut;
      line = line.substr(cut);
    }
    out.append(line);
    if (last) break;
    out.push_back('\n');
    start = end + 1;
  }
  return out;
}

std::vector<std::string> preprocess_text(std::string_view text, const PrepConfig& cfg) {
  auto tokens = tokenize(strip_paragraph_numbers(text));
  if (cfg.stage == Stage::stage1) return tokens;

  const auto keep = [&](const std::string& t) {
    return char_count(t) >= cfg.min_token_len && !all_digits(t) && !cfg.stopwords.contains(t);
  };
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    if (!keep(t)) continue;
    auto stemmed = cfg.stemmer->stem(t);
    if (keep(stemmed)) out.push_back(std::move(stemmed));
  }
  return out;
}

Document preprocess(Document doc, const PrepConfig& cfg) {
  cfg.validate();
  doc.tokens = preprocess_text(doc.text, cfg);
  return doc;
}

void preprocess_all(std::vector<Document>& docs, const PrepConfig& cfg) {
  cfg.validate();
  for (auto& d : docs) d.tokens = preprocess_text(d.text, cfg);
}

}  // namespace lexcase::textprep
