#include "lexcase/stemmer.hpp"

#include <algorithm>
#include <sstream>

#include "lexcase/corpus_io.hpp"
#include "lexcase/error.hpp"

namespace lexcase {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in [C](VC)^m[V].
int measure(std::string_view w) {
  const std::size_t n = w.size();
  std::size_t i = 0;
  int m = 0;
  while (i < n && is_consonant(w, i)) ++i;
  for (;;) {
    while (i < n && !is_consonant(w, i)) ++i;
    if (i >= n) return m;
    while (i < n && is_consonant(w, i)) ++i;
    ++m;
  }
}

bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 1) || is_consonant(w, n - 2) || !is_consonant(w, n - 3)) return false;
  const char c = w[n - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool eval_atom(std::string_view atom, std::string_view stem, std::string_view result) {
  if (atom.starts_with("R:")) return eval_atom(atom.substr(2), result, result);
  if (atom == "m>0") return measure(stem) > 0;
  if (atom == "m>1") return measure(stem) > 1;
  if (atom == "m=1") return measure(stem) == 1;
  if (atom == "*v*") return has_vowel(stem);
  if (atom == "*o") return ends_cvc(stem);
  if (atom == "!*o") return !ends_cvc(stem);
  if (atom.size() == 2 && atom[0] == '*') return !stem.empty() && stem.back() == atom[1];
  throw Error(ErrorCode::invalid_config, "unknown stemmer condition atom '" + std::string(atom) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool eval_condition(std::string_view cond, std::string_view stem, std::string_view result) {
  if (cond == "-") return true;
  for (auto disjunct : split(cond, '|')) {
    bool all = true;
    for (auto atom : split(disjunct, '&')) {
      if (!eval_atom(atom, stem, result)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool stemmable(std::string_view w) {
  return std::all_of(w.begin(), w.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
}

}  // namespace

Stemmer::Stemmer(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    // Evaluate every atom once so a bad table fails at load time.
    if (r.condition != "-") {
      for (auto disjunct : split(r.condition, '|')) {
        for (auto atom : split(disjunct, '&')) eval_atom(atom, "xyz", "xyz");
      }
    }
    auto it = std::find_if(steps_.begin(), steps_.end(), [&](const Step& s) { return s.name == r.step; });
    if (it == steps_.end()) {
      steps_.push_back(Step{r.step, {}});
      it = std::prev(steps_.end());
    }
    it->rules.push_back(i);
  }
  for (std::size_t s = 0; s < steps_.size(); ++s) {
    auto& idx = steps_[s].rules;
    std::stable_sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
      return rules_[a].suffix.size() > rules_[b].suffix.size();
    });
    // The repair step only runs through a fixup rule, never in sequence.
    if (steps_[s].name == "1b2") fixup_step_ = s;
  }
}

Stemmer Stemmer::from_string(std::string_view table) {
  std::vector<Rule> rules;
  std::size_t lineno = 0;
  for (auto line : split(table, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() < 4 || cols.size() > 5) {
      throw Error(ErrorCode::parse, "stemmer rules line " + std::to_string(lineno) + ": expected 4 or 5 columns");
    }
    Rule r;
    r.step = std::string(cols[0]);
    r.suffix = std::string(cols[1]);
    r.replacement = cols[2] == "-" ? std::string() : std::string(cols[2]);
    r.condition = std::string(cols[3]);
    if (cols.size() == 5) {
      if (cols[4] != "fixup") {
        throw Error(ErrorCode::parse, "stemmer rules line " + std::to_string(lineno) + ": unknown flag");
      }
      r.fixup = true;
    }
    if (r.suffix.empty()) throw Error(ErrorCode::parse, "stemmer rules line " + std::to_string(lineno) + ": empty suffix");
    rules.push_back(std::move(r));
  }
  return Stemmer(std::move(rules));
}

Stemmer Stemmer::from_file(const std::filesystem::path& path) {
  return from_string(corpus::read_text_file(path));
}

bool Stemmer::apply_step(const Step& step, std::string& word) const {
  const Rule* first = nullptr;
  for (std::size_t idx : step.rules) {
    const Rule* r = &rules_[idx];
    if (first && r->suffix != first->suffix) break;
    if (!first) {
      if (!ends_with(word, r->suffix)) continue;
      first = r;
    }
    const std::string_view stem(word.data(), word.size() - r->suffix.size());
    const std::string result = std::string(stem) + r->replacement;
    if (eval_condition(r->condition, stem, result)) {
      word = result;
      if (r->fixup) fixup_1b(word);
      return true;
    }
  }
  return false;
}

void Stemmer::fixup_1b(std::string& word) const {
  if (fixup_step_ && apply_step(steps_[*fixup_step_], word)) return;
  if (ends_double_consonant(word)) {
    const char c = word.back();
    if (c != 'l' && c != 's' && c != 'z') word.pop_back();
    return;
  }
  if (measure(word) == 1 && ends_cvc(word)) word.push_back('e');
}

std::string Stemmer::stem_once(std::string_view input) const {
  std::string word(input);
  if (word.size() <= 2 || !stemmable(word)) return word;
  for (std::size_t s = 0; s < steps_.size(); ++s) {
    if (fixup_step_ && s == *fixup_step_) continue;
    apply_step(steps_[s], word);
  }
  return word;
}

std::string Stemmer::stem(std::string_view input) const {
  std::string current(input);
  // Every rewrite either shortens the word or maps a trailing y/i-group to a
  // same-length form, so this settles within a few rounds.
  for (int round = 0; round < 16; ++round) {
    std::string next = stem_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace lexcase
