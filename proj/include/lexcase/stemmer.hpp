#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexcase {

/// Porter-style suffix stripper driven by a rule table.
///
/// Table format (`stemmer_rules.tsv`): one rule per line,
/// `step<TAB>suffix<TAB>replacement<TAB>condition[<TAB>flags]`, `#` comments.
/// Steps run in order of first appearance. Within a step the longest suffix
/// the word ends with is selected; if none of that suffix's rules has a
/// satisfied condition the step leaves the word alone. An empty replacement
/// is written as `-`.
///
/// Conditions are `-` (always) or a disjunction (`|`) of conjunctions (`&`)
/// of atoms evaluated on the stem left after removing the suffix:
/// `m>0`, `m>1`, `m=1` (Porter measure), `*v*` (stem has a vowel),
/// `*o` / `!*o` (stem ends consonant-vowel-consonant, last not w/x/y),
/// `*s`, `*t` (stem ends in that letter). `R:m>1` tests the measure of the
/// rewritten word instead.
///
/// The `fixup` flag runs the step-1b repair after the rule fires: rules of
/// step `1b2`, else undouble a final double consonant (except l, s, z),
/// else append `e` when m=1 and *o.
class Stemmer {
 public:
  struct Rule {
    std::string step;
    std::string suffix;
    std::string replacement;
    std::string condition;
    bool fixup = false;
  };

  explicit Stemmer(std::vector<Rule> rules);

  static Stemmer from_file(const std::filesystem::path& path);
  static Stemmer from_string(std::string_view table);

  /// One pass of the rule table. Words shorter than three characters, and
  /// anything that is not plain ASCII lowercase/digits, pass through.
  std::string stem_once(std::string_view word) const;

  /// stem_once applied until the word stops changing, so stem(stem(w)) ==
  /// stem(w).
  std::string stem(std::string_view word) const;

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  struct Step {
    std::string name;
    std::vector<std::size_t> rules;  // indices into rules_, longest suffix first
  };

  bool apply_step(const Step& step, std::string& word) const;
  void fixup_1b(std::string& word) const;

  std::vector<Rule> rules_;
  std::vector<Step> steps_;
  std::optional<std::size_t> fixup_step_;
};

}  // namespace lexcase
