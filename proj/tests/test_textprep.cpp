#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lexcase/error.hpp"
#include "lexcase/random.hpp"
#include "lexcase/stemmer.hpp"
#include "lexcase/textprep.hpp"
#include "support.hpp"

using namespace lexcase;
using namespace lexcase::textprep;
using support::error_of;
using Tokens = std::vector<std::string>;

namespace {

std::string join(const Tokens& t) {
  std::string out;
  for (const auto& s : t) out += (out.empty() ? "" : " ") + s;
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The Court, in 2001") == Tokens{"the", "court", "in", "2001"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("re-trial") == Tokens{"re", "trial"});
  CHECK(tokenize("s.15(2)(a)") == Tokens{"s", "15", "2", "a"});
  CHECK(tokenize("  \n\t ").empty());
  CHECK(tokenize("Ça VA über") == Tokens{"ça", "va", "über"});
  CHECK(tokenize("3×4") == Tokens{"3", "4"});
  CHECK(tokenize("it’s “quoted”") == Tokens{"it", "s", "quoted"});
}

TEST_CASE("strip_paragraph_numbers") {
  CHECK(strip_paragraph_numbers("[12] The appellant argues") == "The appellant argues");
  CHECK(strip_paragraph_numbers("see paragraph [12] above") == "see paragraph [12] above");
  CHECK(strip_paragraph_numbers("3. It follows that") == "It follows that");
  CHECK(strip_paragraph_numbers("(4) Next") == "Next");
  CHECK(strip_paragraph_numbers("a\n  [2]\tindented\n[3]") == "a\nindented\n");
  CHECK(strip_paragraph_numbers("3.5 million") == "3.5 million");
  CHECK(strip_paragraph_numbers("[x] not a number") == "[x] not a number");
  CHECK(strip_paragraph_numbers("") == "");
}

TEST_CASE("preprocess stage 1 and stage 2") {
  const auto& s1 = support::stage1();
  const auto& s2 = support::stage2();
  CHECK(s2.stopwords.size() == 127);
  CHECK(preprocess_text("The 3 judges ruled", s2) == Tokens{"judg", "rule"});
  CHECK(preprocess_text("on of to", s2).empty());
  CHECK(preprocess_text("[1] The 3 judges ruled", s1) == Tokens{"the", "3", "judges", "ruled"});
  CHECK(preprocess_text("s15 and 2001", s2) == Tokens{"s15"});

  const auto doc = preprocess(Document{"d", "[7] Appeal allowed.", {}}, s2);
  CHECK(doc.id == "d");
  CHECK(doc.text == "[7] Appeal allowed.");
  CHECK(doc.tokens == Tokens{"appeal", "allow"});

  std::vector<Document> docs = {{"a", "Cats running", {}}, {"b", "", {}}};
  preprocess_all(docs, s2);
  CHECK(docs[0].tokens == Tokens{"cat", "run"});
  CHECK(docs[1].tokens.empty());
}

TEST_CASE("preprocess properties on random text") {
  const auto& s1 = support::stage1();
  const auto& s2 = support::stage2();
  const Tokens words = {"the",   "courts", "held",     "that",      "agreed", "contracts", "was",    "not",
                        "1999",  "12",     "breaching", "relational", "hopeful", "generalization", "is", "own",
                        "ties",  "agree",  "sensibility", "conditional", "ab", "feed", "oscillators", "hopping"};
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto len = rng.below(25);
    for (std::uint64_t i = 0; i < len; ++i) {
      if (rng.below(6) == 0) text += "\n[" + std::to_string(rng.below(30)) + "] ";
      text += words[rng.below(words.size())] + (rng.below(4) == 0 ? ", " : " ");
    }
    const auto t1 = preprocess_text(text, s1);
    CHECK(t1.size() == tokenize(strip_paragraph_numbers(text)).size());

    const auto t2 = preprocess_text(text, s2);
    // Never invents tokens: each stage-2 token is the stem of some stage-1 token.
    std::multiset<std::string> image;
    for (const auto& t : t1) image.insert(s2.stemmer->stem(t));
    for (const auto& t : t2) {
      auto it = image.find(t);
      REQUIRE(it != image.end());
      image.erase(it);
      CHECK(t.size() >= s2.min_token_len);
      CHECK_FALSE(s2.stopwords.contains(t));
      CHECK(t.find_first_not_of("0123456789") != std::string::npos);
    }
    CHECK(preprocess_text(join(t2), s2) == t2);
  }
}

TEST_CASE("PrepConfig validation and data lookup") {
  PrepConfig cfg;
  cfg.stage = Stage::stage2;
  CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::invalid_config);
  cfg.stage = Stage::stage1;
  cfg.min_token_len = 0;
  CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::invalid_config);
  cfg.min_token_len = 3;
  cfg.stopwords = {"The"};
  CHECK(error_of([&] { cfg.validate(); }) == ErrorCode::invalid_config);
  CHECK(error_of([] { (void)parse_stage("stage3"); }) == ErrorCode::invalid_config);
  CHECK(parse_stage(to_string(Stage::stage2)) == Stage::stage2);
  CHECK(resolve_data_dir("/x/y") == std::filesystem::path("/x/y"));
  CHECK(error_of([] { (void)PrepConfig::load(Stage::stage2, "/nonexistent-dir"); }) == ErrorCode::io);
}

TEST_CASE("stemmer reproduces the bundled reference vectors") {
  const auto stemmer = Stemmer::from_file(resolve_data_dir() / "stemmer_rules.tsv");
  std::ifstream in(resolve_data_dir() / "stemmer_vectors.tsv");
  REQUIRE(in);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const auto input = line.substr(0, tab);
    const auto expected = line.substr(tab + 1);
    CHECK_MESSAGE(stemmer.stem_once(input) == expected, input);
    ++count;
  }
  CHECK(count >= 20);
}

TEST_CASE("stemmer behaviour") {
  const auto stemmer = Stemmer::from_file(resolve_data_dir() / "stemmer_rules.tsv");
  CHECK(stemmer.stem_once("judges") == "judg");
  CHECK(stemmer.stem_once("ruled") == "rule");
  CHECK(stemmer.stem_once("at") == "at");
  CHECK(stemmer.stem_once("Running") == "Running");
  CHECK(stemmer.stem_once("café") == "café");
  CHECK(stemmer.stem("agreed") == stemmer.stem(stemmer.stem("agreed")));
  for (const char* w : {"generalizations", "oscillators", "relational", "conditionally", "hopefulness"}) {
    const auto once = stemmer.stem(w);
    CHECK(stemmer.stem(once) == once);
  }
  const Stemmer copy = stemmer;
  CHECK(copy.stem_once("hopping") == "hop");

  const auto tiny = Stemmer::from_string("# comment\nx\tsses\tss\t-\nx\ties\ti\t-\n");
  CHECK(tiny.rules().size() == 2);
  CHECK(tiny.stem_once("caresses") == "caress");
  CHECK(tiny.stem_once("ponies") == "poni");
  CHECK(error_of([] { (void)Stemmer::from_string("x\tonly-two-fields\n"); }) == ErrorCode::parse);
  CHECK(error_of([] { (void)Stemmer::from_string("x\ta\tb\tm>0&m>7\n"); }) == ErrorCode::invalid_config);
}
