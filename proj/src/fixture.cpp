#include "lexcase/fixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "lexcase/error.hpp"
#include "lexcase/random.hpp"

namespace lexcase::fixture {

namespace {

constexpr std::array<const char*, 12> kFiller = {"the", "of", "and", "to", "in", "that",
                                                 "was", "for", "by", "with", "it", "on"};

std::string make_id(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%03zu", prefix, i + 1);
  return buf;
}

class WordMaker {
 public:
  explicit WordMaker(Rng& rng) : rng_(rng) {}

  // Fresh pronounceable word of 2-4 syllables, never handed out twice.
  std::string fresh(std::size_t min_syllables = 2) {
    static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
                                              "t", "v", "z", "br", "dr", "gl", "pl", "st", "tr"};
    static constexpr const char* kVowels[] = {"a", "o", "u", "ei", "ou", "ai"};
    for (;;) {
      std::string w;
      const std::size_t syllables = min_syllables + rng_.below(3);
      for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng_.below(std::size(kOnsets))];
        w += kVowels[rng_.below(std::size(kVowels))];
      }
      w += kOnsets[rng_.below(10)];
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

struct Generator {
  Rng rng;
  WordMaker words{rng};
  std::vector<std::string> background;

  Generator(std::uint64_t seed, std::size_t vocab) : rng(seed) {
    for (std::size_t i = 0; i < vocab; ++i) background.push_back(words.fresh());
  }

  // Zipf-like: low indices are common.
  const std::string& background_word() {
    const double u = rng.uniform();
    const auto idx = static_cast<std::size_t>(std::floor(u * u * u * static_cast<double>(background.size())));
    return background[std::min(idx, background.size() - 1)];
  }

  std::vector<std::string> block(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(words.fresh(3));
    return out;
  }

  // Sequence of background words, filler words and the odd number.
  std::vector<std::string> body(std::size_t length) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < length; ++i) {
      const double u = rng.uniform();
      if (u < 0.25) {
        out.push_back(kFiller[rng.below(kFiller.size())]);
      } else if (u < 0.28) {
        out.push_back(std::to_string(1950 + rng.below(70)));
      } else {
        out.push_back(background_word());
      }
    }
    return out;
  }

  void inject(std::vector<std::string>& tokens, const std::vector<std::string>& extra, std::size_t copies) {
    for (const auto& w : extra) {
      for (std::size_t c = 0; c < copies; ++c) {
        tokens.insert(tokens.begin() + static_cast<long>(rng.below(tokens.size() + 1)), w);
      }
    }
  }

  // Numbered paragraphs of 10-16 words, sentences capitalized.
  std::string render(const std::vector<std::string>& tokens) {
    std::string text;
    std::size_t para = 1;
    std::size_t i = 0;
    while (i < tokens.size()) {
      const std::size_t len = std::min<std::size_t>(10 + rng.below(7), tokens.size() - i);
      text += "[" + std::to_string(para++) + "] ";
      for (std::size_t k = 0; k < len; ++k) {
        std::string w = tokens[i + k];
        if (k == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        text += w;
        text += k + 1 == len ? ".\n" : (rng.below(8) == 0 ? ", " : " ");
      }
      i += len;
    }
    return text;
  }
};

}  // namespace

std::vector<QueryCase> generate_cases(const CaseOptions& options) {
  if (options.queries < 1 || options.candidates < 1 || options.max_gold < 1) {
    throw Error(ErrorCode::precondition, "fixture needs at least one query, one candidate and max_gold >= 1");
  }
  Generator gen(options.seed, 600);
  std::vector<QueryCase> queries;
  for (std::size_t q = 0; q < options.queries; ++q) {
    QueryCase qc;
    qc.id = make_id('q', q);
    const auto rare = gen.block(8);

    auto base = gen.body(60 + gen.rng.below(30));
    gen.inject(base, rare, 1);
    qc.base = Document{qc.id, gen.render(base), {}};

    const std::size_t n_gold = 1 + gen.rng.below(std::min(options.max_gold, options.candidates));
    std::vector<std::size_t> slots(options.candidates);
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
    for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[gen.rng.below(i)]);
    const std::set<std::size_t> gold_slots(slots.begin(), slots.begin() + static_cast<long>(n_gold));

    std::set<DocId> gold;
    for (std::size_t c = 0; c < options.candidates; ++c) {
      const auto id = make_id('c', c);
      auto tokens = gen.body(50 + gen.rng.below(30));
      if (gold_slots.contains(c)) {
        gen.inject(tokens, rare, 2);
        gold.insert(id);
      } else if (gen.rng.below(10) < 3) {
        // A single stray rare word makes non-gold candidates less trivial.
        gen.inject(tokens, {rare[gen.rng.below(rare.size())]}, 1);
      }
      qc.candidates.push_back(Document{id, gen.render(tokens), {}});
    }
    qc.gold = std::move(gold);
    queries.push_back(std::move(qc));
  }
  return queries;
}

StatuteCorpus generate_statute(const StatuteOptions& options) {
  if (options.queries < 1 || options.articles < 1) {
    throw Error(ErrorCode::precondition, "fixture needs at least one query and one article");
  }
  Generator gen(options.seed, 600);
  std::vector<std::vector<std::string>> article_tokens(options.articles);
  for (auto& t : article_tokens) t = gen.body(40 + gen.rng.below(40));

  StatuteCorpus out;
  for (std::size_t q = 0; q < options.queries; ++q) {
    QueryCase qc;
    qc.id = make_id('q', q);
    const auto rare = gen.block(6);
    auto base = gen.body(25 + gen.rng.below(15));
    gen.inject(base, rare, 1);
    qc.base = Document{qc.id, gen.render(base), {}};
    const std::size_t n_gold = 1 + gen.rng.below(std::min<std::size_t>(3, options.articles));
    std::set<DocId> gold;
    while (gold.size() < n_gold) {
      const auto a = gen.rng.below(options.articles);
      if (gold.insert(make_id('a', a)).second) {
        // Gold articles share only part of the block so rankings stay graded.
        std::vector<std::string> part(rare.begin(), rare.begin() + 2 + static_cast<long>(gen.rng.below(4)));
        gen.inject(article_tokens[a], part, 1);
      }
    }
    qc.gold = std::move(gold);
    out.queries.push_back(std::move(qc));
  }
  for (std::size_t a = 0; a < options.articles; ++a) {
    out.articles.push_back(Document{make_id('a', a), gen.render(article_tokens[a]), {}});
  }
  return out;
}

EntailCorpus generate_entail(const EntailOptions& options) {
  if (options.pairs < 1 || options.articles < 2) {
    throw Error(ErrorCode::precondition, "entail fixture needs at least one pair and two articles");
  }
  Generator gen(options.seed, 400);
  EntailCorpus out;
  std::vector<std::vector<std::string>> article_tokens;
  for (std::size_t a = 0; a < options.articles; ++a) {
    article_tokens.push_back(gen.body(40 + gen.rng.below(30)));
    out.articles.push_back(Document{make_id('a', a), gen.render(article_tokens.back()), {}});
  }
  for (std::size_t p = 0; p < options.pairs; ++p) {
    const std::size_t a = gen.rng.below(options.articles);
    const bool yes = gen.rng.below(2) == 0;
    const auto& src = article_tokens[a];
    std::vector<std::string> t2;
    if (yes) {
      const std::size_t start = gen.rng.below(src.size() / 2);
      t2.assign(src.begin() + static_cast<long>(start), src.begin() + static_cast<long>(start + 12));
    } else if (gen.rng.below(2) == 0) {
      const std::size_t start = gen.rng.below(src.size() / 2);
      t2.assign(src.begin() + static_cast<long>(start), src.begin() + static_cast<long>(start + 12));
      t2.insert(t2.begin() + 1, "not");
    } else {
      const auto& other = article_tokens[(a + 1 + gen.rng.below(options.articles - 1)) % options.articles];
      t2.assign(other.begin(), other.begin() + 12);
    }
    EntailPair pair;
    pair.id = "p" + std::to_string(p + 1);
    pair.t1 = Document{pair.id + "/t1", out.articles[a].text, {}};
    std::string t2_text;
    for (std::size_t i = 0; i < t2.size(); ++i) t2_text += (i ? " " : "") + t2[i];
    pair.t2 = Document{pair.id + "/t2", t2_text + ".", {}};
    pair.label = yes;
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

void write_cases(const std::filesystem::path& out, const std::vector<QueryCase>& queries) {
  corpus::write_case_queries(out, queries);
}

void write_statute(const std::filesystem::path& out, const StatuteCorpus& c) {
  corpus::write_articles(out / "articles.jsonl", c.articles);
  corpus::write_case_queries(out / "queries", c.queries);
}

void write_entail(const std::filesystem::path& out, const EntailCorpus& c) {
  corpus::write_articles(out / "articles.jsonl", c.articles);
  corpus::write_pairs(out / "pairs.xml", c.pairs);
}

}  // namespace lexcase::fixture
