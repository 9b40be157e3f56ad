// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each check also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "embed_checks.hpp"
#include "lexcase/bm25_index.hpp"
#include "lexcase/corpus_io.hpp"
#include "lexcase/entail_baseline.hpp"
#include "lexcase/eval_metrics.hpp"
#include "lexcase/fixture.hpp"
#include "lexcase/pvdm_embed.hpp"
#include "lexcase/rank_fusion.hpp"
#include "lexcase/run_io.hpp"
#include "lexcase/tfidf.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lexcase;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// 1 ---------------------------------------------------------------------
void metric_identities(Outcome& out) {
  struct Row {
    double p, r, beta, f;
  };
  const Row rows[] = {{0.4653, 0.3455, 1, 0.3965}, {0.6256, 0.3848, 1, 0.4765}, {0.6368, 0.3879, 1, 0.4821},
                      {0.7045, 0.6889, 1, 0.6966}, {0.6591, 0.6444, 1, 0.6517}, {0.5510, 0.4462, 2, 0.4639}};
  double worst = 0.0;
  for (const auto& row : rows) {
    // Pooled counts that realise (P, R): 20000 hits.
    eval::RunResult run;
    const std::size_t c = 20000;
    const auto retrieved = static_cast<std::size_t>(std::llround(c / row.p));
    const auto relevant = static_cast<std::size_t>(std::llround(c / row.r));
    auto& ret = run.retrieved["q"];
    auto& gold = run.gold["q"];
    for (std::size_t i = 0; i < retrieved; ++i) ret.push_back((i < c ? "h" : "m") + std::to_string(i));
    for (std::size_t i = 0; i < relevant; ++i) gold.insert((i < c ? "h" : "g") + std::to_string(i));
    const auto rep = eval::micro_prf(run, row.beta);
    worst = std::max({worst, std::abs(rep.f_beta - row.f), std::abs(eval::f_beta(row.p, row.r, row.beta) - row.f)});
  }
  out.detail << "6 published (P,R) pairs, max |F - published| = " << sci(worst) << " (tol 5e-4)";
  out.require(worst <= 5e-4, "F outside tolerance");
}

// 2 ---------------------------------------------------------------------
void bm25_oracle(Outcome& out) {
  Rng rng(20240);
  double worst = 0.0;
  std::size_t scored = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = oracle::random_corpus(rng, 20, 1 + rng.below(15), 30);
    const auto docs = oracle::as_documents(raw);
    const auto idx = bm25::build_index(docs);
    const bm25::Params p{1.2, 0.75};
    std::vector<std::string> query;
    for (std::uint64_t i = 0, n = 1 + rng.below(6); i < n; ++i) query.push_back(std::string(1, static_cast<char>('a' + rng.below(16))));
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const double want = oracle::bm25(raw, query, d, p.k1, p.b);
      const double got = bm25::score(idx, p, query, docs[d].id);
      worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
      if (want == 0.0) worst = std::max(worst, std::abs(got));
      ++scored;
    }
  }
  const std::vector<Document> hand = {{"D1", "", {"a", "b", "a"}}, {"D2", "", {"b", "c"}}};
  const double s = bm25::score(bm25::build_index(hand), {}, std::vector<std::string>{"a"}, "D1");
  out.detail << scored << " scores on 200 corpora, max rel err " << sci(worst) << " (tol 1e-12); hand fixture " << fmt(s)
             << " (want 0.9023)";
  out.require(worst <= 1e-12, "oracle mismatch");
  out.require(std::abs(s - 0.9023) <= 5e-4, "hand fixture");
}

// 3 ---------------------------------------------------------------------
void tfidf_oracle(Outcome& out) {
  Rng rng(770);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<oracle::Tokens> raw(10);
    for (auto& d : raw) {
      for (std::uint64_t i = 0, n = rng.below(12); i < n; ++i) d.push_back(std::string(1, static_cast<char>('a' + rng.below(12))));
    }
    const auto docs = oracle::as_documents(raw);
    std::vector<std::string> query;
    for (std::uint64_t i = 0, n = 1 + rng.below(5); i < n; ++i) query.push_back(std::string(1, static_cast<char>('a' + rng.below(14))));
    std::vector<DocId> ids;
    for (const auto& d : docs) ids.push_back(d.id);
    const auto got = tfidf::rank_cosine(tfidf::fit(docs), query, ids).ids();
    std::vector<DocId> want;
    for (const auto& [id, score] : oracle::dense_tfidf_rank(docs, query)) want.push_back(id);
    equal += got == want ? 1 : 0;
  }
  out.detail << equal << "/100 random 10-doc corpora rank identically to the dense oracle";
  out.require(equal == 100, "ranking differs");
}

// 4 ---------------------------------------------------------------------
void pvdm_checks(Outcome& out) {
  const double grad = checks::pvdm_gradient_error(1e-5);
  embed::EmbedConfig cfg;
  cfg.dim = 50;
  cfg.window = 3;
  cfg.epochs = 50;
  cfg.seed = 5;
  const auto model = embed::train(oracle::two_topics(), cfg);
  const auto sep = checks::topic_separation(model);
  out.detail << "gradient max rel err " << sci(grad) << " (tol 1e-4); loss epoch1 " << fmt(model.epoch_loss[0])
             << " > epoch5 " << fmt(model.epoch_loss[4]) << "; intra cos " << fmt(sep.intra) << " > inter " << fmt(sep.inter);
  out.require(grad < 1e-4, "gradient check");
  out.require(model.epoch_loss[4] < model.epoch_loss[0], "loss did not decrease");
  out.require(sep.intra > sep.inter, "topics not separated");
}

// 5 ---------------------------------------------------------------------
void selection_rules(Outcome& out) {
  using fusion::SelectionRule;
  auto list = [](std::vector<double> scores) {
    ScoredList l{"q", {}};
    for (std::size_t i = 0; i < scores.size(); ++i) l.entries.push_back({"d" + std::to_string(10 + i), scores[i]});
    l.sort();
    return l;
  };
  const auto a = fusion::select(list(std::vector<double>(12, 10.0)), SelectionRule::top_k_relative(0.9));
  const auto b = fusion::select(list({10, 8, 7, 1}), SelectionRule::top_k_relative(0.9));
  const auto c = fusion::select(list({10, 8, 7, 1}), SelectionRule::top_k_relative(0.8));
  const auto d = fusion::select(list({3}), SelectionRule::top_k_relative(0.9));
  out.detail << "12x10 @0.9 -> " << a.size() << " ids; [10,8,7,1] @0.9 -> " << b.size() << "; @0.8 -> " << c.size()
             << "; single candidate -> " << d.size();
  out.require(a.size() == 10, "cap");
  out.require(b == std::vector<DocId>{"d10"}, "strict threshold at 0.9");
  out.require(c == std::vector<DocId>{"d10", "d11"}, "threshold at 0.8");
  out.require(d == std::vector<DocId>{"d10"}, "single candidate");
}

// 6 ---------------------------------------------------------------------
double micro_f1(const std::map<std::string, fusion::QueryResult>& results, const fs::path& gold_root) {
  eval::RunResult run;
  for (const auto& [qid, r] : results) run.retrieved[qid] = r.selected;
  run.gold = corpus::load_gold(gold_root);
  return eval::micro_prf(run, 1.0).f_beta;
}

void end_to_end(Outcome& out) {
  support::TempDir tmp("accept-e2e");
  const auto root = tmp / "fixture";
  fixture::write_cases(root, fixture::generate_cases({25, 40, 3}));

  fusion::RetrievalCorpus corpus;
  corpus.queries = corpus::load_case_queries(root);
  corpus.validate();
  fusion::VariantConfig cfg;
  cfg.embed_prep = support::stage1();
  cfg.lexical_prep = support::stage2();

  embed::EmbedConfig ec;
  ec.dim = 150;
  ec.window = 10;
  ec.epochs = 50;
  ec.seed = 7;
  const auto model = embed::train(fusion::embedding_corpus(corpus, cfg.embed_prep), ec);
  fusion::Resources res;
  res.embedding = &model;

  auto bm25_cfg = cfg;
  bm25_cfg.rule = fusion::SelectionRule::top_k_relative(0.9);
  const double f_bm25 = micro_f1(fusion::run_variant(fusion::Variant::bm25, fusion::Task::t1, corpus, bm25_cfg, res), root);
  const double f_d2v = micro_f1(fusion::run_variant(fusion::Variant::d2v, fusion::Task::t1, corpus, cfg, res), root);
  auto docbm_cfg = cfg;
  docbm_cfg.rule = fusion::SelectionRule::top_k_relative(0.8);
  const double f_docbm = micro_f1(fusion::run_variant(fusion::Variant::docbm, fusion::Task::t1, corpus, docbm_cfg, res), root);

  out.detail << "25 queries x 40 candidates, seed 3: F1 bm25@0.9 " << fmt(f_bm25) << " (> 0.8); docbm@0.8 " << fmt(f_docbm)
             << " >= d2v " << fmt(f_d2v);
  out.require(f_bm25 > 0.8, "bm25 F1");
  out.require(f_docbm >= f_d2v, "docbm below d2v");
}

// 7 ---------------------------------------------------------------------
void map_correctness(Outcome& out) {
  const bool hand = eval::average_precision({"A", "X"}, {"A"}, 100) == 1.0 &&
                    eval::average_precision({"X", "A"}, {"A"}, 100) == 0.5 &&
                    eval::average_precision({"A", "X", "B"}, {"A", "B"}, 100) == (1.0 + 2.0 / 3.0) / 2.0;

  const auto st = fixture::generate_statute({20, 120, 3});
  fusion::RetrievalCorpus corpus;
  corpus.queries = st.queries;
  corpus.shared_pool = st.articles;
  fusion::VariantConfig cfg;
  cfg.embed_prep = support::stage1();
  cfg.lexical_prep = support::stage2();
  cfg.long_list = true;
  const auto results = fusion::run_variant(fusion::Variant::bm25, fusion::Task::t3, corpus, cfg, {});
  eval::RunResult run;
  double brute = 0.0;
  std::size_t n = 0;
  std::size_t longest = 0;
  for (const auto& q : corpus.queries) {
    const auto& sel = results.at(q.id).selected;
    longest = std::max(longest, sel.size());
    run.retrieved[q.id] = sel;
    run.gold[q.id] = *q.gold;
    brute += oracle::average_precision(sel, *q.gold, 100);
    ++n;
  }
  brute /= static_cast<double>(n);
  const double map = eval::map_at_k(run, 100);
  out.detail << "hand AP examples " << (hand ? "exact" : "WRONG") << "; MAP@100 over " << n << " statute queries "
             << fmt(map, 6) << " vs brute force diff " << sci(std::abs(map - brute));
  out.require(hand, "hand AP");
  out.require(std::abs(map - brute) <= 1e-12, "MAP differs from brute force");
  out.require(longest <= 100, "long list exceeds 100");
}

// 8 ---------------------------------------------------------------------
std::map<std::string, std::string> pipeline_artifacts(const fs::path& dir) {
  fixture::write_cases(dir / "cases", fixture::generate_cases({6, 15, 11}));
  fixture::write_entail(dir / "entail", fixture::generate_entail({40, 12, 11}));

  fusion::RetrievalCorpus corpus;
  corpus.queries = corpus::load_case_queries(dir / "cases");
  fusion::VariantConfig cfg;
  cfg.embed_prep = support::stage1();
  cfg.lexical_prep = support::stage2();
  embed::EmbedConfig ec;
  ec.dim = 32;
  ec.epochs = 8;
  ec.seed = 7;
  const auto model = embed::train(fusion::embedding_corpus(corpus, cfg.embed_prep), ec);
  embed::save(model, dir / "model.bin");
  fusion::Resources res;
  res.embedding = &model;
  const auto store = fusion::build_pool_indexes(corpus, cfg.lexical_prep);
  nlohmann::json idx = nlohmann::json::object();
  for (const auto& [id, pool] : store) idx[id] = nlohmann::json{{"bm25", pool.bm25}, {"tfidf", pool.tfidf}};
  corpus::write_text_file(dir / "index.json", idx.dump());
  for (auto v : {fusion::Variant::d2v, fusion::Variant::bm25, fusion::Variant::docbm, fusion::Variant::tfidf}) {
    run_io::Run run;
    std::vector<ScoredList> lists;
    for (const auto& [qid, r] : fusion::run_variant(v, fusion::Task::t1, corpus, cfg, res)) {
      run[qid] = r.selected;
      lists.push_back(r.scores);
    }
    run_io::write_run(dir / ("run-" + std::string(fusion::to_string(v)) + ".jsonl"), run);
    run_io::write_scores(dir / ("scores-" + std::string(fusion::to_string(v)) + ".jsonl"), lists);
  }

  const auto articles = corpus::load_articles(dir / "entail/articles.jsonl");
  const auto ctx = entail::LexicalContext::fit(articles, cfg.lexical_prep, {"not", "no", "never", "neither", "nor", "cannot"});
  std::vector<entail::Example> xs;
  for (const auto& p : corpus::load_pairs(dir / "entail/pairs.xml")) {
    xs.push_back({p.id, entail::featurize(p, ctx, cfg.embed_prep, cfg.lexical_prep).values(), p.label});
  }
  const nlohmann::json lm = entail::train_classifier(xs, {});
  corpus::write_text_file(dir / "entail-model.json", lm.dump());

  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = support::read_bytes(e.path());
  }
  return files;
}

void determinism(Outcome& out) {
  support::TempDir a("accept-det-a");
  support::TempDir b("accept-det-b");
  const auto fa = pipeline_artifacts(a.path());
  const auto fb = pipeline_artifacts(b.path());
  std::size_t same = 0;
  for (const auto& [name, bytes] : fa) {
    auto it = fb.find(name);
    if (it != fb.end() && it->second == bytes) ++same;
  }
  out.detail << same << "/" << fa.size() << " artifacts byte-identical across two runs (fixture, model, index, runs, scores, classifier)";
  out.require(fa.size() == fb.size() && same == fa.size(), "artifacts differ");
}

// 9 ---------------------------------------------------------------------
void entailment(Outcome& out) {
  const auto xs = oracle::separable();
  entail::TrainOptions opt;
  opt.epochs = 400;
  const auto m = entail::train_classifier(xs, opt);
  std::map<std::string, bool> pred, gold;
  for (const auto& e : xs) {
    pred[e.id] = entail::predict(m, e.x).label;
    gold[e.id] = *e.label;
  }
  const double acc = eval::accuracy(pred, gold);

  auto flipped_xs = xs;
  for (auto& e : flipped_xs) e.label = !*e.label;
  const auto f = entail::train_classifier(flipped_xs, opt);
  double worst = std::abs(f.bias + m.bias);
  for (std::size_t i = 0; i < m.weights.size(); ++i) worst = std::max(worst, std::abs(f.weights[i] + m.weights[i]));

  const double all = eval::accuracy({{"a", true}, {"b", false}}, {{"a", true}, {"b", false}});
  const double half = eval::accuracy({{"a", true}, {"b", false}, {"c", true}, {"d", true}},
                                     {{"a", true}, {"b", true}, {"c", false}, {"d", true}});
  out.detail << "separable training accuracy " << fmt(acc) << "; sign flip max |w + w'| " << sci(worst)
             << " (tol 1e-6); trivial accuracies " << fmt(all, 1) << " and " << fmt(half, 1);
  out.require(acc == 1.0, "training accuracy");
  out.require(worst <= 1e-6, "sign flip");
  out.require(all == 1.0 && half == 0.5, "trivial accuracy");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {1, "metric identities", 1.0, metric_identities},
      {2, "bm25 oracle", 5.0, bm25_oracle},
      {3, "tf-idf oracle", 5.0, tfidf_oracle},
      {4, "pv-dm gradients and training", 60.0, pvdm_checks},
      {5, "selection rules", 1.0, selection_rules},
      {6, "end-to-end synthetic run", 120.0, end_to_end},
      {7, "map correctness", 5.0, map_correctness},
      {8, "determinism", 60.0, determinism},
      {9, "entailment baseline", 5.0, entailment},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) out.require(false, "runtime " + fmt(secs, 2) + "s over budget " + fmt(c.budget_s, 0) + "s");
    failures += out.pass ? 0 : 1;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << ", " << fmt(secs, 2)
              << "s): " << out.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
