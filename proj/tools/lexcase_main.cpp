// lexcase: batch command line for the retrieval / entailment pipeline.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lexcase/bm25_index.hpp"
#include "lexcase/corpus_io.hpp"
#include "lexcase/entail_baseline.hpp"
#include "lexcase/error.hpp"
#include "lexcase/eval_metrics.hpp"
#include "lexcase/fixture.hpp"
#include "lexcase/pvdm_embed.hpp"
#include "lexcase/rank_fusion.hpp"
#include "lexcase/run_io.hpp"
#include "lexcase/textprep.hpp"
#include "lexcase/tfidf.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lexcase;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string data_dir;
};

textprep::PrepConfig load_prep(const Globals& g, const std::string& stage) {
  return textprep::PrepConfig::load(textprep::parse_stage(stage), textprep::resolve_data_dir(g.data_dir));
}

fusion::RetrievalCorpus load_corpus(const std::string& queries_root, const std::string& articles) {
  fusion::RetrievalCorpus corpus;
  corpus.queries = corpus::load_case_queries(queries_root);
  if (!articles.empty()) corpus.shared_pool = corpus::load_articles(articles);
  corpus.validate();
  return corpus;
}

void write_json(const fs::path& path, const json& j) { corpus::write_text_file(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(corpus::read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  // Identical warnings are common (many all-OOV candidates); report counts.
  std::map<std::string, std::size_t> counts;
  for (const auto& w : warnings) ++counts[w];
  for (const auto& [w, n] : counts) std::cerr << "warning: " << w << (n > 1 ? " (x" + std::to_string(n) + ")" : "") << "\n";
}

// ---------------------------------------------------------------- index

struct IndexArgs {
  std::string prep = "stage2";
  std::string out;
  std::string root;
  std::string articles;
};

void setup_index(CLI::App& app, Globals& g, std::function<void()>& action) {
  auto args = std::make_shared<IndexArgs>();
  auto* sub = app.add_subcommand("index", "Build BM25 and tf-idf indexes for every candidate pool");
  sub->add_option("--prep", args->prep, "Preprocessing stage")->check(CLI::IsMember({"stage1", "stage2"}))->capture_default_str();
  sub->add_option("--out", args->out, "Index file (JSON)")->required();
  sub->add_option("--articles", args->articles, "Shared article pool (JSON-lines) instead of per-query candidates");
  sub->add_option("root", args->root, "Query root directory")->required();
  sub->callback([args, &g, &action] {
    action = [args, &g] {
      const auto prep = load_prep(g, args->prep);
      const auto corpus = load_corpus(args->root, args->articles);
      const auto store = fusion::build_pool_indexes(corpus, prep);
      json pools = json::object();
      for (const auto& [id, pool] : store) pools[id] = json{{"bm25", pool.bm25}, {"tfidf", pool.tfidf}};
      write_json(args->out, json{{"format", "lexcase-index"}, {"version", 1}, {"prep", args->prep}, {"pools", pools}});
      std::cerr << "indexed " << store.size() << " pool(s) into " << args->out << "\n";
    };
  });
}

std::pair<fusion::IndexStore, std::string> load_index_file(const fs::path& path) {
  const auto j = read_json(path);
  if (j.value("format", "") != "lexcase-index" || j.value("version", 0) != 1) {
    throw Error(ErrorCode::parse, path.string() + ": not a version-1 lexcase index");
  }
  fusion::IndexStore store;
  try {
    for (const auto& [id, pool] : j.at("pools").items()) {
      store.emplace(id, fusion::PoolIndex{pool.at("bm25").get<bm25::InvertedIndex>(), pool.at("tfidf").get<tfidf::TfidfModel>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
  return {std::move(store), j.value("prep", "stage2")};
}

// ---------------------------------------------------------- train-embed

struct TrainEmbedArgs {
  embed::EmbedConfig cfg;
  std::string prep = "stage1";
  std::string out;
  std::string root;
  std::string articles;
};

void setup_train_embed(CLI::App& app, Globals& g, std::function<void()>& action) {
  auto args = std::make_shared<TrainEmbedArgs>();
  auto* sub = app.add_subcommand("train-embed", "Train PV-DM paragraph vectors over queries and candidates");
  sub->add_option("--dim", args->cfg.dim, "Vector size")->capture_default_str();
  sub->add_option("--window", args->cfg.window, "Context window on each side")->capture_default_str();
  sub->add_option("--epochs", args->cfg.epochs)->capture_default_str();
  sub->add_option("--negatives", args->cfg.negatives, "Negative samples per position")->capture_default_str();
  sub->add_option("--lr-start", args->cfg.lr_start)->capture_default_str();
  sub->add_option("--lr-end", args->cfg.lr_end)->capture_default_str();
  sub->add_option("--seed", args->cfg.seed)->capture_default_str();
  sub->add_option("--min-count", args->cfg.min_count)->capture_default_str();
  sub->add_option("--prep", args->prep)->check(CLI::IsMember({"stage1", "stage2"}))->capture_default_str();
  sub->add_option("--articles", args->articles, "Shared article pool (JSON-lines)");
  sub->add_option("--out", args->out, "Model file (binary)")->required();
  sub->add_option("root", args->root, "Query root directory")->required();
  sub->callback([args, &g, &action] {
    action = [args, &g] {
      const auto prep = load_prep(g, args->prep);
      const auto corpus = load_corpus(args->root, args->articles);
      const auto docs = fusion::embedding_corpus(corpus, prep);
      const auto model = embed::train(docs, args->cfg);
      embed::save(model, args->out);
      std::cerr << "trained " << model.doc_vectors.size() << " document vectors, vocabulary " << model.words.size()
                << ", final epoch loss " << model.epoch_loss.back() << "\n";
    };
  });
}

// ------------------------------------------------------------- retrieve

struct RetrieveArgs {
  std::string task;
  std::string variant = "bm25";
  std::string queries;
  std::string articles;
  std::string index;
  std::string model;
  std::string out;
  std::string scores;
  std::string report;
  std::string prep = "stage2";
  std::string embed_prep = "stage1";
  double k1 = 1.2;
  double b = 0.75;
  int infer_steps = 50;
  std::optional<double> rel_frac;
  std::optional<std::size_t> max_k;
  std::optional<std::size_t> top_n;
  bool argmax = false;
  bool long_list = false;
};

std::optional<fusion::SelectionRule> rule_from(const std::optional<double>& rel_frac, const std::optional<std::size_t>& max_k,
                                               const std::optional<std::size_t>& top_n, bool argmax) {
  const int chosen = (rel_frac || max_k ? 1 : 0) + (top_n ? 1 : 0) + (argmax ? 1 : 0);
  if (chosen > 1) throw UsageError("--rel-frac/--max-k, --top-n and --argmax are mutually exclusive");
  if (top_n) return fusion::SelectionRule::top_n(*top_n);
  if (argmax) return fusion::SelectionRule::argmax();
  if (rel_frac || max_k) return fusion::SelectionRule::top_k_relative(rel_frac.value_or(0.9), max_k.value_or(10));
  return std::nullopt;
}

void setup_retrieve(CLI::App& app, Globals& g, std::function<void()>& action) {
  auto args = std::make_shared<RetrieveArgs>();
  auto* sub = app.add_subcommand("retrieve", "Score every query's candidates and select answers");
  sub->add_option("--task", args->task, "t1 | t2 | t3")->required()->check(CLI::IsMember({"t1", "t2", "t3"}));
  sub->add_option("--variant", args->variant, "d2v | bm25 | docbm | tfidf")
      ->check(CLI::IsMember({"d2v", "bm25", "docbm", "tfidf"}))
      ->capture_default_str();
  sub->add_option("--queries", args->queries, "Query root directory")->required();
  sub->add_option("--articles", args->articles, "Shared article pool (JSON-lines)");
  sub->add_option("--index", args->index, "Prebuilt index file from `lexcase index`");
  sub->add_option("--model", args->model, "Embedding model from `lexcase train-embed`");
  sub->add_option("--out", args->out, "Run file (JSON-lines)")->required();
  sub->add_option("--scores", args->scores, "Also write full score lists (JSON-lines)");
  sub->add_option("--report", args->report, "Write a JSON report with the effective configuration");
  sub->add_option("--prep", args->prep, "Preprocessing for lexical scorers")->check(CLI::IsMember({"stage1", "stage2"}))->capture_default_str();
  sub->add_option("--embed-prep", args->embed_prep, "Preprocessing for the embedding scorer")
      ->check(CLI::IsMember({"stage1", "stage2"}))
      ->capture_default_str();
  sub->add_option("--k1", args->k1)->capture_default_str();
  sub->add_option("--b", args->b)->capture_default_str();
  sub->add_option("--infer-steps", args->infer_steps)->capture_default_str();
  sub->add_option("--rel-frac", args->rel_frac, "Relative threshold selection with this fraction");
  sub->add_option("--max-k", args->max_k, "Cap for relative threshold selection");
  sub->add_option("--top-n", args->top_n, "Return the first N of every ranking");
  sub->add_flag("--argmax", args->argmax, "Return only the best candidate");
  sub->add_flag("--long", args->long_list, "Task 3 long list (top 100)");
  sub->callback([args, sub, &g, &action] {
    action = [args, sub, &g] {
      const auto variant = fusion::parse_variant(args->variant);
      const auto task = fusion::parse_task(args->task);
      fusion::VariantConfig cfg;
      cfg.embed_prep = load_prep(g, args->embed_prep);
      cfg.lexical_prep = load_prep(g, args->prep);
      cfg.bm25 = bm25::Params{args->k1, args->b};
      cfg.infer_steps = args->infer_steps;
      cfg.long_list = args->long_list;
      cfg.rule = rule_from(args->rel_frac, args->max_k, args->top_n, args->argmax);

      const auto corpus = load_corpus(args->queries, args->articles);
      fusion::Resources res;
      std::optional<embed::EmbeddingModel> model;
      if (!args->model.empty()) {
        model = embed::load(args->model);
        res.embedding = &*model;
      }
      std::optional<fusion::IndexStore> store;
      if (!args->index.empty()) {
        auto [loaded, prep] = load_index_file(args->index);
        if (prep != args->prep) {
          throw Error(ErrorCode::configuration, "index was built with --prep " + prep + " but retrieval uses " + args->prep);
        }
        store = std::move(loaded);
        res.indexes = &*store;
      }

      std::vector<std::string> warnings;
      const auto results = fusion::run_variant(variant, task, corpus, cfg, res, &warnings);
      print_warnings(warnings);

      run_io::Run run;
      std::vector<ScoredList> lists;
      std::size_t selected = 0;
      for (const auto& [qid, r] : results) {
        run[qid] = r.selected;
        selected += r.selected.size();
        lists.push_back(r.scores);
      }
      run_io::write_run(args->out, run);
      if (!args->scores.empty()) run_io::write_scores(args->scores, lists);
      if (!args->report.empty()) {
        write_json(args->report, json{{"command", "retrieve"},
                                      {"config", sub->config_to_str(true, false)},
                                      {"queries", results.size()},
                                      {"retrieved", selected}});
      }
      std::cerr << "retrieved " << selected << " documents for " << results.size() << " queries\n";
    };
  });
}

// ----------------------------------------------------------------- fuse

struct FuseArgs {
  std::string a;
  std::string b;
  std::string out;
  std::string scores_out;
  std::optional<double> rel_frac;
  std::optional<std::size_t> max_k;
  std::optional<std::size_t> top_n;
  bool argmax = false;
};

void setup_fuse(CLI::App& app, std::function<void()>& action) {
  auto args = std::make_shared<FuseArgs>();
  auto* sub = app.add_subcommand("fuse", "Multiply two score files per document and select");
  sub->add_option("--a", args->a, "First score file")->required();
  sub->add_option("--b", args->b, "Second score file")->required();
  sub->add_option("--out", args->out, "Run file (JSON-lines)")->required();
  sub->add_option("--scores-out", args->scores_out, "Write the fused score lists");
  sub->add_option("--rel-frac", args->rel_frac, "Relative threshold fraction (default 0.8)");
  sub->add_option("--max-k", args->max_k);
  sub->add_option("--top-n", args->top_n);
  sub->add_flag("--argmax", args->argmax);
  sub->callback([args, &action] {
    action = [args] {
      const auto rule = rule_from(args->rel_frac, args->max_k, args->top_n, args->argmax)
                            .value_or(fusion::SelectionRule::top_k_relative(0.8));
      const auto a = run_io::read_scores(args->a);
      const auto b = run_io::read_scores(args->b);
      std::map<std::string, const ScoredList*> by_query;
      for (const auto& l : b) by_query.emplace(l.query_id, &l);
      if (a.size() != b.size()) throw Error(ErrorCode::fusion_mismatch, "score files cover different queries");
      run_io::Run run;
      std::vector<ScoredList> fused;
      for (const auto& la : a) {
        auto it = by_query.find(la.query_id);
        if (it == by_query.end()) throw Error(ErrorCode::fusion_mismatch, "query " + la.query_id + " missing from " + args->b);
        fused.push_back(fusion::fuse_multiply(la, *it->second));
        run[la.query_id] = fused.back().entries.empty() && rule.mode == fusion::SelectionMode::argmax
                               ? std::vector<DocId>{}
                               : fusion::select(fused.back(), rule);
      }
      run_io::write_run(args->out, run);
      if (!args->scores_out.empty()) run_io::write_scores(args->scores_out, fused);
    };
  });
}

// ------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string run;
  std::string gold;
  double beta = 1.0;
  std::optional<std::size_t> map_k;
  std::string json_out;
};

void setup_evaluate(CLI::App& app, std::function<void()>& action) {
  auto args = std::make_shared<EvaluateArgs>();
  auto* sub = app.add_subcommand("evaluate", "Micro precision / recall / F-beta and MAP@k of a run");
  sub->add_option("--run", args->run, "Run file (JSON-lines)")->required();
  sub->add_option("--gold", args->gold, "Query root holding gold.json files")->required();
  sub->add_option("--beta", args->beta)->capture_default_str();
  sub->add_option("--map-k", args->map_k, "Also compute MAP over the top k");
  sub->add_option("--json", args->json_out, "Write the machine-readable report here");
  sub->callback([args, sub, &action] {
    action = [args, sub] {
      if (!(args->beta > 0.0)) throw UsageError("--beta must be > 0");
      if (args->map_k && *args->map_k < 1) throw UsageError("--map-k must be >= 1");
      eval::RunResult rr;
      rr.retrieved = run_io::read_run(args->run);
      rr.gold = corpus::load_gold(args->gold);
      auto report = eval::micro_prf(rr, args->beta);
      if (args->map_k) {
        report.map_at_k = eval::map_at_k(rr, *args->map_k);
        report.k = *args->map_k;
      }
      std::cout << eval::format_table(report);
      json j = report;
      j["config"] = sub->config_to_str(true, false);
      if (args->json_out.empty()) {
        std::cout << j.dump() << "\n";
      } else {
        write_json(args->json_out, j);
      }
    };
  });
}

// --------------------------------------------------------------- entail

struct EntailArgs {
  std::string pairs;
  std::string articles;
  std::string features;
  std::string dev;
  std::string model;
  std::string out;
  entail::TrainOptions opts;
};

std::vector<entail::Example> examples_for(const std::vector<EntailPair>& pairs, const std::string& features_path,
                                          const entail::LexicalContext* ctx, const textprep::PrepConfig& stage1,
                                          const textprep::PrepConfig& stage2) {
  std::vector<entail::Example> out;
  if (!features_path.empty()) {
    auto rows = entail::load_feature_file(features_path);
    std::map<std::string, entail::Example> by_id;
    for (auto& r : rows) by_id.emplace(r.id, std::move(r));
    for (const auto& p : pairs) {
      auto it = by_id.find(p.id);
      if (it == by_id.end()) throw Error(ErrorCode::missing_document, "no feature row for pair " + p.id);
      out.push_back(entail::Example{p.id, it->second.x, p.label});
    }
    return out;
  }
  std::size_t degenerate = 0;
  for (const auto& p : pairs) {
    const auto f = entail::featurize(p, *ctx, stage1, stage2);
    degenerate += f.degenerate ? 1 : 0;
    out.push_back(entail::Example{p.id, f.values(), p.label});
  }
  if (degenerate) std::cerr << "warning: " << degenerate << " pair(s) have an empty side after preprocessing\n";
  return out;
}

double labeled_accuracy(const entail::LinearModel& model, const std::vector<entail::Example>& examples) {
  std::map<std::string, bool> pred;
  std::map<std::string, bool> gold;
  for (const auto& e : examples) {
    if (!e.label) continue;
    pred[e.id] = entail::predict(model, e.x).label;
    gold[e.id] = *e.label;
  }
  return eval::accuracy(pred, gold);
}

void setup_entail(CLI::App& app, Globals& g, std::function<void()>& action) {
  auto* sub = app.add_subcommand("entail", "Yes/No entailment baseline");
  sub->require_subcommand(1);

  auto targs = std::make_shared<EntailArgs>();
  auto* train = sub->add_subcommand("train", "Train the logistic-regression classifier");
  train->add_option("--pairs", targs->pairs, "Labeled pair file (XML)")->required();
  train->add_option("--articles", targs->articles, "Article collection for lexical statistics");
  train->add_option("--features", targs->features, "External feature vectors (JSON-lines) instead of lexical features");
  train->add_option("--dev", targs->dev, "Separate validation pairs; otherwise a seeded 80/20 split");
  train->add_option("--out", targs->out, "Model file (JSON)")->required();
  train->add_option("--seed", targs->opts.seed)->capture_default_str();
  train->add_option("--epochs", targs->opts.epochs)->capture_default_str();
  train->add_option("--lr", targs->opts.lr)->capture_default_str();
  train->add_option("--l2", targs->opts.l2)->capture_default_str();
  train->callback([targs, &g, &action] {
    action = [targs, &g] {
      if (targs->features.empty() && targs->articles.empty()) throw UsageError("entail train needs --articles or --features");
      if (!targs->features.empty() && !targs->dev.empty()) throw UsageError("--dev needs lexical features (drop --features)");
      const auto stage1 = load_prep(g, "stage1");
      const auto stage2 = load_prep(g, "stage2");
      std::optional<entail::LexicalContext> ctx;
      if (targs->features.empty()) {
        const auto dir = textprep::resolve_data_dir(g.data_dir);
        ctx = entail::LexicalContext::fit(corpus::load_articles(targs->articles), stage2,
                                          textprep::load_word_list(dir / "negations.txt"));
      }
      const auto pairs = corpus::load_pairs(targs->pairs);
      auto examples = examples_for(pairs, targs->features, ctx ? &*ctx : nullptr, stage1, stage2);

      std::vector<entail::Example> train_set;
      std::vector<entail::Example> valid_set;
      if (!targs->dev.empty()) {
        train_set = std::move(examples);
        valid_set = examples_for(corpus::load_pairs(targs->dev), {}, &*ctx, stage1, stage2);
      } else {
        std::tie(train_set, valid_set) = entail::split_train_validation(std::move(examples), targs->opts.seed);
      }
      const auto model = entail::train_classifier(train_set, targs->opts);

      json j{{"format", "lexcase-entail"},
             {"version", 1},
             {"feature_source", ctx ? "lexical" : "external"},
             {"classifier", model}};
      if (ctx) {
        j["feature_names"] = entail::PairFeatures::names();
        j["context"] = *ctx;
      }
      std::cerr << "training accuracy " << labeled_accuracy(model, train_set) << " on " << train_set.size() << " pairs\n";
      const bool has_valid_labels =
          std::any_of(valid_set.begin(), valid_set.end(), [](const entail::Example& e) { return e.label.has_value(); });
      if (has_valid_labels) {
        const double acc = labeled_accuracy(model, valid_set);
        j["validation_accuracy"] = acc;
        std::cerr << "validation accuracy " << acc << " on " << valid_set.size() << " pairs\n";
      }
      write_json(targs->out, j);
    };
  });

  auto pargs = std::make_shared<EntailArgs>();
  auto* predict = sub->add_subcommand("predict", "Label pairs with a trained classifier");
  predict->add_option("--model", pargs->model, "Model file from `entail train`")->required();
  predict->add_option("--pairs", pargs->pairs, "Pair file (XML)")->required();
  predict->add_option("--features", pargs->features, "External feature vectors (JSON-lines)");
  predict->add_option("--out", pargs->out, "Predictions (JSON-lines)")->required();
  predict->callback([pargs, &g, &action] {
    action = [pargs, &g] {
      const auto j = read_json(pargs->model);
      if (j.value("format", "") != "lexcase-entail" || j.value("version", 0) != 1) {
        throw Error(ErrorCode::parse, pargs->model + ": not a version-1 entailment model");
      }
      entail::LinearModel model;
      std::optional<entail::LexicalContext> ctx;
      try {
        model = j.at("classifier").get<entail::LinearModel>();
        if (j.at("feature_source") == "lexical") ctx = j.at("context").get<entail::LexicalContext>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, pargs->model + ": " + e.what());
      }
      if (!ctx && pargs->features.empty()) throw UsageError("this model was trained on external features; pass --features");
      if (ctx && !pargs->features.empty()) throw UsageError("this model uses lexical features; drop --features");
      const auto stage1 = load_prep(g, "stage1");
      const auto stage2 = load_prep(g, "stage2");
      const auto pairs = corpus::load_pairs(pargs->pairs);
      const auto examples = examples_for(pairs, pargs->features, ctx ? &*ctx : nullptr, stage1, stage2);

      std::map<std::string, bool> labels;
      std::map<std::string, double> probs;
      std::map<std::string, bool> gold;
      for (const auto& e : examples) {
        const auto p = entail::predict(model, e.x);
        labels[e.id] = p.label;
        probs[e.id] = p.probability;
        if (e.label) gold[e.id] = *e.label;
      }
      run_io::write_predictions(pargs->out, labels, probs);
      if (!gold.empty()) {
        std::map<std::string, bool> labeled;
        for (const auto& [id, l] : gold) labeled[id] = labels.at(id);
        std::cout << "accuracy " << eval::accuracy(labeled, gold) << " on " << gold.size() << " labeled pairs\n";
      }
    };
  });
}

// ---------------------------------------------------------- gen-fixture

struct FixtureArgs {
  std::string style = "case";
  std::size_t queries = 5;
  std::size_t candidates = 20;
  std::size_t articles = 120;
  std::size_t pairs = 60;
  std::uint64_t seed = 3;
  std::string out;
};

void setup_gen_fixture(CLI::App& app, std::function<void()>& action) {
  auto args = std::make_shared<FixtureArgs>();
  auto* sub = app.add_subcommand("gen-fixture", "Write a deterministic synthetic corpus with gold labels");
  sub->add_option("--style", args->style, "case | statute | entail")
      ->check(CLI::IsMember({"case", "statute", "entail"}))
      ->capture_default_str();
  sub->add_option("--queries", args->queries)->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--candidates", args->candidates, "Candidates per query (case style)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--articles", args->articles, "Article count (statute / entail styles)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--pairs", args->pairs, "Pair count (entail style)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", args->seed)->capture_default_str();
  sub->add_option("--out", args->out, "Output directory")->required();
  sub->callback([args, &action] {
    action = [args] {
      if (args->style == "case") {
        fixture::write_cases(args->out, fixture::generate_cases({args->queries, args->candidates, args->seed}));
      } else if (args->style == "statute") {
        fixture::write_statute(args->out, fixture::generate_statute({args->queries, args->articles, args->seed}));
      } else {
        fixture::write_entail(args->out, fixture::generate_entail({args->pairs, args->articles, args->seed}));
      }
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexcase: legal case retrieval and entailment toolkit"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--data-dir", globals.data_dir, "Directory with stopwords.txt / stemmer_rules.tsv (or $LEXCASE_DATA_DIR)");

  std::function<void()> action;
  setup_index(app, globals, action);
  setup_train_embed(app, globals, action);
  setup_retrieve(app, globals, action);
  setup_fuse(app, action);
  setup_evaluate(app, action);
  setup_entail(app, globals, action);
  setup_gen_fixture(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
