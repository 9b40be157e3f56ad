#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lexcase/bm25_index.hpp"
#include "lexcase/corpus_io.hpp"
#include "lexcase/textprep.hpp"
#include "lexcase/tfidf.hpp"

namespace lexcase::entail {

/// Lexical similarity features of a (t1, t2) pair.
struct PairFeatures {
  double bm25_t2_given_t1 = 0.0;      // t2 as query against t1 as document
  double tfidf_cosine = 0.0;
  double token_overlap_jaccard = 0.0;
  double len_ratio = 1.0;             // |t2| / |t1| in tokens, clamped to [1/16, 16]
  double negation_mismatch = 0.0;     // 1 when exactly one side has a negation word
  bool degenerate = false;            // t1 or t2 empty after preprocessing

  std::vector<double> values() const;
  static const std::vector<std::string>& names();
};

/// Statistics fitted over the article collection and shared by every pair.
struct LexicalContext {
  bm25::InvertedIndex bm25;
  bm25::Params bm25_params;
  tfidf::TfidfModel tfidf;
  std::unordered_set<std::string> negations;

  static LexicalContext fit(std::span<const Document> articles, const textprep::PrepConfig& stage2,
                            std::unordered_set<std::string> negations, const bm25::Params& params = {});
};

/// Similarity features use stage-2 tokens; the negation check looks at
/// stage-1 tokens because the stopword list removes "not", "no" and "nor".
PairFeatures featurize(const EntailPair& pair, const LexicalContext& ctx, const textprep::PrepConfig& stage1,
                       const textprep::PrepConfig& stage2);

/// A feature vector with an optional label; also the row format of an
/// external feature file.
struct Example {
  std::string id;
  std::vector<double> x;
  std::optional<bool> label;
};

struct TrainOptions {
  int epochs = 200;
  double lr = 0.1;
  std::uint64_t seed = 7;
  double l2 = 1e-4;
  bool full_batch = false;  // gradient descent on the whole set instead of shuffled SGD
};

/// Logistic regression over standardized features. Features with zero
/// variance on the training set are dropped and listed in `dropped`.
struct LinearModel {
  std::size_t num_features = 0;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> dropped;
  std::vector<double> mean;    // per kept feature
  std::vector<double> stddev;  // per kept feature, > 0
  std::vector<double> weights; // per kept feature
  double bias = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> loss_history;  // regularized mean loss after each epoch

  /// Standardized kept features of a raw vector.
  std::vector<double> standardize(std::span<const double> x) const;
};

/// Needs at least two labeled examples covering both classes
/// (degenerate_labels otherwise). Deterministic for a fixed seed.
LinearModel train_classifier(std::span<const Example> examples, const TrainOptions& options);

struct Prediction {
  bool label = false;
  double probability = 0.5;  // in (0, 1)
};

/// probability = sigmoid(w.x + b), label = probability > 0.5.
Prediction predict(const LinearModel& model, std::span<const double> x);

/// Seeded shuffle, then the first `train_fraction` of the items train.
std::pair<std::vector<Example>, std::vector<Example>> split_train_validation(std::vector<Example> examples,
                                                                            std::uint64_t seed,
                                                                            double train_fraction = 0.8);

/// JSON-lines `{"id": "...", "features": [numbers...]}`; every row must have
/// the same width.
std::vector<Example> load_feature_file(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const LexicalContext& ctx);
void from_json(const nlohmann::json& j, LexicalContext& ctx);
void to_json(nlohmann::json& j, const LinearModel& model);
void from_json(const nlohmann::json& j, LinearModel& model);

}  // namespace lexcase::entail
