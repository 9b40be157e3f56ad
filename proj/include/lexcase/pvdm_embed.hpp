#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexcase/corpus_io.hpp"
#include "lexcase/scored_list.hpp"

namespace lexcase::embed {

struct EmbedConfig {
  int dim = 100;
  int window = 5;
  int epochs = 50;
  int negatives = 5;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t seed = 1;
  int min_count = 2;

  void validate() const;

  friend bool operator==(const EmbedConfig&, const EmbedConfig&) = default;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// PV-DM model: input (context) word vectors, output vectors for negative
/// sampling, one vector per training document.
struct EmbeddingModel {
  EmbedConfig config;
  std::vector<std::string> words;      // row order: count descending, then term
  std::vector<std::uint64_t> counts;   // parallel to words
  Matrix word_in;
  Matrix word_out;
  std::map<DocId, std::vector<double>> doc_vectors;
  std::vector<double> epoch_loss;      // mean per-position loss of each epoch

  /// Cumulative unigram^0.75 distribution over rows; derived from counts.
  std::vector<double> unigram_cdf;
  std::unordered_map<std::string, std::size_t> vocab;

  std::optional<std::size_t> row_of(const std::string& term) const;
  /// Draws a row from the unigram^0.75 distribution given u in [0, 1).
  std::size_t sample_row(double u) const;
  /// Rebuilds `vocab` and `unigram_cdf` from `words` / `counts`.
  void rebuild_tables();

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
    return a.config == b.config && a.words == b.words && a.counts == b.counts && a.word_in == b.word_in &&
           a.word_out == b.word_out && a.doc_vectors == b.doc_vectors && a.epoch_loss == b.epoch_loss;
  }
};

/// Trains on each document's `tokens`. Single-threaded; bit-reproducible for
/// a fixed seed. Throws degenerate_corpus when no token reaches min_count.
EmbeddingModel train(std::span<const Document> docs, const EmbedConfig& cfg);

/// Fits a fresh document vector against the frozen word matrices.
/// `steps` passes over the tokens; steps < 1 is a precondition error. When
/// every token is out of vocabulary the seeded initial vector is returned
/// and a message is appended to `warnings` (if given).
std::vector<double> infer(const EmbeddingModel& model, std::span<const std::string> tokens, int steps,
                          std::vector<std::string>* warnings = nullptr);

/// Cosine of two dense vectors; 0 when either has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// Candidates use their trained vector when their id is a training
/// document, otherwise an inferred one. The query is always inferred.
ScoredList rank_embed(const EmbeddingModel& model, std::span<const std::string> query_tokens,
                      std::span<const Document> candidates, int infer_steps, const std::string& query_id = {},
                      std::vector<std::string>* warnings = nullptr);

void save(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load(const std::filesystem::path& path);
std::string serialize(const EmbeddingModel& model);
EmbeddingModel deserialize(std::string_view bytes);

namespace detail {

/// One PV-DM prediction: the doc vector and the word_in rows of `context`
/// are averaged into the hidden vector, which scores `target` (label 1)
/// against `negatives` (label 0) with logistic loss.
struct Example {
  std::span<const std::size_t> context;
  std::size_t target;
  std::span<const std::size_t> negatives;
};

/// Mean of the doc vector and the context rows.
void hidden(std::span<const double> doc, const Matrix& word_in, std::span<const std::size_t> context,
            std::span<double> out);

/// Forward pass only.
double example_loss(std::span<const double> doc, const Matrix& word_in, const Matrix& word_out, const Example& ex);

/// Loss of `h` against target/negatives. Adds dLoss/dh into `grad_h` and
/// reports dLoss/d(word_out row) = coef * h through `on_out(row, coef)`;
/// the callback may update word_out in place.
template <class OnOut>
double negative_sampling(std::span<const double> h, std::size_t target, std::span<const std::size_t> negatives,
                         const Matrix& word_out, std::span<double> grad_h, OnOut&& on_out);

double log_sigmoid(double x);
double sigmoid(double x);

}  // namespace detail
}  // namespace lexcase::embed

#include "lexcase/pvdm_embed_inl.hpp"
