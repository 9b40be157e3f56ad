#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lexcase/corpus_io.hpp"

namespace lexcase::eval {

/// Rank-ordered retrievals and gold sets per query. A query may appear in
/// either map; a missing side counts as empty.
struct RunResult {
  std::map<std::string, std::vector<DocId>> retrieved;
  std::map<std::string, std::set<DocId>> gold;
};

struct Counts {
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
  std::size_t correct = 0;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = 1.0;
  std::optional<double> map_at_k;
  std::optional<std::size_t> k;
  Counts counts;
  bool precision_undefined = false;  // nothing retrieved
  bool recall_undefined = false;     // no gold at all
};

/// (1+β²)PR / (β²P + R), or 0 when P + R = 0.
double f_beta(double precision, double recall, double beta);

/// Pooled counts over every query in either map. Zero denominators yield 0
/// and set the matching *_undefined flag. beta must be > 0.
MetricsReport micro_prf(const RunResult& run, double beta);

/// Mean over queries with nonempty gold of
/// (1/|gold|) * sum of precision@r over relevant ranks r <= k.
/// Throws undefined_metric when no query has gold.
double map_at_k(const RunResult& run, std::size_t k);

/// AP of a single ranked list.
double average_precision(const std::vector<DocId>& ranked, const std::set<DocId>& gold, std::size_t k);

/// Share of gold ids whose prediction matches. Predictions for ids absent
/// from gold are a precondition error; an empty overlap is undefined_metric.
double accuracy(const std::map<std::string, bool>& predictions, const std::map<std::string, bool>& gold);

void to_json(nlohmann::json& j, const MetricsReport& report);

/// Fixed-width text table of the report.
std::string format_table(const MetricsReport& report);

}  // namespace lexcase::eval
