#include "lexcase/eval_metrics.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"

namespace lexcase::eval {

double f_beta(double precision, double recall, double beta) {
  if (precision + recall <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

MetricsReport micro_prf(const RunResult& run, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::precondition, "beta must be > 0");
  static const std::set<DocId> kNoGold;
  static const std::vector<DocId> kNothing;

  std::set<std::string> queries;
  for (const auto& [q, _] : run.retrieved) queries.insert(q);
  for (const auto& [q, _] : run.gold) queries.insert(q);

  MetricsReport r;
  r.beta = beta;
  for (const auto& q : queries) {
    auto rit = run.retrieved.find(q);
    auto git = run.gold.find(q);
    const auto& got = rit == run.retrieved.end() ? kNothing : rit->second;
    const auto& gold = git == run.gold.end() ? kNoGold : git->second;
    const std::set<DocId> distinct(got.begin(), got.end());
    r.counts.retrieved += distinct.size();
    r.counts.relevant += gold.size();
    for (const auto& id : distinct) r.counts.correct += gold.count(id);
  }
  r.precision_undefined = r.counts.retrieved == 0;
  r.recall_undefined = r.counts.relevant == 0;
  r.precision = r.precision_undefined ? 0.0 : static_cast<double>(r.counts.correct) / static_cast<double>(r.counts.retrieved);
  r.recall = r.recall_undefined ? 0.0 : static_cast<double>(r.counts.correct) / static_cast<double>(r.counts.relevant);
  r.f_beta = f_beta(r.precision, r.recall, beta);
  return r;
}

double average_precision(const std::vector<DocId>& ranked, const std::set<DocId>& gold, std::size_t k) {
  if (gold.empty()) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  std::set<DocId> seen;
  for (std::size_t r = 0; r < ranked.size() && r < k; ++r) {
    if (!seen.insert(ranked[r]).second) continue;
    if (gold.contains(ranked[r])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(gold.size());
}

double map_at_k(const RunResult& run, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::precondition, "MAP cutoff k must be >= 1");
  static const std::vector<DocId> kNothing;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [q, gold] : run.gold) {
    if (gold.empty()) continue;
    auto it = run.retrieved.find(q);
    sum += average_precision(it == run.retrieved.end() ? kNothing : it->second, gold, k);
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::undefined_metric, "MAP is undefined: no query has gold documents");
  return sum / static_cast<double>(n);
}

double accuracy(const std::map<std::string, bool>& predictions, const std::map<std::string, bool>& gold) {
  std::size_t total = 0;
  std::size_t right = 0;
  for (const auto& [id, label] : predictions) {
    auto it = gold.find(id);
    if (it == gold.end()) throw Error(ErrorCode::precondition, "prediction for " + id + " has no gold label");
    ++total;
    right += label == it->second ? 1 : 0;
  }
  if (total == 0) throw Error(ErrorCode::undefined_metric, "accuracy is undefined: no labeled predictions");
  return static_cast<double>(right) / static_cast<double>(total);
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = nlohmann::json{{"precision", r.precision},
                     {"recall", r.recall},
                     {"f_beta", r.f_beta},
                     {"beta", r.beta},
                     {"counts", {{"retrieved", r.counts.retrieved}, {"relevant", r.counts.relevant}, {"correct", r.counts.correct}}},
                     {"precision_undefined", r.precision_undefined},
                     {"recall_undefined", r.recall_undefined}};
  if (r.map_at_k) {
    j["map_at_k"] = *r.map_at_k;
    j["k"] = *r.k;
  }
}

std::string format_table(const MetricsReport& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-12s %-10s %-10s %-10s", "", "Precision", "Recall", "F-measure");
  out += buf;
  if (r.map_at_k) out += "  MAP@" + std::to_string(*r.k);
  out += '\n';
  std::snprintf(buf, sizeof buf, "%-12s %-10.4f %-10.4f %-10.4f", ("beta=" + std::to_string(r.beta).substr(0, 4)).c_str(),
                r.precision, r.recall, r.f_beta);
  out += buf;
  if (r.map_at_k) {
    std::snprintf(buf, sizeof buf, "  %.4f", *r.map_at_k);
    out += buf;
  }
  out += '\n';
  std::snprintf(buf, sizeof buf, "retrieved=%zu relevant=%zu correct=%zu\n", r.counts.retrieved, r.counts.relevant,
                r.counts.correct);
  out += buf;
  return out;
}

}  // namespace lexcase::eval
