#include "lexcase/entail_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "lexcase/error.hpp"
#include "lexcase/random.hpp"

namespace lexcase::entail {

std::vector<double> PairFeatures::values() const {
  return {bm25_t2_given_t1, tfidf_cosine, token_overlap_jaccard, len_ratio, negation_mismatch};
}

const std::vector<std::string>& PairFeatures::names() {
  static const std::vector<std::string> kNames = {"bm25_t2_given_t1", "tfidf_cosine", "token_overlap_jaccard",
                                                  "len_ratio", "negation_mismatch"};
  return kNames;
}

LexicalContext LexicalContext::fit(std::span<const Document> articles, const textprep::PrepConfig& stage2,
                                   std::unordered_set<std::string> negations, const bm25::Params& params) {
  std::vector<Document> docs(articles.begin(), articles.end());
  textprep::preprocess_all(docs, stage2);
  params.validate();
  return LexicalContext{bm25::build_index(docs), params, tfidf::fit(docs), std::move(negations)};
}

PairFeatures featurize(const EntailPair& pair, const LexicalContext& ctx, const textprep::PrepConfig& stage1,
                       const textprep::PrepConfig& stage2) {
  const auto t1 = textprep::preprocess_text(pair.t1.text, stage2);
  const auto t2 = textprep::preprocess_text(pair.t2.text, stage2);

  PairFeatures f;
  f.degenerate = t1.empty() || t2.empty();
  f.bm25_t2_given_t1 = bm25::score_external(ctx.bm25, ctx.bm25_params, t2, t1);
  f.tfidf_cosine = tfidf::cosine(tfidf::transform(ctx.tfidf, t1), tfidf::transform(ctx.tfidf, t2));

  const std::set<std::string> s1(t1.begin(), t1.end());
  const std::set<std::string> s2(t2.begin(), t2.end());
  std::size_t common = 0;
  for (const auto& t : s1) common += s2.count(t);
  const std::size_t uni = s1.size() + s2.size() - common;
  f.token_overlap_jaccard = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);

  constexpr double kMaxRatio = 16.0;
  if (t1.empty() && t2.empty()) {
    f.len_ratio = 1.0;
  } else if (t1.empty()) {
    f.len_ratio = kMaxRatio;
  } else {
    f.len_ratio = std::clamp(static_cast<double>(t2.size()) / static_cast<double>(t1.size()), 1.0 / kMaxRatio, kMaxRatio);
  }

  auto has_negation = [&](const std::string& text) {
    const auto tokens = textprep::preprocess_text(text, stage1);
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return ctx.negations.contains(t); });
  };
  f.negation_mismatch = has_negation(pair.t1.text) != has_negation(pair.t2.text) ? 1.0 : 0.0;
  return f;
}

std::vector<double> LinearModel::standardize(std::span<const double> x) const {
  if (x.size() != num_features) {
    throw Error(ErrorCode::precondition, "expected " + std::to_string(num_features) + " features, got " +
                                             std::to_string(x.size()));
  }
  std::vector<double> z(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) z[i] = (x[kept[i]] - mean[i]) / stddev[i];
  return z;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log p + (1-y) log(1-p)] computed from the logit.
double logistic_loss(double z, bool y) {
  const double s = y ? -z : z;
  return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

double logit(const LinearModel& m, std::span<const double> z) {
  double v = m.bias;
  for (std::size_t i = 0; i < z.size(); ++i) v += m.weights[i] * z[i];
  return v;
}

double objective(const LinearModel& m, const std::vector<std::vector<double>>& z, const std::vector<bool>& y, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += logistic_loss(logit(m, z[i]), y[i]);
  double reg = 0.0;
  for (double w : m.weights) reg += w * w;
  return loss / static_cast<double>(z.size()) + 0.5 * l2 * reg;
}

}  // namespace

LinearModel train_classifier(std::span<const Example> examples, const TrainOptions& options) {
  if (options.epochs < 1 || !(options.lr > 0.0) || options.l2 < 0.0) {
    throw Error(ErrorCode::invalid_config, "classifier needs epochs >= 1, lr > 0, l2 >= 0");
  }
  std::vector<const Example*> labeled;
  for (const auto& e : examples) {
    if (e.label) labeled.push_back(&e);
  }
  const auto positives = std::count_if(labeled.begin(), labeled.end(), [](const Example* e) { return *e->label; });
  if (labeled.size() < 2 || positives == 0 || positives == static_cast<long>(labeled.size())) {
    throw Error(ErrorCode::degenerate_labels, "training needs at least two labeled pairs covering both labels");
  }

  LinearModel m;
  m.seed = options.seed;
  m.num_features = labeled.front()->x.size();
  const double n = static_cast<double>(labeled.size());
  for (const Example* e : labeled) {
    if (e->x.size() != m.num_features) throw Error(ErrorCode::precondition, "example " + e->id + " has the wrong width");
  }
  for (std::size_t f = 0; f < m.num_features; ++f) {
    double mu = 0.0;
    for (const Example* e : labeled) mu += e->x[f];
    mu /= n;
    double var = 0.0;
    for (const Example* e : labeled) var += (e->x[f] - mu) * (e->x[f] - mu);
    const double sd = std::sqrt(var / n);
    if (sd > 1e-12 * std::max(1.0, std::abs(mu))) {
      m.kept.push_back(f);
      m.mean.push_back(mu);
      m.stddev.push_back(sd);
    } else {
      m.dropped.push_back(f);
    }
  }
  m.weights.assign(m.kept.size(), 0.0);
  // Start from the base-rate log-odds so a model without usable features
  // predicts the majority class.
  const double rate = static_cast<double>(positives) / n;
  m.bias = std::log(rate / (1.0 - rate));

  std::vector<std::vector<double>> z;
  std::vector<bool> y;
  for (const Example* e : labeled) {
    z.push_back(m.standardize(e->x));
    y.push_back(*e->label);
  }

  const std::size_t d = m.kept.size();
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  std::vector<double> grad(d);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (options.full_batch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double err = sigmoid(logit(m, z[i])) - (y[i] ? 1.0 : 0.0);
        for (std::size_t k = 0; k < d; ++k) grad[k] += err * z[i][k];
        grad_b += err;
      }
      for (std::size_t k = 0; k < d; ++k) m.weights[k] -= options.lr * (grad[k] / n + options.l2 * m.weights[k]);
      m.bias -= options.lr * grad_b / n;
    } else {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      for (std::size_t i : order) {
        const double err = sigmoid(logit(m, z[i])) - (y[i] ? 1.0 : 0.0);
        for (std::size_t k = 0; k < d; ++k) m.weights[k] -= options.lr * (err * z[i][k] + options.l2 * m.weights[k]);
        m.bias -= options.lr * err;
      }
    }
    m.loss_history.push_back(objective(m, z, y, options.l2));
  }
  return m;
}

Prediction predict(const LinearModel& model, std::span<const double> x) {
  const auto z = model.standardize(x);
  constexpr double kEps = 1e-15;
  const double p = std::clamp(sigmoid(logit(model, z)), kEps, 1.0 - kEps);
  return Prediction{p > 0.5, p};
}

std::pair<std::vector<Example>, std::vector<Example>> split_train_validation(std::vector<Example> examples,
                                                                            std::uint64_t seed,
                                                                            double train_fraction) {
  Rng rng(seed);
  for (std::size_t i = examples.size(); i > 1; --i) std::swap(examples[i - 1], examples[rng.below(i)]);
  const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(examples.size())));
  std::vector<Example> train(std::make_move_iterator(examples.begin()),
                             std::make_move_iterator(examples.begin() + static_cast<long>(cut)));
  std::vector<Example> valid(std::make_move_iterator(examples.begin() + static_cast<long>(cut)),
                             std::make_move_iterator(examples.end()));
  return {std::move(train), std::move(valid)};
}

std::vector<Example> load_feature_file(const std::filesystem::path& path) {
  const auto content = corpus::read_text_file(path);
  std::vector<Example> out;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      Example e{j.at("id").get<std::string>(), j.at("features").get<std::vector<double>>(), std::nullopt};
      if (!out.empty() && e.x.size() != out.front().x.size()) throw Error(ErrorCode::parse, where + ": feature width differs");
      if (!seen.insert(e.id).second) throw Error(ErrorCode::duplicate_id, where + ": duplicate id " + e.id);
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::parse, where + ": " + ex.what());
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const LexicalContext& ctx) {
  std::vector<std::string> neg(ctx.negations.begin(), ctx.negations.end());
  std::sort(neg.begin(), neg.end());
  j = nlohmann::json{{"bm25", ctx.bm25},
                     {"k1", ctx.bm25_params.k1},
                     {"b", ctx.bm25_params.b},
                     {"tfidf", ctx.tfidf},
                     {"negations", neg}};
}

void from_json(const nlohmann::json& j, LexicalContext& ctx) {
  ctx.bm25 = j.at("bm25").get<bm25::InvertedIndex>();
  ctx.bm25_params = bm25::Params{j.at("k1").get<double>(), j.at("b").get<double>()};
  ctx.tfidf = j.at("tfidf").get<tfidf::TfidfModel>();
  const auto neg = j.at("negations").get<std::vector<std::string>>();
  ctx.negations = {neg.begin(), neg.end()};
}

void to_json(nlohmann::json& j, const LinearModel& m) {
  j = nlohmann::json{{"num_features", m.num_features}, {"kept", m.kept},   {"dropped", m.dropped},
                     {"mean", m.mean},                 {"stddev", m.stddev}, {"weights", m.weights},
                     {"bias", m.bias},                 {"seed", m.seed},   {"loss_history", m.loss_history}};
}

void from_json(const nlohmann::json& j, LinearModel& m) {
  m.num_features = j.at("num_features").get<std::size_t>();
  m.kept = j.at("kept").get<std::vector<std::size_t>>();
  m.dropped = j.at("dropped").get<std::vector<std::size_t>>();
  m.mean = j.at("mean").get<std::vector<double>>();
  m.stddev = j.at("stddev").get<std::vector<double>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.loss_history = j.value("loss_history", std::vector<double>{});
  if (m.mean.size() != m.kept.size() || m.stddev.size() != m.kept.size() || m.weights.size() != m.kept.size()) {
    throw Error(ErrorCode::parse, "linear model: inconsistent feature arrays");
  }
}

}  // namespace lexcase::entail
