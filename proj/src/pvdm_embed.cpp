#include "lexcase/pvdm_embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "lexcase/corpus_io.hpp"
#include "lexcase/error.hpp"
#include "lexcase/random.hpp"

namespace lexcase::embed {

void EmbedConfig::validate() const {
  if (dim <= 0) throw Error(ErrorCode::invalid_config, "embedding dim must be > 0");
  if (window < 1) throw Error(ErrorCode::invalid_config, "window must be >= 1");
  if (epochs < 1) throw Error(ErrorCode::invalid_config, "epochs must be >= 1");
  if (negatives < 1) throw Error(ErrorCode::invalid_config, "negatives must be >= 1");
  if (min_count < 1) throw Error(ErrorCode::invalid_config, "min_count must be >= 1");
  if (!(lr_end > 0.0) || !(lr_start >= lr_end)) {
    throw Error(ErrorCode::invalid_config, "learning rates must satisfy lr_start >= lr_end > 0");
  }
}

std::optional<std::size_t> EmbeddingModel::row_of(const std::string& term) const {
  auto it = vocab.find(term);
  if (it == vocab.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingModel::sample_row(double u) const {
  auto it = std::upper_bound(unigram_cdf.begin(), unigram_cdf.end(), u);
  if (it == unigram_cdf.end()) --it;
  return static_cast<std::size_t>(it - unigram_cdf.begin());
}

void EmbeddingModel::rebuild_tables() {
  vocab.clear();
  unigram_cdf.clear();
  double acc = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    vocab.emplace(words[i], i);
    acc += std::pow(static_cast<double>(counts[i]), 0.75);
    unigram_cdf.push_back(acc);
  }
  for (double& c : unigram_cdf) c /= acc;
}

namespace detail {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  // log σ(x) = -softplus(-x)
  return -(std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))));
}

void hidden(std::span<const double> doc, const Matrix& word_in, std::span<const std::size_t> context,
            std::span<double> out) {
  std::copy(doc.begin(), doc.end(), out.begin());
  for (std::size_t c : context) {
    const auto r = word_in.row(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
  }
  const double inv = 1.0 / static_cast<double>(context.size() + 1);
  for (auto& v : out) v *= inv;
}

double example_loss(std::span<const double> doc, const Matrix& word_in, const Matrix& word_out, const Example& ex) {
  std::vector<double> h(doc.size());
  hidden(doc, word_in, ex.context, h);
  auto score = [&](std::size_t row) {
    const auto u = word_out.row(row);
    double f = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) f += u[i] * h[i];
    return f;
  };
  double loss = -log_sigmoid(score(ex.target));
  for (std::size_t n : ex.negatives) loss -= log_sigmoid(-score(n));
  return loss;
}

}  // namespace detail

namespace {

void init_vector(Rng& rng, std::span<double> v) {
  const double scale = 1.0 / static_cast<double>(v.size());
  for (auto& x : v) x = (rng.uniform() - 0.5) * scale;
}

std::vector<std::size_t> encode(const EmbeddingModel& model, std::span<const std::string> tokens) {
  std::vector<std::size_t> rows;
  rows.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto r = model.row_of(t)) rows.push_back(*r);
  }
  return rows;
}

// Per-position scratch buffers for one SGD pass.
struct Workspace {
  std::vector<double> h;
  std::vector<double> grad_h;
  std::vector<std::size_t> context;
  std::vector<std::size_t> negatives;

  explicit Workspace(std::size_t dim) : h(dim), grad_h(dim) {}
};

// One SGD update at position t of `seq`. Word matrices are updated only when
// the corresponding pointer is non-null. Returns the example loss.
double sgd_position(const EmbeddingModel& model, std::span<double> doc, std::span<const std::size_t> seq,
                    std::size_t t, double lr, Matrix* word_in, Matrix* word_out, Rng& rng, Workspace& ws) {
  const auto& cfg = model.config;
  const std::size_t window = static_cast<std::size_t>(cfg.window);
  const std::size_t lo = t >= window ? t - window : 0;
  const std::size_t hi = std::min(seq.size() - 1, t + window);
  ws.context.clear();
  for (std::size_t c = lo; c <= hi; ++c) {
    if (c != t) ws.context.push_back(seq[c]);
  }
  const std::size_t target = seq[t];
  ws.negatives.clear();
  for (int k = 0; k < cfg.negatives; ++k) {
    const std::size_t row = model.sample_row(rng.uniform());
    if (row != target) ws.negatives.push_back(row);
  }

  detail::hidden(doc, model.word_in, ws.context, ws.h);
  std::fill(ws.grad_h.begin(), ws.grad_h.end(), 0.0);
  const double loss = detail::negative_sampling(ws.h, target, ws.negatives, model.word_out, ws.grad_h,
                                                [&](std::size_t row, double coef) {
                                                  if (!word_out) return;
                                                  auto u = word_out->row(row);
                                                  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= lr * coef * ws.h[i];
                                                });

  const double step = lr / static_cast<double>(ws.context.size() + 1);
  for (std::size_t i = 0; i < doc.size(); ++i) doc[i] -= step * ws.grad_h[i];
  if (word_in) {
    for (std::size_t c : ws.context) {
      auto r = word_in->row(c);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= step * ws.grad_h[i];
    }
  }
  return loss;
}

double decayed_lr(const EmbedConfig& cfg, std::uint64_t step, std::uint64_t total) {
  if (total <= 1) return cfg.lr_start;
  const double frac = static_cast<double>(step) / static_cast<double>(total - 1);
  return cfg.lr_start - (cfg.lr_start - cfg.lr_end) * frac;
}

}  // namespace

EmbeddingModel train(std::span<const Document> docs, const EmbedConfig& cfg) {
  cfg.validate();
  if (docs.empty()) throw Error(ErrorCode::empty_corpus, "cannot train embeddings on an empty corpus");

  std::map<std::string, std::uint64_t> freq;
  std::set<DocId> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw Error(ErrorCode::duplicate_id, "document id " + d.id + " appears twice");
    for (const auto& t : d.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [term, n] : freq) {
    if (n >= static_cast<std::uint64_t>(cfg.min_count)) kept.emplace_back(term, n);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::degenerate_corpus, "no token occurs at least min_count=" + std::to_string(cfg.min_count) + " times");
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  EmbeddingModel model;
  model.config = cfg;
  for (auto& [term, n] : kept) {
    model.words.push_back(term);
    model.counts.push_back(n);
  }
  model.rebuild_tables();

  const std::size_t dim = static_cast<std::size_t>(cfg.dim);
  const std::size_t vocab_size = model.words.size();
  Rng rng(cfg.seed);
  model.word_in = Matrix(vocab_size, dim);
  model.word_out = Matrix(vocab_size, dim);
  for (std::size_t r = 0; r < vocab_size; ++r) init_vector(rng, model.word_in.row(r));

  std::vector<std::vector<std::size_t>> sequences;
  std::vector<std::vector<double>*> doc_vecs;
  std::uint64_t tokens_per_epoch = 0;
  for (const auto& d : docs) {
    auto& v = model.doc_vectors[d.id];
    v.resize(dim);
    init_vector(rng, v);
    doc_vecs.push_back(&v);
    sequences.push_back(encode(model, d.tokens));
    tokens_per_epoch += sequences.back().size();
  }

  const std::uint64_t total = tokens_per_epoch * static_cast<std::uint64_t>(cfg.epochs);
  std::uint64_t step = 0;
  Workspace ws(dim);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (std::size_t d = 0; d < sequences.size(); ++d) {
      const auto& seq = sequences[d];
      for (std::size_t t = 0; t < seq.size(); ++t) {
        loss_sum += sgd_position(model, *doc_vecs[d], seq, t, decayed_lr(cfg, step++, total), &model.word_in,
                                 &model.word_out, rng, ws);
      }
    }
    model.epoch_loss.push_back(tokens_per_epoch ? loss_sum / static_cast<double>(tokens_per_epoch) : 0.0);
  }
  return model;
}

std::vector<double> infer(const EmbeddingModel& model, std::span<const std::string> tokens, int steps,
                          std::vector<std::string>* warnings) {
  if (steps < 1) throw Error(ErrorCode::precondition, "inference needs at least one step");
  std::uint64_t h = fnv1a("pvdm-infer");
  for (const auto& t : tokens) {
    h = fnv1a(t, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  Rng rng(splitmix64(model.config.seed ^ h));

  const std::size_t dim = static_cast<std::size_t>(model.config.dim);
  std::vector<double> doc(dim);
  init_vector(rng, doc);

  const auto seq = encode(model, tokens);
  if (seq.empty()) {
    if (warnings) warnings->push_back("inference: all " + std::to_string(tokens.size()) + " tokens are out of vocabulary");
    return doc;
  }

  const std::uint64_t total = seq.size() * static_cast<std::uint64_t>(steps);
  std::uint64_t step = 0;
  Workspace ws(dim);
  for (int pass = 0; pass < steps; ++pass) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      sgd_position(model, doc, seq, t, decayed_lr(model.config, step++, total), nullptr, nullptr, rng, ws);
    }
  }
  return doc;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

ScoredList rank_embed(const EmbeddingModel& model, std::span<const std::string> query_tokens,
                      std::span<const Document> candidates, int infer_steps, const std::string& query_id,
                      std::vector<std::string>* warnings) {
  const auto q = infer(model, query_tokens, infer_steps, warnings);
  ScoredList list;
  list.query_id = query_id;
  list.entries.reserve(candidates.size());
  for (const auto& c : candidates) {
    double s;
    if (auto it = model.doc_vectors.find(c.id); it != model.doc_vectors.end()) {
      s = cosine(q, it->second);
    } else {
      s = cosine(q, infer(model, c.tokens, infer_steps, warnings));
    }
    list.entries.push_back(ScoredEntry{c.id, s});
  }
  list.sort();
  return list;
}

// Binary layout, all integers and doubles little-endian:
//   "LXPVDM\0\0" u32 version(=1)
//   i32 dim window epochs negatives min_count; f64 lr_start lr_end; u64 seed
//   u64 V; V x (str word, u64 count); V*dim f64 word_in; V*dim f64 word_out
//   u64 D; D x (str id, dim f64); u64 E; E f64 epoch_loss
// where str = u64 length + bytes.
namespace {

constexpr char kMagic[8] = {'L', 'X', 'P', 'V', 'D', 'M', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    out_ += s;
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const auto n = u64();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto v = in_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > in_.size() - pos_) throw Error(ErrorCode::parse, "embedding model file is truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const EmbeddingModel& model) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  const auto& c = model.config;
  w.i32(c.dim);
  w.i32(c.window);
  w.i32(c.epochs);
  w.i32(c.negatives);
  w.i32(c.min_count);
  w.f64(c.lr_start);
  w.f64(c.lr_end);
  w.u64(c.seed);
  w.u64(model.words.size());
  for (std::size_t i = 0; i < model.words.size(); ++i) {
    w.str(model.words[i]);
    w.u64(model.counts[i]);
  }
  for (double v : model.word_in.data) w.f64(v);
  for (double v : model.word_out.data) w.f64(v);
  w.u64(model.doc_vectors.size());
  for (const auto& [id, vec] : model.doc_vectors) {
    w.str(id);
    for (double v : vec) w.f64(v);
  }
  w.u64(model.epoch_loss.size());
  for (double v : model.epoch_loss) w.f64(v);
  return w.take();
}

EmbeddingModel deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) {
    throw Error(ErrorCode::parse, "not an embedding model file");
  }
  if (const auto v = r.u32(); v != kVersion) {
    throw Error(ErrorCode::parse, "unsupported embedding model version " + std::to_string(v));
  }
  EmbeddingModel m;
  auto& c = m.config;
  c.dim = r.i32();
  c.window = r.i32();
  c.epochs = r.i32();
  c.negatives = r.i32();
  c.min_count = r.i32();
  c.lr_start = r.f64();
  c.lr_end = r.f64();
  c.seed = r.u64();
  c.validate();
  const auto dim = static_cast<std::size_t>(c.dim);
  const auto vocab_size = r.u64();
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    m.words.push_back(r.str());
    m.counts.push_back(r.u64());
  }
  m.word_in = Matrix(vocab_size, dim);
  m.word_out = Matrix(vocab_size, dim);
  for (auto& v : m.word_in.data) v = r.f64();
  for (auto& v : m.word_out.data) v = r.f64();
  const auto ndocs = r.u64();
  for (std::uint64_t i = 0; i < ndocs; ++i) {
    auto id = r.str();
    std::vector<double> vec(dim);
    for (auto& v : vec) v = r.f64();
    m.doc_vectors.emplace(std::move(id), std::move(vec));
  }
  const auto nloss = r.u64();
  for (std::uint64_t i = 0; i < nloss; ++i) m.epoch_loss.push_back(r.f64());
  if (!r.done()) throw Error(ErrorCode::parse, "trailing bytes after embedding model");
  m.rebuild_tables();
  return m;
}

void save(const EmbeddingModel& model, const std::filesystem::path& path) {
  corpus::write_text_file(path, serialize(model));
}

EmbeddingModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace lexcase::embed
