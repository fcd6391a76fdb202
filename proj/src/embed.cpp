#include "aocgcn/embed.hpp"

#include "aocgcn/csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aocgcn {

namespace {

constexpr std::uint64_t kInitStream = 10;
constexpr std::uint64_t kWordTrainStream = 11;
constexpr std::uint64_t kDocInitStream = 20;
constexpr std::uint64_t kDocTrainStream = 21;
constexpr std::uint64_t kEvalStream = 99;
constexpr std::size_t kEvalPairCap = 200000;

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log(sigmoid(x)), stable for large |x|
inline double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      acc += std::pow(static_cast<double>(vocab.count(i)), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::size_t sample(Rng& rng) const {
    const double x = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

class Subsampler {
 public:
  Subsampler(const Vocabulary& vocab, double threshold) {
    double total = 0.0;
    for (auto c : vocab.counts()) total += static_cast<double>(c);
    keep_.resize(vocab.size(), 1.0);
    if (threshold <= 0.0) return;
    const double t = threshold * total;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      const double c = static_cast<double>(vocab.count(i));
      keep_[i] = std::min(1.0, (std::sqrt(c / t) + 1.0) * t / c);
    }
  }

  std::vector<std::size_t> apply(const std::vector<std::size_t>& seq, Rng& rng) const {
    std::vector<std::size_t> out;
    out.reserve(seq.size());
    for (auto w : seq) {
      if (keep_[w] >= 1.0 || rng.uniform() < keep_[w]) out.push_back(w);
    }
    return out;
  }

 private:
  std::vector<double> keep_;
};

// One negative-sampling step for input vector `in` predicting `target`.
// Accumulates the input gradient into `grad_in` and updates the output layer
// in place. Returns the pair loss.
double ns_step(const double* in, std::size_t target, Matrix& output, std::size_t negative,
               const NegativeSampler& sampler, Rng& rng, double lr, double* grad_in,
               std::size_t dim) {
  double loss = 0.0;
  for (std::size_t k = 0; k <= negative; ++k) {
    std::size_t word;
    double label;
    if (k == 0) {
      word = target;
      label = 1.0;
    } else {
      word = sampler.sample(rng);
      if (word == target) continue;
      label = 0.0;
    }
    double* out = output.row(static_cast<Eigen::Index>(word)).data();
    const double x = dot(in, out, dim);
    loss += label > 0 ? neg_log_sigmoid(x) : neg_log_sigmoid(-x);
    const double g = (label - sigmoid(x)) * lr;
    axpy(g, out, grad_in, dim);
    axpy(g, in, out, dim);
  }
  return loss;
}

double ns_loss(const double* in, std::size_t target, const Matrix& output, std::size_t negative,
               const NegativeSampler& sampler, Rng& rng, std::size_t dim) {
  double loss = 0.0;
  for (std::size_t k = 0; k <= negative; ++k) {
    if (k == 0) {
      loss += neg_log_sigmoid(dot(in, output.row(static_cast<Eigen::Index>(target)).data(), dim));
      continue;
    }
    const auto word = sampler.sample(rng);
    if (word == target) continue;
    loss += neg_log_sigmoid(-dot(in, output.row(static_cast<Eigen::Index>(word)).data(), dim));
  }
  return loss;
}

double evaluate_skipgram(const Matrix& input, const Matrix& output, const EncodedCorpus& seqs,
                         const EmbedConfig& cfg, const NegativeSampler& sampler) {
  Rng rng(derive_seed(cfg.seed, kEvalStream));
  const std::size_t dim = static_cast<std::size_t>(input.cols());
  const auto w = static_cast<std::ptrdiff_t>(cfg.window);
  double total = 0.0;
  std::size_t pairs = 0;
  for (const auto& seq : seqs) {
    const auto n = static_cast<std::ptrdiff_t>(seq.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - w);
           c <= std::min(n - 1, pos + w); ++c) {
        if (c == pos) continue;
        total += ns_loss(input.row(static_cast<Eigen::Index>(seq[pos])).data(), seq[c], output,
                         cfg.negative, sampler, rng, dim);
        if (++pairs >= kEvalPairCap) return total / static_cast<double>(pairs);
      }
    }
  }
  return pairs ? total / static_cast<double>(pairs) : 0.0;
}

std::size_t total_tokens(const EncodedCorpus& seqs) {
  std::size_t n = 0;
  for (const auto& s : seqs) n += s.size();
  return n;
}

double learning_rate(const EmbedConfig& cfg, std::size_t processed, std::size_t total) {
  const double progress = static_cast<double>(processed) / static_cast<double>(total + 1);
  return std::max(cfg.min_learning_rate, cfg.learning_rate * (1.0 - progress));
}

double evaluate_pvdm(const Matrix& docs, const Matrix& words, const Matrix& output,
                     const std::vector<EncodedCorpus>& documents, const EmbedConfig& cfg,
                     const NegativeSampler& sampler) {
  Rng rng(derive_seed(cfg.seed, kEvalStream));
  const std::size_t dim = static_cast<std::size_t>(words.cols());
  const auto w = static_cast<std::ptrdiff_t>(cfg.window);
  std::vector<double> h(dim);
  double total = 0.0;
  std::size_t items = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& seq : documents[d]) {
      const auto n = static_cast<std::ptrdiff_t>(seq.size());
      for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
        std::copy_n(docs.row(static_cast<Eigen::Index>(d)).data(), dim, h.begin());
        double count = 1.0;
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - w);
             c <= std::min(n - 1, pos + w); ++c) {
          if (c == pos) continue;
          axpy(1.0, words.row(static_cast<Eigen::Index>(seq[c])).data(), h.data(), dim);
          count += 1.0;
        }
        for (auto& x : h) x /= count;
        total += ns_loss(h.data(), seq[pos], output, cfg.negative, sampler, rng, dim);
        if (++items >= kEvalPairCap) return total / static_cast<double>(items);
      }
    }
  }
  return items ? total / static_cast<double>(items) : 0.0;
}

}  // namespace

void EmbedConfig::validate() const {
  if (dimension < 1) throw Error(ErrorCode::Usage, "embed dimension must be >= 1");
  if (window < 1) throw Error(ErrorCode::Usage, "embed window must be >= 1");
  if (negative < 1) throw Error(ErrorCode::Usage, "embed negative must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::Usage, "embed learning rate must be > 0");
  if (min_count < 1) throw Error(ErrorCode::Usage, "embed min_count must be >= 1");
}

Matrix random_init(std::size_t rows, std::size_t dimension, std::uint64_t seed) {
  Rng rng(seed);
  const double half = 0.5 / static_cast<double>(dimension);
  Matrix m(rows, dimension);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-half, half);
  }
  return m;
}

WordEmbeddingTable random_table(const Vocabulary& vocab, std::size_t dimension,
                                std::uint64_t seed) {
  return {random_init(vocab.size(), dimension, derive_seed(seed, kInitStream)), Matrix()};
}

PretrainedLoad load_pretrained(const std::filesystem::path& path, const Vocabulary& vocab,
                               std::size_t dimension, std::uint64_t seed) {
  const std::string text = csv::read_text(path);
  PretrainedLoad out{random_table(vocab, dimension, seed), 0.0, 0};
  std::vector<bool> seen(vocab.size(), false);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const auto sp = line.find(' ', start);
      parts.push_back(line.substr(start, sp - start));
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
    const auto where = path.filename().string() + " line " + std::to_string(line_no);
    if (parts.size() < 2 || parts[0].empty()) {
      throw Error(ErrorCode::MalformedVectorLine, where + ": expected token and values");
    }
    if (parts.size() - 1 != dimension) {
      throw Error(ErrorCode::DimensionMismatch, where + ": file dimension " +
                                                    std::to_string(parts.size() - 1) +
                                                    " != configured " + std::to_string(dimension));
    }
    Vector v(static_cast<Eigen::Index>(dimension));
    for (std::size_t j = 0; j < dimension; ++j) {
      const auto& s = parts[j + 1];
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (s.empty() || used != s.size() || !std::isfinite(x)) {
        throw Error(ErrorCode::MalformedVectorLine, where + ": bad number '" + s + "'");
      }
      v[static_cast<Eigen::Index>(j)] = x;
    }
    const auto idx = vocab.index(parts[0]);
    if (idx == Vocabulary::npos || seen[idx]) continue;
    seen[idx] = true;
    out.table.vectors.row(static_cast<Eigen::Index>(idx)) = v.transpose();
    ++out.matched;
  }
  out.coverage = vocab.empty() ? 0.0
                               : static_cast<double>(out.matched) / static_cast<double>(vocab.size());
  return out;
}

Word2VecResult train_word2vec(const EncodedCorpus& sequences, const Vocabulary& vocab,
                              const WordEmbeddingTable& init, const EmbedConfig& cfg) {
  cfg.validate();
  const std::size_t tokens = total_tokens(sequences);
  if (tokens == 0) throw Error(ErrorCode::EmptyCorpus, "no in-vocabulary tokens to train on");
  if (init.dimension() != cfg.dimension || init.size() != vocab.size()) {
    throw Error(ErrorCode::DimensionMismatch, "initial word table shape does not match vocabulary");
  }
  const std::size_t dim = cfg.dimension;

  Word2VecResult res;
  res.table.vectors = init.vectors;
  res.table.context = init.context.size() ? init.context : Matrix::Zero(init.vectors.rows(), dim);
  if (res.table.context.rows() != res.table.vectors.rows() ||
      static_cast<std::size_t>(res.table.context.cols()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "context layer shape does not match word table");
  }

  const NegativeSampler sampler(vocab);
  const Subsampler subsampler(vocab, cfg.subsample);
  res.stats.initial_loss =
      evaluate_skipgram(res.table.vectors, res.table.context, sequences, cfg, sampler);

  Rng rng(derive_seed(cfg.seed, kWordTrainStream));
  std::vector<double> grad(dim);
  const std::size_t total = cfg.epochs * tokens;
  std::size_t processed = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t pairs = 0;
    for (const auto& raw : sequences) {
      const auto seq = subsampler.apply(raw, rng);
      processed += raw.size();
      const double lr = learning_rate(cfg, processed, total);
      const auto n = static_cast<std::ptrdiff_t>(seq.size());
      for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
        const auto reach = static_cast<std::ptrdiff_t>(cfg.window - rng.below(cfg.window));
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - reach);
             c <= std::min(n - 1, pos + reach); ++c) {
          if (c == pos) continue;
          double* in = res.table.vectors.row(static_cast<Eigen::Index>(seq[pos])).data();
          std::fill(grad.begin(), grad.end(), 0.0);
          epoch_loss +=
              ns_step(in, seq[c], res.table.context, cfg.negative, sampler, rng, lr, grad.data(), dim);
          axpy(1.0, grad.data(), in, dim);
          ++pairs;
        }
      }
    }
    const double mean = pairs ? epoch_loss / static_cast<double>(pairs) : 0.0;
    if (!std::isfinite(mean)) throw Error(ErrorCode::NonFiniteLoss, "skip-gram epoch " + std::to_string(epoch));
    res.stats.epoch_losses.push_back(mean);
  }
  res.stats.final_loss =
      evaluate_skipgram(res.table.vectors, res.table.context, sequences, cfg, sampler);
  return res;
}

Matrix initial_doc_vectors(std::size_t documents, std::size_t dimension, std::uint64_t seed) {
  return random_init(documents, dimension, derive_seed(seed, kDocInitStream));
}

Doc2VecResult train_doc2vec(const std::vector<EncodedCorpus>& documents, const Vocabulary& vocab,
                            const WordEmbeddingTable& words, const EmbedConfig& cfg) {
  cfg.validate();
  if (documents.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents");
  std::size_t tokens = 0;
  for (const auto& d : documents) tokens += total_tokens(d);
  if (tokens == 0) throw Error(ErrorCode::EmptyCorpus, "documents contain no in-vocabulary tokens");
  if (words.dimension() != cfg.dimension || words.size() != vocab.size()) {
    throw Error(ErrorCode::DimensionMismatch, "word table shape does not match vocabulary");
  }
  const std::size_t dim = cfg.dimension;

  Matrix docs = initial_doc_vectors(documents.size(), dim, cfg.seed);
  Matrix word_vectors = words.vectors;
  Matrix output = words.context.size() ? words.context : Matrix::Zero(words.vectors.rows(), dim);

  const NegativeSampler sampler(vocab);
  const Subsampler subsampler(vocab, cfg.subsample);
  Doc2VecResult res;
  res.stats.initial_loss = evaluate_pvdm(docs, word_vectors, output, documents, cfg, sampler);

  Rng rng(derive_seed(cfg.seed, kDocTrainStream));
  std::vector<double> h(dim), grad(dim);
  std::vector<std::size_t> ctx;
  const std::size_t total = cfg.doc_epochs * tokens;
  std::size_t processed = 0;
  for (std::size_t epoch = 0; epoch < cfg.doc_epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t items = 0;
    for (std::size_t d = 0; d < documents.size(); ++d) {
      double* doc = docs.row(static_cast<Eigen::Index>(d)).data();
      for (const auto& raw : documents[d]) {
        const auto seq = subsampler.apply(raw, rng);
        processed += raw.size();
        const double lr = learning_rate(cfg, processed, total);
        const auto n = static_cast<std::ptrdiff_t>(seq.size());
        for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
          const auto reach = static_cast<std::ptrdiff_t>(cfg.window - rng.below(cfg.window));
          ctx.clear();
          for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - reach);
               c <= std::min(n - 1, pos + reach); ++c) {
            if (c != pos) ctx.push_back(seq[c]);
          }
          std::copy_n(doc, dim, h.begin());
          for (auto w : ctx) axpy(1.0, word_vectors.row(static_cast<Eigen::Index>(w)).data(), h.data(), dim);
          const double count = 1.0 + static_cast<double>(ctx.size());
          for (auto& x : h) x /= count;
          std::fill(grad.begin(), grad.end(), 0.0);
          epoch_loss += ns_step(h.data(), seq[pos], output, cfg.negative, sampler, rng, lr,
                                grad.data(), dim);
          ++items;
          // Error applied undivided to every input of the mean, as in the
          // reference CBOW/PV-DM trainers.
          axpy(1.0, grad.data(), doc, dim);
          if (cfg.doc_mode == DocMode::Joint) {
            for (auto w : ctx) axpy(1.0, grad.data(), word_vectors.row(static_cast<Eigen::Index>(w)).data(), dim);
          }
        }
      }
    }
    const double mean = items ? epoch_loss / static_cast<double>(items) : 0.0;
    if (!std::isfinite(mean)) throw Error(ErrorCode::NonFiniteLoss, "pv-dm epoch " + std::to_string(epoch));
    res.stats.epoch_losses.push_back(mean);
  }
  res.stats.final_loss = evaluate_pvdm(docs, word_vectors, output, documents, cfg, sampler);
  res.table.vectors = std::move(docs);
  return res;
}

SkillFeature skill_feature(const SkillRecord& skill, const WordEmbeddingTable& table,
                           const Vocabulary& vocab, Fusion fusion) {
  std::vector<std::size_t> ids;
  for (const auto& t : tokenize(skill.name)) {
    const auto i = vocab.index(t);
    if (i != Vocabulary::npos) ids.push_back(i);
  }
  // canonical summation order makes the result independent of token order
  std::sort(ids.begin(), ids.end());
  SkillFeature out{Vector::Zero(static_cast<Eigen::Index>(table.dimension())), ids.size()};
  for (auto i : ids) out.vector += table.vectors.row(static_cast<Eigen::Index>(i)).transpose();
  if (fusion == Fusion::Mean && !ids.empty()) out.vector /= static_cast<double>(ids.size());
  return out;
}

SkillFeatures skill_features(const std::vector<SkillRecord>& skills,
                             const WordEmbeddingTable& table, const Vocabulary& vocab,
                             Fusion fusion) {
  SkillFeatures out;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(skills.size()),
                              static_cast<Eigen::Index>(table.dimension()));
  for (std::size_t i = 0; i < skills.size(); ++i) {
    auto f = skill_feature(skills[i], table, vocab, fusion);
    if (f.resolved_tokens == 0) out.unresolved.push_back(skills[i].skill_id);
    out.features.row(static_cast<Eigen::Index>(i)) = f.vector.transpose();
  }
  return out;
}

double cosine(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace aocgcn
