#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn {

enum class Fusion { Sum, Mean };
// Joint: PV-DM also updates the shared word vectors. FrozenWords: only
// document vectors and the output layer move.
enum class DocMode { Joint, FrozenWords };

struct EmbedConfig {
  std::size_t dimension = 200;
  std::size_t window = 5;
  std::size_t negative = 5;
  std::size_t epochs = 5;
  std::size_t doc_epochs = 10;
  std::size_t min_count = 2;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  double subsample = 1e-3;
  std::uint64_t seed = 1;
  DocMode doc_mode = DocMode::Joint;
  Fusion fusion = Fusion::Sum;

  void validate() const;
};

// `vectors` are the input (word) embeddings, V x d. `context` holds the
// negative-sampling output layer; it is empty until a table has been trained.
struct WordEmbeddingTable {
  Matrix vectors;
  Matrix context;

  std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(vectors.cols()); }
};

// Rows aligned with the occupation list the table was trained on.
struct DocEmbeddingTable {
  Matrix vectors;
};

struct PretrainedLoad {
  WordEmbeddingTable table;
  double coverage = 0.0;  // fraction of vocabulary rows found in the file
  std::size_t matched = 0;
};

// Uniform in [-0.5/d, 0.5/d] per component.
Matrix random_init(std::size_t rows, std::size_t dimension, std::uint64_t seed);
WordEmbeddingTable random_table(const Vocabulary& vocab, std::size_t dimension, std::uint64_t seed);

// Text format: "token v1 ... vd" per line, single-space separated. Tokens not
// in the vocabulary are skipped; vocabulary rows missing from the file keep
// their random initialization.
PretrainedLoad load_pretrained(const std::filesystem::path& path, const Vocabulary& vocab,
                               std::size_t dimension, std::uint64_t seed);

struct TrainStats {
  double initial_loss = 0.0;  // evaluation pass before the first update
  double final_loss = 0.0;    // evaluation pass after the last update
  std::vector<double> epoch_losses;  // running mean of the training loss per epoch
};

struct Word2VecResult {
  WordEmbeddingTable table;
  TrainStats stats;
};

using EncodedCorpus = std::vector<std::vector<std::size_t>>;

// Skip-gram with negative sampling. Single-threaded; bit-reproducible for a
// given seed and configuration.
Word2VecResult train_word2vec(const EncodedCorpus& sequences, const Vocabulary& vocab,
                              const WordEmbeddingTable& init, const EmbedConfig& cfg);

struct Doc2VecResult {
  DocEmbeddingTable table;
  TrainStats stats;
};

// Initial document vectors used by train_doc2vec for the given seed.
Matrix initial_doc_vectors(std::size_t documents, std::size_t dimension, std::uint64_t seed);

// PV-DM with mean composition of the document vector and its context words.
// `documents[i]` is the concatenated encoded task statements of occupation i.
Doc2VecResult train_doc2vec(const std::vector<EncodedCorpus>& documents, const Vocabulary& vocab,
                            const WordEmbeddingTable& words, const EmbedConfig& cfg);

struct SkillFeature {
  Vector vector;
  std::size_t resolved_tokens = 0;
};

SkillFeature skill_feature(const SkillRecord& skill, const WordEmbeddingTable& table,
                           const Vocabulary& vocab, Fusion fusion = Fusion::Sum);

struct SkillFeatures {
  Matrix features;  // one row per skill, input order
  std::vector<std::string> unresolved;  // skill_ids whose name has no known token
};

SkillFeatures skill_features(const std::vector<SkillRecord>& skills,
                             const WordEmbeddingTable& table, const Vocabulary& vocab,
                             Fusion fusion = Fusion::Sum);

double cosine(const Vector& a, const Vector& b);

}  // namespace aocgcn
