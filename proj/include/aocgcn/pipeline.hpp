#pragma once

#include "aocgcn/bundle.hpp"
#include "aocgcn/config.hpp"
#include "aocgcn/corpus.hpp"
#include "aocgcn/eval.hpp"
#include "aocgcn/gcn.hpp"
#include "aocgcn/graph.hpp"
#include "aocgcn/risk.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn {

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

// ---- computations shared by the stages ----

Corpus load_run_corpus(const RunConfig& cfg);

struct Embeddings {
  EmbeddingBundle bundle;
  TrainStats word_stats;
  TrainStats doc_stats;
  std::vector<std::string> unresolved_skills;
  double pretrained_coverage = 0.0;
};

// word2vec over task statements, PV-DM per occupation, summed skill-name vectors.
Embeddings compute_embeddings(const Corpus& corpus, const EmbedConfig& cfg,
                              const std::filesystem::path& pretrained);

// With `unit_rows`, every document and skill vector is scaled to unit L2 norm
// before it becomes a node feature (zero rows stay zero).
BipartiteGraph graph_from(const Corpus& corpus, const EmbeddingBundle& bundle, IsolatedPolicy policy,
                          bool unit_rows);
BipartiteGraph graph_from(const Corpus& corpus, const EmbeddingBundle& bundle, const RunConfig& cfg);

struct LabelSet {
  NodeLabels labels;                  // per graph occupation, -1 = unlabeled
  std::vector<std::size_t> labeled;   // graph occupation indices, ascending
  std::vector<int> classes;           // aligned with `labeled`
};

LabelSet label_set(const Corpus& corpus, const BipartiteGraph& graph);

struct ModelRun {
  Split split;
  TrainResult result;
};

ModelRun train_model(const BipartiteGraph& graph, const LabelSet& labels,
                     const std::vector<std::size_t>& plan, const TrainConfig& train,
                     std::uint64_t split_seed, std::uint64_t init_seed);

struct EvaluationRow {
  std::string model;
  ConfusionCounts counts;
  MetricsReport metrics;
};

// AOC-GCN plus the decision tree, random forest and AdaBoost baselines, all on
// the test part of `split`.
std::vector<EvaluationRow> evaluate_models(const BipartiteGraph& graph, const LabelSet& labels,
                                           const Split& split, const GcnModel& model,
                                           const RunConfig& cfg);

std::string metrics_csv(const std::vector<EvaluationRow>& rows, std::uint64_t seed);
std::string metrics_table(const std::vector<EvaluationRow>& rows);

RiskTable risk_table(const GcnModel& model, const BipartiteGraph& graph, double cutoff);

struct SweepCell {
  std::size_t dimension = 0;
  std::size_t hidden = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double val_f1 = 0.0;
  std::size_t best_epoch = 0;
};

// Every (dimension, hidden) pair of the configured grid, dimension-major.
std::vector<SweepCell> run_sweep(const Corpus& corpus, const RunConfig& cfg);
std::string sweep_csv(const std::vector<SweepCell>& cells);

// ---- stages ----

struct StageOutcome {
  std::string stage;
  std::filesystem::path directory;
  std::string summary;  // one line of key=value pairs
};

// ingest, embed, build-graph, train, evaluate, predict, compare-bls, sweep,
// project, run-all
const std::vector<std::string>& stage_names();
bool is_stage(const std::string& name);

// Each stage writes into <out_dir>/<stage>/ and leaves a manifest.json there.
// Stages that consume earlier outputs throw MissingArtifact when absent.
StageOutcome run_stage(const std::string& name, const RunConfig& cfg);

}  // namespace aocgcn
