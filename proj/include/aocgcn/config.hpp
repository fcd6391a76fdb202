#pragma once

#include "aocgcn/embed.hpp"
#include "aocgcn/gcn.hpp"
#include "aocgcn/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn {

struct RunConfig {
  // [paths]
  std::filesystem::path data_dir;
  std::filesystem::path out_dir = "out";
  std::filesystem::path pretrained;  // optional word vectors
  std::filesystem::path declining;   // defaults to <data_dir>/declining_occupations.csv
  // [run]
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool deterministic = true;
  // [embed]
  EmbedConfig embed;
  // [graph]
  IsolatedPolicy isolated = IsolatedPolicy::Error;
  bool unit_features = true;  // L2-normalize node feature rows
  // [gcn]
  std::size_t gcn_layers = 2;
  std::size_t gcn_hidden = 256;
  TrainConfig train;
  // [risk]
  double cutoff = 0.69;
  double bls_threshold = 0.5;
  // [baseline]
  std::size_t dt_max_depth = 10;
  std::size_t rf_trees = 100;
  std::size_t ada_rounds = 100;
  // [sweep]
  std::vector<std::size_t> sweep_dimensions{50, 100, 150, 200, 250, 300};
  std::vector<std::size_t> sweep_hidden{16, 32, 64, 128, 256, 512};
  // [project]
  std::string project_method = "all";  // pca | kmeans | tsne | all
  bool project_all_nodes = false;
  double tsne_perplexity = 30.0;
  std::size_t tsne_iterations = 1000;
  std::size_t kmeans_k = 2;
  std::size_t kmeans_restarts = 10;

  std::vector<std::size_t> layer_plan() const;
  std::filesystem::path declining_path() const;

  // Stream seeds derived from `seed`.
  std::uint64_t embed_seed() const;
  std::uint64_t split_seed() const;
  std::uint64_t init_seed() const;
  std::uint64_t baseline_seed() const;
  std::uint64_t viz_seed() const;

  void validate() const;
};

// INI text: "key = value" lines under [section] headers, '#' or ';' comments.
// Unknown sections or keys are usage errors. Relative paths resolve against
// `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

// `key` is "section.name", e.g. "gcn.hidden".
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Every effective setting, as INI and as a JSON object (for manifests/bundles).
std::string config_to_ini(const RunConfig& cfg);
std::string config_to_json(const RunConfig& cfg);

}  // namespace aocgcn
