#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/graph.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace aocgcn {

// One row per requested occupation: its document vector followed by the
// feature vectors of its linked skills in ascending skill_id order, zero-padded
// to max_skills skill slots.
struct FeatureMatrix {
  Matrix rows;
  std::size_t dimension = 0;
  std::size_t max_skills = 0;
  std::vector<std::size_t> occupations;
};

// `doc_vectors` rows follow graph occupation order, `skill_vectors` rows graph
// skill order. max_skills is the largest occupation degree in the whole graph.
FeatureMatrix build_feature_matrix(const BipartiteGraph& graph, const Matrix& doc_vectors,
                                   const Matrix& skill_vectors,
                                   const std::vector<std::size_t>& occupations);
// Uses the graph's own initial features.
FeatureMatrix build_feature_matrix(const BipartiteGraph& graph,
                                   const std::vector<std::size_t>& occupations);

struct TreeNode {
  bool leaf = true;
  int prediction = 0;
  std::array<double, 2> distribution{};  // class fractions of the samples reaching the node
  double impurity = 0.0;                 // Gini
  std::size_t samples = 0;
  std::size_t feature = 0;
  double threshold = 0.0;  // x <= threshold goes left
  std::size_t left = 0, right = 0;
};

class DecisionTree {
 public:
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  bool degenerate = false;      // single-class training data

  int predict(const double* row) const;
  std::vector<int> predict(const Matrix& X) const;
  std::size_t depth() const;
};

struct TreeOptions {
  std::size_t max_depth = 10;  // 0 = unlimited
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;  // 0 = all features
};

// CART with Gini impurity. Candidate thresholds are midpoints between
// consecutive distinct values; ties go to the lowest feature index, then the
// lowest threshold. Majority ties at a leaf predict class 0.
DecisionTree train_decision_tree(const Matrix& X, const std::vector<int>& y,
                                 const TreeOptions& opts = {});

// Lower-level entry used by the forest: `rows` may repeat (bootstrap), `rng`
// drives per-split feature subsampling when features_per_split < columns.
DecisionTree train_decision_tree(const Matrix& X, const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows, const TreeOptions& opts,
                                 Rng* rng);

struct ForestOptions {
  std::size_t n_trees = 100;
  std::size_t features_per_split = 0;  // 0 = floor(sqrt(columns))
  bool bootstrap = true;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 1;
};

class RandomForest {
 public:
  std::vector<DecisionTree> trees;

  // Majority vote; an even split predicts class 0.
  int predict(const double* row) const;
  std::vector<int> predict(const Matrix& X) const;
};

RandomForest train_random_forest(const Matrix& X, const std::vector<int>& y,
                                 const ForestOptions& opts);

struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  int left_class = 0;  // class predicted for x <= threshold
  double alpha = 0.0;

  int predict(const double* row) const { return row[feature] <= threshold ? left_class : 1 - left_class; }
};

class AdaBoost {
 public:
  std::vector<Stump> stumps;
  std::vector<double> round_errors;  // weighted error of each kept stump
  std::vector<double> weight_sums;   // sample-weight total after each round

  // Sign of the alpha-weighted vote; a zero score predicts class 0.
  int predict(const double* row) const;
  std::vector<int> predict(const Matrix& X) const;
};

// Discrete two-class boosting of decision stumps chosen by minimum weighted
// error. Stops early when the best error is 0 or >= 0.5.
AdaBoost train_adaboost(const Matrix& X, const std::vector<int>& y, std::size_t n_rounds);

}  // namespace aocgcn
