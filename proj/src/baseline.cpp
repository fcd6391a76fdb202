#include "aocgcn/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aocgcn {

FeatureMatrix build_feature_matrix(const BipartiteGraph& graph, const Matrix& doc_vectors,
                                   const Matrix& skill_vectors,
                                   const std::vector<std::size_t>& occupations) {
  if (doc_vectors.cols() != skill_vectors.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "document and skill feature widths differ");
  }
  if (static_cast<std::size_t>(doc_vectors.rows()) != graph.num_occupations() ||
      static_cast<std::size_t>(skill_vectors.rows()) != graph.num_skills()) {
    throw Error(ErrorCode::DimensionMismatch, "feature rows do not match graph");
  }
  FeatureMatrix fm;
  fm.dimension = static_cast<std::size_t>(doc_vectors.cols());
  for (std::size_t o = 0; o < graph.num_occupations(); ++o) {
    fm.max_skills = std::max(fm.max_skills, graph.degree(o));
  }
  fm.occupations = occupations;
  const auto d = static_cast<Eigen::Index>(fm.dimension);
  fm.rows = Matrix::Zero(static_cast<Eigen::Index>(occupations.size()),
                         d * static_cast<Eigen::Index>(1 + fm.max_skills));
  const auto n_occ = graph.num_occupations();
  for (std::size_t r = 0; r < occupations.size(); ++r) {
    const auto o = occupations[r];
    if (o >= n_occ) throw Error(ErrorCode::InvalidNode, "occupation " + std::to_string(o));
    const auto row = static_cast<Eigen::Index>(r);
    fm.rows.block(row, 0, 1, d) = doc_vectors.row(static_cast<Eigen::Index>(o));
    Eigen::Index slot = 1;
    for (auto s : graph.adjacency()[o]) {  // ascending == ascending skill_id
      fm.rows.block(row, slot * d, 1, d) = skill_vectors.row(static_cast<Eigen::Index>(s - n_occ));
      ++slot;
    }
  }
  return fm;
}

FeatureMatrix build_feature_matrix(const BipartiteGraph& graph,
                                   const std::vector<std::size_t>& occupations) {
  const auto n_occ = static_cast<Eigen::Index>(graph.num_occupations());
  const auto n_skill = static_cast<Eigen::Index>(graph.num_skills());
  return build_feature_matrix(graph, graph.features().topRows(n_occ),
                              graph.features().bottomRows(n_skill), occupations);
}

namespace {

double gini(double n0, double n1) {
  const double n = n0 + n1;
  if (n <= 0) return 0.0;
  const double p0 = n0 / n, p1 = n1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const std::vector<int>& y, const TreeOptions& opts, Rng* rng)
      : X_(X), y_(y), opts_(opts), rng_(rng) {
    const auto p = static_cast<std::size_t>(X.cols());
    k_ = opts.features_per_split == 0 ? p : std::min(p, opts.features_per_split);
  }

  DecisionTree build(const std::vector<std::size_t>& rows) {
    tree_.nodes.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t id = tree_.nodes.size();
    tree_.nodes.emplace_back();
    double n1 = 0;
    for (auto r : rows) n1 += y_[r];
    const double n0 = static_cast<double>(rows.size()) - n1;
    {
      auto& node = tree_.nodes[id];
      node.samples = rows.size();
      node.distribution = {n0 / static_cast<double>(rows.size()), n1 / static_cast<double>(rows.size())};
      node.prediction = n1 > n0 ? 1 : 0;
      node.impurity = gini(n0, n1);
    }
    const bool pure = n0 == 0 || n1 == 0;
    const bool depth_done = opts_.max_depth != 0 && depth >= opts_.max_depth;
    if (pure || depth_done || rows.size() < 2 * opts_.min_leaf) return id;

    const auto choice = best_split(rows, n0, n1);
    if (!choice.found) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (X_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(choice.feature)) <= choice.threshold
           ? left
           : right)
          .push_back(r);
    }
    const auto l = grow(left, depth + 1);
    const auto rr = grow(right, depth + 1);
    auto& node = tree_.nodes[id];
    node.leaf = false;
    node.feature = choice.feature;
    node.threshold = choice.threshold;
    node.left = l;
    node.right = rr;
    return id;
  }

  void scan_feature(const std::vector<std::size_t>& rows, std::size_t f, double n0, double n1,
                    SplitChoice& best) {
    const auto col = static_cast<Eigen::Index>(f);
    pairs_.clear();
    for (auto r : rows) pairs_.emplace_back(X_(static_cast<Eigen::Index>(r), col), y_[r]);
    std::sort(pairs_.begin(), pairs_.end());
    const double n = n0 + n1;
    double l0 = 0, l1 = 0;
    for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
      (pairs_[i].second ? l1 : l0) += 1.0;
      const double a = pairs_[i].first, b = pairs_[i + 1].first;
      if (!(a < b)) continue;
      const double nl = l0 + l1, nr = n - nl;
      if (nl < static_cast<double>(opts_.min_leaf) || nr < static_cast<double>(opts_.min_leaf)) continue;
      const double score = (nl * gini(l0, l1) + nr * gini(n0 - l0, n1 - l1)) / n;
      double t = a + (b - a) / 2.0;
      if (!(t < b)) t = a;
      // features are visited in ascending order and thresholds ascending, so
      // only a strictly better score replaces the incumbent
      if (!best.found || score < best.score ||
          (score == best.score && f == best.feature && t < best.threshold)) {
        best = {true, f, t, score};
      }
    }
  }

  SplitChoice best_split(const std::vector<std::size_t>& rows, double n0, double n1) {
    const auto p = static_cast<std::size_t>(X_.cols());
    SplitChoice best;
    if (k_ >= p || rng_ == nullptr) {
      for (std::size_t f = 0; f < p; ++f) scan_feature(rows, f, n0, n1, best);
      return best;
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    rng_->shuffle(order.begin(), order.end());
    std::vector<std::size_t> first(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_));
    std::sort(first.begin(), first.end());
    for (auto f : first) scan_feature(rows, f, n0, n1, best);
    // no valid split among the sampled features: keep drawing from the rest
    for (std::size_t i = k_; !best.found && i < p; ++i) scan_feature(rows, order[i], n0, n1, best);
    return best;
  }

  const Matrix& X_;
  const std::vector<int>& y_;
  TreeOptions opts_;
  Rng* rng_;
  std::size_t k_ = 0;
  DecisionTree tree_;
  std::vector<std::pair<double, int>> pairs_;
};

void check_xy(const Matrix& X, const std::vector<int>& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "feature rows vs labels");
  }
  for (auto v : y) {
    if (v != 0 && v != 1) throw Error(ErrorCode::MalformedRow, "labels must be 0 or 1");
  }
}

}  // namespace

int DecisionTree::predict(const double* row) const {
  std::size_t i = 0;
  while (!nodes[i].leaf) i = row[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return nodes[i].prediction;
}

std::vector<int> DecisionTree::predict(const Matrix& X) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(predict(X.row(r).data()));
  return out;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].leaf) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return best;
}

DecisionTree train_decision_tree(const Matrix& X, const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows, const TreeOptions& opts,
                                 Rng* rng) {
  check_xy(X, y);
  if (rows.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 training rows");
  if (opts.min_leaf < 1) throw Error(ErrorCode::Usage, "min_leaf must be >= 1");
  TreeBuilder builder(X, y, opts, rng);
  auto tree = builder.build(rows);
  const auto& root = tree.nodes.front();
  tree.degenerate = root.distribution[0] == 0.0 || root.distribution[1] == 0.0;
  return tree;
}

DecisionTree train_decision_tree(const Matrix& X, const std::vector<int>& y,
                                 const TreeOptions& opts) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  return train_decision_tree(X, y, rows, opts, nullptr);
}

int RandomForest::predict(const double* row) const {
  std::size_t votes = 0;
  for (const auto& t : trees) votes += static_cast<std::size_t>(t.predict(row));
  return 2 * votes > trees.size() ? 1 : 0;
}

std::vector<int> RandomForest::predict(const Matrix& X) const {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(predict(X.row(r).data()));
  return out;
}

RandomForest train_random_forest(const Matrix& X, const std::vector<int>& y,
                                 const ForestOptions& opts) {
  check_xy(X, y);
  if (opts.n_trees < 1) throw Error(ErrorCode::EmptyEnsemble, "n_trees must be >= 1");
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  TreeOptions topts;
  topts.max_depth = opts.max_depth;
  topts.min_leaf = opts.min_leaf;
  topts.features_per_split =
      opts.features_per_split ? opts.features_per_split
                              : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
  RandomForest forest;
  for (std::size_t t = 0; t < opts.n_trees; ++t) {
    Rng rng(derive_seed(opts.seed, t));
    std::vector<std::size_t> rows(n);
    if (opts.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    forest.trees.push_back(train_decision_tree(X, y, rows, topts, &rng));
  }
  return forest;
}

int AdaBoost::predict(const double* row) const {
  double score = 0.0;
  for (const auto& s : stumps) score += s.alpha * (s.predict(row) == 1 ? 1.0 : -1.0);
  return score > 0.0 ? 1 : 0;
}

std::vector<int> AdaBoost::predict(const Matrix& X) const {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(predict(X.row(r).data()));
  return out;
}

AdaBoost train_adaboost(const Matrix& X, const std::vector<int>& y, std::size_t n_rounds) {
  check_xy(X, y);
  if (n_rounds == 0) throw Error(ErrorCode::EmptyEnsemble, "n_rounds must be >= 1");
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (n < 2 || positives == 0 || positives == n) {
    throw Error(ErrorCode::DegenerateInput, "adaboost needs both classes present");
  }

  // Per-feature sort orders are reused every round.
  std::vector<std::vector<std::size_t>> order(p, std::vector<std::size_t>(n));
  for (std::size_t f = 0; f < p; ++f) {
    std::iota(order[f].begin(), order[f].end(), 0);
    const auto col = static_cast<Eigen::Index>(f);
    std::stable_sort(order[f].begin(), order[f].end(), [&](std::size_t a, std::size_t b) {
      return X(static_cast<Eigen::Index>(a), col) < X(static_cast<Eigen::Index>(b), col);
    });
  }

  AdaBoost model;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  for (std::size_t round = 0; round < n_rounds; ++round) {
    double total1 = 0.0, total0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) (y[i] ? total1 : total0) += w[i];
    bool found = false;
    Stump best;
    double best_err = 0.0;
    for (std::size_t f = 0; f < p; ++f) {
      const auto col = static_cast<Eigen::Index>(f);
      const auto& ord = order[f];
      double left1 = 0.0, left0 = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        (y[ord[k]] ? left1 : left0) += w[ord[k]];
        const double a = X(static_cast<Eigen::Index>(ord[k]), col);
        const double b = X(static_cast<Eigen::Index>(ord[k + 1]), col);
        if (!(a < b)) continue;
        double t = a + (b - a) / 2.0;
        if (!(t < b)) t = a;
        // left predicts 0: errors are positives on the left, negatives on the right
        const double err0 = left1 + (total0 - left0);
        const double err1 = left0 + (total1 - left1);
        if (!found || err0 < best_err) {
          best = {f, t, 0, 0.0};
          best_err = err0;
          found = true;
        }
        if (err1 < best_err) {
          best = {f, t, 1, 0.0};
          best_err = err1;
        }
      }
    }
    if (!found) throw Error(ErrorCode::DegenerateInput, "no feature separates any rows");
    if (best_err >= 0.5) {
      if (model.stumps.empty()) {
        throw Error(ErrorCode::DegenerateInput, "first stump has weighted error >= 0.5");
      }
      break;
    }
    const double eps = std::max(best_err, 1e-10);
    best.alpha = 0.5 * std::log((1.0 - eps) / eps);
    model.stumps.push_back(best);
    model.round_errors.push_back(best_err);
    if (best_err <= 0.0) {
      model.weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
      break;
    }
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double agree = best.predict(X.row(static_cast<Eigen::Index>(i)).data()) == y[i] ? 1.0 : -1.0;
      w[i] *= std::exp(-best.alpha * agree);
      z += w[i];
    }
    for (auto& wi : w) wi /= z;
    model.weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
  }
  return model;
}

}  // namespace aocgcn
