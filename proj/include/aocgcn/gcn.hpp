#pragma once

#include "aocgcn/common.hpp"
#include "aocgcn/eval.hpp"
#include "aocgcn/graph.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aocgcn {

// One propagation layer: output row v is
//   concat( h[v] * V + bV,  relu( mean_{u in N(v)} h[u] * W + bW ) )
// with each branch producing half of the layer width.
struct GcnLayerParams {
  Matrix W;   // d_{l-1} x d_l/2, neighbour branch
  Matrix V;   // d_{l-1} x d_l/2, self branch
  Matrix bW;  // 1 x d_l/2
  Matrix bV;  // 1 x d_l/2
};

struct GcnModel {
  std::vector<std::size_t> layer_plan;  // d_0, d_1, ..., d_L
  std::vector<GcnLayerParams> layers;
  Matrix head_W;    // 2*d_L x 2
  Matrix head_b;    // 1 x 2
  Matrix features;  // (|O|+|S|) x d_0, trainable

  // Visits every parameter tensor with a stable name, in a fixed order.
  void for_each(const std::function<void(const std::string&, Matrix&)>& fn);
  void for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const;
  std::size_t parameter_count() const;
  bool operator==(const GcnModel& other) const;
};

// Checks the plan (L >= 1, every d_l > 0 and even for l >= 1).
void validate_layer_plan(const std::vector<std::size_t>& plan);

// Glorot-uniform weights, zero biases, features copied from `features`.
GcnModel init_model(const std::vector<std::size_t>& layer_plan, const Matrix& features,
                    std::uint64_t seed);

// Row v = mean of rows of N(v). Rows of degree-0 nodes are zero.
Matrix aggregate(const Matrix& features, const BipartiteGraph& graph);
// Adjoint of aggregate: out[u] = sum_{v : u in N(v)} grad[v] / deg(v).
Matrix aggregate_adjoint(const Matrix& grad, const BipartiteGraph& graph);

Matrix layer_forward(const Matrix& h_prev, const GcnLayerParams& layer,
                     const BipartiteGraph& graph);

// Row o = concat(z_o, mean of z_s over the skills adjacent to o).
Matrix readout(const Matrix& final_embeddings, const BipartiteGraph& graph);

Matrix softmax_rows(const Matrix& logits);
Matrix classify(const Matrix& readout_rows, const Matrix& head_W, const Matrix& head_b);

struct ForwardCache {
  std::vector<Matrix> inputs;      // h_{l-1} per layer
  std::vector<Matrix> aggregated;  // mean-neighbour input per layer
  std::vector<Matrix> pre;         // neighbour-branch pre-activation per layer
  std::vector<Matrix> outputs;     // h_l per layer
  Matrix readout;
  Matrix logits;
  Matrix probabilities;
};

ForwardCache forward(const GcnModel& model, const BipartiteGraph& graph);

// Per-occupation class (0/1) with -1 for unlabeled; `mask` lists the occupation
// indices that contribute to the loss.
using NodeLabels = std::vector<int>;

double data_loss(const Matrix& probabilities, const NodeLabels& labels,
                 const std::vector<std::size_t>& mask);
// (weight_decay / 2) * sum of squares of every W, V and head weight.
double decay_term(const GcnModel& model, double weight_decay);
double loss(const GcnModel& model, const Matrix& probabilities, const NodeLabels& labels,
            const std::vector<std::size_t>& mask, double weight_decay);

struct LossAndGradient {
  double loss = 0.0;
  GcnModel gradient;  // same shapes as the model
};

LossAndGradient gradients(const GcnModel& model, const BipartiteGraph& graph,
                          const NodeLabels& labels, const std::vector<std::size_t>& mask,
                          double weight_decay);

struct TrainConfig {
  std::size_t epochs = 300;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  std::uint64_t seed = 1;
  std::size_t patience = 30;
  std::size_t eval_every = 1;
  bool train_features = true;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double val_f1 = 0.0;
};

struct TrainResult {
  GcnModel model;  // parameters from the best-validation-F1 epoch
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when no update was applied
  double best_val_f1 = 0.0;
};

// Full-batch Adam over weights and node features. Early stopping keeps the
// epoch with the highest validation F1 (earliest on ties).
TrainResult train(const GcnModel& model, const BipartiteGraph& graph, const NodeLabels& labels,
                  const Split& split, const TrainConfig& cfg);

// Automated-class probability per occupation.
std::vector<double> predict(const GcnModel& model, const BipartiteGraph& graph);

// Final-layer node embeddings, stacked numbering.
Matrix node_embeddings(const GcnModel& model, const BipartiteGraph& graph);

std::vector<int> argmax_classes(const Matrix& probabilities, const std::vector<std::size_t>& rows);

}  // namespace aocgcn
