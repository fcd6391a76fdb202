#include "aocgcn/gcn.hpp"

#include <algorithm>
#include <cmath>

namespace aocgcn {

namespace {

void require_rows(const Matrix& m, std::size_t rows, const char* what) {
  if (static_cast<std::size_t>(m.rows()) != rows) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": expected " +
                                              std::to_string(rows) + " rows, got " +
                                              std::to_string(m.rows()));
  }
}

Matrix glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix m(fan_in, fan_out);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-limit, limit);
  }
  return m;
}

Matrix colsum(const Matrix& m) { return m.colwise().sum(); }

}  // namespace

void GcnModel::for_each(const std::function<void(const std::string&, Matrix&)>& fn) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto p = "layer" + std::to_string(l) + ".";
    fn(p + "W", layers[l].W);
    fn(p + "V", layers[l].V);
    fn(p + "bW", layers[l].bW);
    fn(p + "bV", layers[l].bV);
  }
  fn("head.W", head_W);
  fn("head.b", head_b);
  fn("features", features);
}

void GcnModel::for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const {
  const_cast<GcnModel*>(this)->for_each(
      [&](const std::string& name, Matrix& m) { fn(name, static_cast<const Matrix&>(m)); });
}

std::size_t GcnModel::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Matrix& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

bool GcnModel::operator==(const GcnModel& other) const {
  if (layer_plan != other.layer_plan || layers.size() != other.layers.size()) return false;
  std::vector<const Matrix*> a, b;
  for_each([&](const std::string&, const Matrix& m) { a.push_back(&m); });
  other.for_each([&](const std::string&, const Matrix& m) { b.push_back(&m); });
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->rows() != b[i]->rows() || a[i]->cols() != b[i]->cols()) return false;
    if (*a[i] != *b[i]) return false;
  }
  return true;
}

void validate_layer_plan(const std::vector<std::size_t>& plan) {
  if (plan.size() < 2) throw Error(ErrorCode::Usage, "layer plan needs at least one layer");
  if (plan[0] == 0) throw Error(ErrorCode::Usage, "input dimension must be positive");
  for (std::size_t l = 1; l < plan.size(); ++l) {
    if (plan[l] == 0 || plan[l] % 2 != 0) {
      throw Error(ErrorCode::Usage, "layer width " + std::to_string(plan[l]) + " must be even and positive");
    }
  }
}

GcnModel init_model(const std::vector<std::size_t>& layer_plan, const Matrix& features,
                    std::uint64_t seed) {
  validate_layer_plan(layer_plan);
  if (static_cast<std::size_t>(features.cols()) != layer_plan[0]) {
    throw Error(ErrorCode::ShapeMismatch, "feature dim " + std::to_string(features.cols()) +
                                              " != plan input " + std::to_string(layer_plan[0]));
  }
  Rng rng(seed);
  GcnModel m;
  m.layer_plan = layer_plan;
  for (std::size_t l = 1; l < layer_plan.size(); ++l) {
    const auto in = layer_plan[l - 1], half = layer_plan[l] / 2;
    GcnLayerParams p;
    p.W = glorot(in, half, rng);
    p.V = glorot(in, half, rng);
    p.bW = Matrix::Zero(1, static_cast<Eigen::Index>(half));
    p.bV = Matrix::Zero(1, static_cast<Eigen::Index>(half));
    m.layers.push_back(std::move(p));
  }
  m.head_W = glorot(2 * layer_plan.back(), 2, rng);
  m.head_b = Matrix::Zero(1, 2);
  m.features = features;
  return m;
}

Matrix aggregate(const Matrix& features, const BipartiteGraph& graph) {
  require_rows(features, graph.num_nodes(), "aggregate");
  Matrix out = Matrix::Zero(features.rows(), features.cols());
  const auto& adj = graph.adjacency();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (adj[v].empty()) continue;
    auto row = out.row(static_cast<Eigen::Index>(v));
    for (auto u : adj[v]) row += features.row(static_cast<Eigen::Index>(u));
    row /= static_cast<double>(adj[v].size());
  }
  return out;
}

Matrix aggregate_adjoint(const Matrix& grad, const BipartiteGraph& graph) {
  require_rows(grad, graph.num_nodes(), "aggregate_adjoint");
  Matrix out = Matrix::Zero(grad.rows(), grad.cols());
  const auto& adj = graph.adjacency();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (adj[v].empty()) continue;
    const double inv = 1.0 / static_cast<double>(adj[v].size());
    const auto g = grad.row(static_cast<Eigen::Index>(v));
    for (auto u : adj[v]) out.row(static_cast<Eigen::Index>(u)) += inv * g;
  }
  return out;
}

namespace {

struct LayerOut {
  Matrix aggregated;
  Matrix pre;
  Matrix output;
};

LayerOut layer_apply(const Matrix& h_prev, const GcnLayerParams& layer,
                     const BipartiteGraph& graph) {
  if (h_prev.cols() != layer.W.rows() || h_prev.cols() != layer.V.rows() ||
      layer.W.cols() != layer.V.cols() || layer.bW.cols() != layer.W.cols() ||
      layer.bV.cols() != layer.V.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "layer parameters do not match input width " +
                                              std::to_string(h_prev.cols()));
  }
  LayerOut o;
  o.aggregated = aggregate(h_prev, graph);
  o.pre = o.aggregated * layer.W;
  o.pre.rowwise() += layer.bW.row(0);
  const auto half = layer.W.cols();
  o.output.resize(h_prev.rows(), 2 * half);
  o.output.leftCols(half) = h_prev * layer.V;
  o.output.leftCols(half).rowwise() += layer.bV.row(0);
  o.output.rightCols(half) = o.pre.cwiseMax(0.0);
  return o;
}

}  // namespace

Matrix layer_forward(const Matrix& h_prev, const GcnLayerParams& layer,
                     const BipartiteGraph& graph) {
  return layer_apply(h_prev, layer, graph).output;
}

Matrix readout(const Matrix& final_embeddings, const BipartiteGraph& graph) {
  require_rows(final_embeddings, graph.num_nodes(), "readout");
  const auto n_occ = static_cast<Eigen::Index>(graph.num_occupations());
  const auto d = final_embeddings.cols();
  Matrix out(n_occ, 2 * d);
  out.leftCols(d) = final_embeddings.topRows(n_occ);
  out.rightCols(d) = aggregate(final_embeddings, graph).topRows(n_occ);
  return out;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double z = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) z += std::exp(logits(i, j) - mx);
    for (Eigen::Index j = 0; j < logits.cols(); ++j) p(i, j) = std::exp(logits(i, j) - mx) / z;
  }
  return p;
}

Matrix classify(const Matrix& readout_rows, const Matrix& head_W, const Matrix& head_b) {
  if (readout_rows.cols() != head_W.rows() || head_W.cols() != 2 || head_b.rows() != 1 ||
      head_b.cols() != 2) {
    throw Error(ErrorCode::ShapeMismatch, "classifier head does not match readout width " +
                                              std::to_string(readout_rows.cols()));
  }
  Matrix logits = readout_rows * head_W;
  logits.rowwise() += head_b.row(0);
  return softmax_rows(logits);
}

ForwardCache forward(const GcnModel& model, const BipartiteGraph& graph) {
  require_rows(model.features, graph.num_nodes(), "forward features");
  ForwardCache c;
  Matrix h = model.features;
  for (const auto& layer : model.layers) {
    auto o = layer_apply(h, layer, graph);
    c.inputs.push_back(std::move(h));
    c.aggregated.push_back(std::move(o.aggregated));
    c.pre.push_back(std::move(o.pre));
    h = o.output;
    c.outputs.push_back(std::move(o.output));
  }
  c.readout = readout(h, graph);
  if (c.readout.cols() != model.head_W.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "head input width");
  }
  c.logits = c.readout * model.head_W;
  c.logits.rowwise() += model.head_b.row(0);
  c.probabilities = softmax_rows(c.logits);
  return c;
}

double data_loss(const Matrix& probabilities, const NodeLabels& labels,
                 const std::vector<std::size_t>& mask) {
  if (mask.empty()) throw Error(ErrorCode::EmptyMask, "loss mask selects no labeled node");
  double total = 0.0;
  for (auto i : mask) {
    if (i >= labels.size() || (labels[i] != 0 && labels[i] != 1)) {
      throw Error(ErrorCode::EmptyMask, "mask entry " + std::to_string(i) + " is not labeled");
    }
    const double p = probabilities(static_cast<Eigen::Index>(i), labels[i]);
    total -= std::log(std::max(p, 1e-300));
  }
  return total / static_cast<double>(mask.size());
}

double decay_term(const GcnModel& model, double weight_decay) {
  double s = 0.0;
  for (const auto& l : model.layers) s += l.W.squaredNorm() + l.V.squaredNorm();
  s += model.head_W.squaredNorm();
  return 0.5 * weight_decay * s;
}

double loss(const GcnModel& model, const Matrix& probabilities, const NodeLabels& labels,
            const std::vector<std::size_t>& mask, double weight_decay) {
  return data_loss(probabilities, labels, mask) + decay_term(model, weight_decay);
}

LossAndGradient gradients(const GcnModel& model, const BipartiteGraph& graph,
                          const NodeLabels& labels, const std::vector<std::size_t>& mask,
                          double weight_decay) {
  const auto cache = forward(model, graph);
  LossAndGradient out;
  out.loss = loss(model, cache.probabilities, labels, mask, weight_decay);

  const auto n_occ = static_cast<Eigen::Index>(graph.num_occupations());
  const auto n = static_cast<Eigen::Index>(graph.num_nodes());
  const double inv_m = 1.0 / static_cast<double>(mask.size());

  Matrix d_logits = Matrix::Zero(n_occ, 2);
  for (auto i : mask) {
    const auto r = static_cast<Eigen::Index>(i);
    d_logits.row(r) = cache.probabilities.row(r) * inv_m;
    d_logits(r, labels[i]) -= inv_m;
  }

  GcnModel& g = out.gradient;
  g.layer_plan = model.layer_plan;
  g.layers.resize(model.layers.size());
  g.head_W = cache.readout.transpose() * d_logits + weight_decay * model.head_W;
  g.head_b = colsum(d_logits);

  const Matrix d_readout = d_logits * model.head_W.transpose();
  const auto d_last = static_cast<Eigen::Index>(model.layer_plan.back());
  Matrix d_h = Matrix::Zero(n, d_last);
  d_h.topRows(n_occ) = d_readout.leftCols(d_last);
  Matrix d_mean = Matrix::Zero(n, d_last);
  d_mean.topRows(n_occ) = d_readout.rightCols(d_last);
  d_h += aggregate_adjoint(d_mean, graph);

  for (std::size_t k = model.layers.size(); k-- > 0;) {
    const auto& layer = model.layers[k];
    const auto half = layer.W.cols();
    const Matrix d_self = d_h.leftCols(half);
    const Matrix d_pre =
        d_h.rightCols(half).cwiseProduct((cache.pre[k].array() > 0.0).cast<double>().matrix());
    auto& gl = g.layers[k];
    gl.W = cache.aggregated[k].transpose() * d_pre + weight_decay * layer.W;
    gl.bW = colsum(d_pre);
    gl.V = cache.inputs[k].transpose() * d_self + weight_decay * layer.V;
    gl.bV = colsum(d_self);
    Matrix d_in = d_self * layer.V.transpose();
    d_in += aggregate_adjoint(d_pre * layer.W.transpose(), graph);
    d_h = std::move(d_in);
  }
  g.features = std::move(d_h);
  return out;
}

std::vector<int> argmax_classes(const Matrix& probabilities, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) {
    const auto i = static_cast<Eigen::Index>(r);
    out.push_back(probabilities(i, 1) > probabilities(i, 0) ? 1 : 0);
  }
  return out;
}

namespace {

std::vector<int> truths_for(const NodeLabels& labels, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels.at(r));
  return out;
}

struct AdamState {
  std::vector<Matrix> m, v;
};

}  // namespace

TrainResult train(const GcnModel& model, const BipartiteGraph& graph, const NodeLabels& labels,
                  const Split& split, const TrainConfig& cfg) {
  if (split.train.empty()) throw Error(ErrorCode::EmptyMask, "training mask is empty");
  {
    std::vector<std::size_t> all(split.train);
    all.insert(all.end(), split.validation.begin(), split.validation.end());
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      throw Error(ErrorCode::Usage, "split parts overlap");
    }
  }
  if (labels.size() != graph.num_occupations()) {
    throw Error(ErrorCode::ShapeMismatch, "labels must cover every occupation");
  }

  TrainResult res;
  res.model = model;
  if (cfg.epochs == 0) return res;

  GcnModel current = model;
  AdamState adam;
  current.for_each([&](const std::string&, const Matrix& p) {
    adam.m.push_back(Matrix::Zero(p.rows(), p.cols()));
    adam.v.push_back(Matrix::Zero(p.rows(), p.cols()));
  });

  const std::size_t every = std::max<std::size_t>(1, cfg.eval_every);
  double best_f1 = -1.0;
  const auto val_truth = truths_for(labels, split.validation);
  const auto train_truth = truths_for(labels, split.train);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto lg = gradients(current, graph, labels, split.train, cfg.weight_decay);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch) +
                                                " training loss " + std::to_string(lg.loss));
    }
    const double t = static_cast<double>(epoch);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    std::vector<Matrix*> grads;
    lg.gradient.for_each([&](const std::string&, Matrix& gm) { grads.push_back(&gm); });
    std::size_t k = 0;
    current.for_each([&](const std::string& name, Matrix& p) {
      const Matrix& gr = *grads[k];
      auto& m = adam.m[k];
      auto& v = adam.v[k];
      ++k;
      if (name == "features" && !cfg.train_features) return;
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * gr;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * gr.cwiseProduct(gr);
      p.array() -= cfg.learning_rate * (m.array() / c1) /
                   ((v.array() / c2).sqrt() + cfg.epsilon);
    });

    if (epoch % every != 0 && epoch != cfg.epochs) continue;
    const auto cache = forward(current, graph);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss(current, cache.probabilities, labels, split.train, cfg.weight_decay);
    if (!std::isfinite(rec.train_loss)) {
      throw Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch) + " post-update loss");
    }
    rec.train_accuracy =
        metrics(confusion(argmax_classes(cache.probabilities, split.train), train_truth)).accuracy;
    if (!split.validation.empty()) {
      rec.val_loss = data_loss(cache.probabilities, labels, split.validation);
      const auto vm =
          metrics(confusion(argmax_classes(cache.probabilities, split.validation), val_truth));
      rec.val_accuracy = vm.accuracy;
      rec.val_f1 = vm.f1;
    }
    res.history.push_back(rec);

    const bool improved = split.validation.empty() ? true : rec.val_f1 > best_f1;
    if (improved) {
      best_f1 = rec.val_f1;
      res.best_epoch = epoch;
      res.best_val_f1 = rec.val_f1;
      res.model = current;
    }
    if (!split.validation.empty() && epoch - res.best_epoch >= cfg.patience) break;
  }
  return res;
}

std::vector<double> predict(const GcnModel& model, const BipartiteGraph& graph) {
  const auto cache = forward(model, graph);
  std::vector<double> out(graph.num_occupations());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = cache.probabilities(static_cast<Eigen::Index>(i), 1);
  }
  return out;
}

Matrix node_embeddings(const GcnModel& model, const BipartiteGraph& graph) {
  auto cache = forward(model, graph);
  return std::move(cache.outputs.back());
}

}  // namespace aocgcn
