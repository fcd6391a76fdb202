#include "aocgcn/gcn.hpp"

#include "../common/gradcheck.hpp"
#include "support.hpp"

#include <cmath>
#include <numeric>

using namespace aocgcn;
using testing::error_of;

namespace {

std::vector<OccupationRecord> occs(std::size_t n, const std::string& prefix = "o") {
  std::vector<OccupationRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), "t", {"x"}});
  return out;
}
std::vector<SkillRecord> skills(std::size_t n, const std::string& prefix = "s") {
  std::vector<SkillRecord> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back({prefix + std::to_string(j), "n"});
  return out;
}

BipartiteGraph one_one(const Matrix& o, const Matrix& s) {
  return build_graph(occs(1), skills(1), {{"o0", "s0"}}, o, s);
}

GcnLayerParams layer(const Matrix& V, const Matrix& W) {
  return {W, V, Matrix::Zero(1, W.cols()), Matrix::Zero(1, V.cols())};
}

}  // namespace

TEST_SUITE("gcn") {

TEST_CASE("aggregate examples") {
  const auto g = one_one((Matrix(1, 2) << 2, 0).finished(), (Matrix(1, 2) << 0, 4).finished());
  const auto a = aggregate(g.features(), g);
  CHECK(a.row(0) == (RowVector(2) << 0, 4).finished());
  CHECK(a.row(1) == (RowVector(2) << 2, 0).finished());

  const auto star = build_graph(occs(2), skills(1), {{"o0", "s0"}, {"o1", "s0"}},
                                (Matrix(2, 2) << 1, 1, 3, 3).finished(), Matrix::Zero(1, 2));
  CHECK(aggregate(star.features(), star).row(2) == (RowVector(2) << 2, 2).finished());

  const Matrix c = Matrix::Constant(3, 2, 0.7);
  const auto path = build_graph(occs(2), skills(1), {{"o0", "s0"}, {"o1", "s0"}}, Matrix::Zero(2, 2),
                                Matrix::Zero(1, 2));
  CHECK(aggregate(c, path) == c);
  CHECK(error_of([&] { aggregate(Matrix::Zero(2, 2), path); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("aggregate adjoint satisfies <Ax, y> = <x, A'y>") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = gradcheck::random_instance(rng);
    const auto n = static_cast<Eigen::Index>(inst.graph.num_nodes());
    Matrix x(n, 3), y(n, 3);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      x.data()[k] = rng.uniform(-1, 1);
      y.data()[k] = rng.uniform(-1, 1);
    }
    const double lhs = aggregate(x, inst.graph).cwiseProduct(y).sum();
    const double rhs = x.cwiseProduct(aggregate_adjoint(y, inst.graph)).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("layer_forward examples") {
  const auto g = one_one((Matrix(1, 1) << 1).finished(), (Matrix(1, 1) << -1).finished());
  const auto out = layer_forward(g.features(), layer(Matrix::Constant(1, 1, 2), Matrix::Constant(1, 1, 3)), g);
  CHECK(out.row(0) == (RowVector(2) << 2, 0).finished());
  CHECK(out.row(1) == (RowVector(2) << -2, 3).finished());

  // identity weights on nonnegative inputs: concat(self, neighbour mean)
  const auto t = build_graph(occs(2), skills(2), {{"o0", "s0"}, {"o0", "s1"}, {"o1", "s1"}},
                             (Matrix(2, 2) << 1, 2, 3, 4).finished(), (Matrix(2, 2) << 5, 6, 7, 8).finished());
  const Matrix I = Matrix::Identity(2, 2);
  const auto id = layer_forward(t.features(), layer(I, I), t);
  Matrix expected(4, 4);
  expected << 1, 2, 6, 7,  //
      3, 4, 7, 8,          //
      5, 6, 1, 2,          //
      7, 8, 2, 3;
  CHECK(id == expected);

  const auto neg = layer_forward(t.features(), layer(I, -I), t);
  CHECK(neg.rightCols(2).isZero());
  CHECK(error_of([&] { layer_forward(Matrix::Zero(4, 3), layer(I, I), t); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("readout examples") {
  const auto g = one_one(Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  Matrix z(2, 2);
  z << 1, 2, 3, 4;
  CHECK(readout(z, g).row(0) == (RowVector(4) << 1, 2, 3, 4).finished());

  // 3 occupations x 2 skills; o0 links both skills
  const auto t = build_graph(occs(3), skills(2), {{"o0", "s0"}, {"o0", "s1"}, {"o1", "s0"}, {"o2", "s1"}},
                             Matrix::Zero(3, 1), Matrix::Zero(2, 1));
  Matrix f(5, 2);
  f << 1, 1, 2, 2, 3, 3, 10, 20, 30, 40;
  const auto r = readout(f, t);
  CHECK(r.rows() == 3);
  CHECK(r.row(0).tail(2) == (RowVector(2) << 20, 30).finished());

  // identical skill sets and z_o give identical rows
  const auto twin = build_graph(occs(2), skills(1), {{"o0", "s0"}, {"o1", "s0"}}, Matrix::Zero(2, 1),
                                Matrix::Zero(1, 1));
  Matrix tz(3, 2);
  tz << 1, 2, 1, 2, 5, 6;
  const auto tr = readout(tz, twin);
  CHECK(tr.row(0) == tr.row(1));
  CHECK(error_of([&] { readout(Matrix::Zero(4, 2), twin); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("classify and softmax") {
  const auto p = classify(Matrix::Ones(3, 4), Matrix::Zero(4, 2), Matrix::Zero(1, 2));
  CHECK(p.isApproxToConstant(0.5));
  Matrix logits(1, 2);
  logits << std::log(3.0), 0.0;
  const auto s = softmax_rows(logits);
  CHECK(s(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(error_of([] { classify(Matrix::Ones(3, 4), Matrix::Zero(3, 2), Matrix::Zero(1, 2)); }) ==
        ErrorCode::ShapeMismatch);

  Rng rng(8);
  Matrix big(200, 2);
  for (Eigen::Index k = 0; k < big.size(); ++k) big.data()[k] = rng.uniform(-800, 800);
  const auto sb = softmax_rows(big);
  for (Eigen::Index r = 0; r < sb.rows(); ++r) {
    CHECK(std::abs(sb.row(r).sum() - 1.0) <= 1e-9);
    CHECK(sb(r, 0) >= 0.0);
    CHECK(sb(r, 1) >= 0.0);
  }
}

TEST_CASE("loss examples") {
  NodeLabels y{1, 0};
  Matrix perfect(2, 2);
  perfect << 0, 1, 1, 0;
  CHECK(data_loss(perfect, y, {0, 1}) == 0.0);
  const Matrix uniform = Matrix::Constant(2, 2, 0.5);
  CHECK(data_loss(uniform, y, {0, 1}) == doctest::Approx(std::log(2.0)));
  Matrix p(2, 2);
  p << 0.1, 0.9, 0.8, 0.2;
  CHECK(data_loss(p, y, {0, 1}) == doctest::Approx(-(std::log(0.9) + std::log(0.8)) / 2).epsilon(1e-14));
  CHECK(error_of([&] { data_loss(p, y, {}); }) == ErrorCode::EmptyMask);
}

TEST_CASE("decay excludes node features and doubles with the coefficient") {
  Rng rng(3);
  const auto inst = gradcheck::random_instance(rng);
  double sq = 0.0;
  inst.model.for_each([&](const std::string& name, const Matrix& m) {
    const bool weight = name == "head.W" || name.ends_with(".W") || name.ends_with(".V");
    if (weight) sq += m.squaredNorm();
  });
  CHECK(decay_term(inst.model, 0.2) == doctest::Approx(0.1 * sq).epsilon(1e-12));

  const auto g0 = gradients(inst.model, inst.graph, inst.labels, inst.mask, 0.0).gradient;
  const auto g1 = gradients(inst.model, inst.graph, inst.labels, inst.mask, 0.01).gradient;
  const auto g2 = gradients(inst.model, inst.graph, inst.labels, inst.mask, 0.02).gradient;
  CHECK(((g2.head_W - g0.head_W) - 2.0 * (g1.head_W - g0.head_W)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((g1.features - g0.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("head bias gradient is mean(p - onehot)") {
  Rng rng(12);
  const auto inst = gradcheck::random_instance(rng);
  const auto cache = forward(inst.model, inst.graph);
  RowVector expected = RowVector::Zero(2);
  for (auto i : inst.mask) {
    RowVector onehot = RowVector::Zero(2);
    onehot(inst.labels[i]) = 1.0;
    expected += cache.probabilities.row(static_cast<Eigen::Index>(i)) - onehot;
  }
  expected /= static_cast<double>(inst.mask.size());
  const auto g = gradients(inst.model, inst.graph, inst.labels, inst.mask, 0.05).gradient;
  CHECK((g.head_b - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gradients match central differences on random instances") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = gradcheck::random_instance(rng);
    const auto rep = gradcheck::check(inst);
    INFO(rep.worst);
    CHECK(rep.max_rel_error < 1e-4);
    CHECK(rep.objective_gap < 1e-12);
    worst = std::max(worst, rep.max_rel_error);
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("four-node toy graph gradient, eps 1e-4") {
  const auto g = build_graph(occs(2), skills(2), {{"o0", "s0"}, {"o0", "s1"}, {"o1", "s1"}},
                             (Matrix(2, 2) << 0.3, -0.2, 0.1, 0.5).finished(),
                             (Matrix(2, 2) << -0.4, 0.2, 0.6, -0.1).finished());
  gradcheck::Instance inst{g, init_model({2, 4, 2}, g.features(), 9), {1, 0}, {0, 1}, 5e-4};
  inst.model.head_b << 0.1, -0.2;
  CHECK(gradcheck::check(inst, 1e-4).max_rel_error < 1e-4);
}

TEST_CASE("permutation equivariance of the forward pass") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t no = 4 + rng.below(4), ns = 3 + rng.below(3);
    std::vector<std::size_t> po(no), ps(ns);
    std::iota(po.begin(), po.end(), 0);
    std::iota(ps.begin(), ps.end(), 0);
    rng.shuffle(po.begin(), po.end());
    rng.shuffle(ps.begin(), ps.end());
    std::vector<LinkRecord> links, plinks;
    for (std::size_t i = 0; i < no; ++i) {
      for (std::size_t j = 0; j < ns; ++j) {
        if (rng.uniform() < 0.5 || j == i % ns) {
          links.push_back({"o" + std::to_string(i), "s" + std::to_string(j)});
          plinks.push_back({"o" + std::to_string(po[i]), "s" + std::to_string(ps[j])});
        }
      }
    }
    Matrix fo(static_cast<Eigen::Index>(no), 3), fs(static_cast<Eigen::Index>(ns), 3);
    for (Eigen::Index k = 0; k < fo.size(); ++k) fo.data()[k] = rng.uniform(-1, 1);
    for (Eigen::Index k = 0; k < fs.size(); ++k) fs.data()[k] = rng.uniform(-1, 1);
    Matrix pfo(fo.rows(), 3), pfs(fs.rows(), 3);
    for (std::size_t i = 0; i < no; ++i) pfo.row(static_cast<Eigen::Index>(po[i])) = fo.row(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < ns; ++j) pfs.row(static_cast<Eigen::Index>(ps[j])) = fs.row(static_cast<Eigen::Index>(j));
    const auto g = build_graph(occs(no), skills(ns), links, fo, fs);
    const auto pg = build_graph(occs(no), skills(ns), plinks, pfo, pfs);
    auto m = init_model({3, 4, 4}, g.features(), 77);
    auto pm = m;
    pm.features = pg.features();
    const auto a = forward(m, g);
    const auto b = forward(pm, pg);
    for (std::size_t i = 0; i < no; ++i) {
      const auto diff = (a.probabilities.row(static_cast<Eigen::Index>(i)) -
                         b.probabilities.row(static_cast<Eigen::Index>(po[i])))
                            .cwiseAbs()
                            .maxCoeff();
      CHECK(diff < 1e-12);
    }
    const auto za = node_embeddings(m, g), zb = node_embeddings(pm, pg);
    for (std::size_t j = 0; j < ns; ++j) {
      const auto diff = (za.row(static_cast<Eigen::Index>(no + j)) -
                         zb.row(static_cast<Eigen::Index>(no + ps[j])))
                            .cwiseAbs()
                            .maxCoeff();
      CHECK(diff < 1e-12);
    }
  }
}

TEST_CASE("two layers plus readout reach three hops, not four") {
  // chain o0 - s0 - o1 - s1 - o2 - s2 - o3
  const auto g = build_graph(occs(4), skills(3),
                             {{"o0", "s0"}, {"o1", "s0"}, {"o1", "s1"}, {"o2", "s1"}, {"o2", "s2"}, {"o3", "s2"}},
                             (Matrix(4, 2) << 0.2, -0.1, 0.4, 0.3, -0.5, 0.1, 0.7, -0.2).finished(),
                             (Matrix(3, 2) << -0.3, 0.6, 0.1, 0.1, 0.5, -0.4).finished());
  const auto m = init_model({2, 4, 4}, g.features(), 4);
  const auto base = forward(m, g).readout;
  auto far = m;
  far.features.row(g.stacked_index({NodeKind::Skill, 2})) *= -3.0;                         // distance 5
  far.features.row(g.stacked_index({NodeKind::Occupation, 2})) += RowVector::Constant(2, 2.0);  // distance 4
  CHECK(forward(far, g).readout.row(0) == base.row(0));
  auto near = m;
  near.features.row(g.stacked_index({NodeKind::Skill, 1})) += RowVector::Constant(2, 2.0);  // distance 3
  CHECK(forward(near, g).readout.row(0) != base.row(0));
}

TEST_CASE("training: zero epochs, toy convergence, determinism, early stop") {
  // Six occupations, two skills; each class links its own skill.
  const auto g = build_graph(occs(6), skills(2),
                             {{"o0", "s0"}, {"o1", "s0"}, {"o2", "s0"}, {"o3", "s1"}, {"o4", "s1"}, {"o5", "s1"}},
                             (Matrix(6, 2) << 1, 0, 0.9, 0.1, 0.8, 0, 0, 1, 0.1, 0.9, 0, 0.8).finished(),
                             (Matrix(2, 2) << 1, 0, 0, 1).finished());
  const NodeLabels y{1, 1, 1, 0, 0, 0};
  Split split;
  split.train = {0, 1, 2, 3, 4, 5};
  const auto m0 = init_model({2, 4, 4}, g.features(), 1);

  TrainConfig none;
  none.epochs = 0;
  CHECK(train(m0, g, y, split, none).model == m0);

  TrainConfig cfg;
  cfg.epochs = 200;
  const auto r = train(m0, g, y, split, cfg);
  CHECK(r.history.back().train_accuracy == 1.0);
  for (const auto& h : r.history) CHECK(std::isfinite(h.train_loss));
  const auto again = train(m0, g, y, split, cfg);
  REQUIRE(again.history.size() == r.history.size());
  for (std::size_t i = 0; i < r.history.size(); ++i) CHECK(again.history[i].train_loss == r.history[i].train_loss);
  CHECK(again.model == r.model);

  Split with_val;
  with_val.train = {0, 1, 3, 4};
  with_val.validation = {2, 5};
  cfg.patience = 5;
  const auto es = train(m0, g, y, with_val, cfg);
  double best = -1.0;
  std::size_t first_best = 0;
  for (const auto& h : es.history) {
    if (h.val_f1 > best) {
      best = h.val_f1;
      first_best = h.epoch;
    }
  }
  CHECK(es.best_epoch == first_best);
  CHECK(es.best_val_f1 == best);
  CHECK(es.history.back().epoch - es.best_epoch <= cfg.patience);

  CHECK(error_of([&] { train(m0, g, y, Split{}, cfg); }) == ErrorCode::EmptyMask);
}

TEST_CASE("predict with a zero head gives one half") {
  Rng rng(6);
  auto inst = gradcheck::random_instance(rng);
  inst.model.head_W.setZero();
  inst.model.head_b.setZero();
  for (double p : predict(inst.model, inst.graph)) CHECK(p == 0.5);
}

TEST_CASE("layer plan validation") {
  CHECK(error_of([] { validate_layer_plan({4}); }) == ErrorCode::Usage);
  CHECK(error_of([] { validate_layer_plan({4, 3}); }) == ErrorCode::Usage);
  CHECK(error_of([] { validate_layer_plan({0, 4}); }) == ErrorCode::Usage);
  validate_layer_plan({200, 256, 256});
}

}  // TEST_SUITE
