#include "aocgcn/viz.hpp"

#include "../common/xmlcheck.hpp"
#include "support.hpp"

#include <cmath>
#include <set>

using namespace aocgcn;
using testing::error_of;

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = rng.uniform(-1, 1);
  return m;
}

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix; eigenvalues
// returned in descending order with matching eigenvector columns.
void jacobi_eigen(Matrix A, std::vector<double>& values, Matrix& vectors) {
  const Eigen::Index n = A.rows();
  vectors = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return A(a, a) > A(b, b); });
  Matrix sorted(n, n);
  values.clear();
  for (Eigen::Index i = 0; i < n; ++i) {
    values.push_back(A(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]));
    sorted.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  vectors = sorted;
}

double row_perplexity(const Matrix& P, Eigen::Index i) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < P.cols(); ++j) {
    if (P(i, j) > 0) h -= P(i, j) * std::log2(P(i, j));
  }
  return std::pow(2.0, h);
}

}  // namespace

TEST_SUITE("viz") {

TEST_CASE("pca on collinear points") {
  Matrix X(5, 2);
  for (int i = 0; i < 5; ++i) X.row(i) << i - 1.5, 2.0 * (i - 1.5);
  const auto r = pca(X, 2);
  CHECK(std::abs(r.explained_ratio[0] - 1.0) < 1e-9);
  CHECK(r.components(0, 1) > 0);
  CHECK(error_of([] { pca(Matrix::Ones(4, 3), 2); }) == ErrorCode::DegenerateInput);
  CHECK(error_of([] { pca(Matrix::Ones(1, 3), 1); }) == ErrorCode::DegenerateInput);
}

TEST_CASE("pca matches an independent eigendecomposition") {
  // mean-zero 4x3 matrix with mutually orthogonal rows
  Matrix X(4, 3);
  X << 1, 1, 1, -1, 1, 0, 1, -1, -1, -1, -1, 0;
  REQUIRE(X.colwise().sum().isZero(1e-15));
  const Matrix C = X.transpose() * X / 3.0;
  std::vector<double> values;
  Matrix vecs;
  jacobi_eigen(C, values, vecs);
  const auto r = pca(X, 3);
  double total = 0.0;
  for (double v : values) total += v;
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(r.explained_ratio[static_cast<std::size_t>(k)] - values[static_cast<std::size_t>(k)] / total) < 1e-9);
    // projected variance along each component equals its eigenvalue
    CHECK(std::abs(r.projected.col(k).squaredNorm() / 3.0 - values[static_cast<std::size_t>(k)]) < 1e-9);
    // same direction up to sign
    CHECK(std::abs(std::abs(r.components.row(k).dot(vecs.col(k).transpose())) - 1.0) < 1e-9);
  }
}

TEST_CASE("pca properties on random data") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 8 + static_cast<Eigen::Index>(rng.below(30));
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.below(6));
    const auto X = random_matrix(rng, n, d);
    const auto r = pca(X, static_cast<std::size_t>(d));
    const Matrix gram = r.components * r.components.transpose();
    CHECK((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
    double sum = 0.0;
    for (std::size_t k = 0; k < r.explained_ratio.size(); ++k) {
      sum += r.explained_ratio[k];
      if (k + 1 < r.explained_ratio.size()) CHECK(r.explained_ratio[k] >= r.explained_ratio[k + 1]);
    }
    CHECK(sum <= 1.0 + 1e-9);
    const Matrix centered = X.rowwise() - X.colwise().mean();
    CHECK((r.projected * r.components - centered).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index k = 0; k < d; ++k) {
      Eigen::Index arg;
      r.components.row(k).cwiseAbs().maxCoeff(&arg);
      CHECK(r.components(k, arg) > 0);
    }
  }
}

TEST_CASE("kmeans examples") {
  Matrix X(4, 2);
  X << 0, 0.01, 0.01, 0, 10, 10.01, 10.01, 10;
  const auto one = kmeans(X, 1, 3);
  CHECK((one.centroids.row(0) - X.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(one.iterations == 1);

  const auto two = kmeans(X, 2, 3);
  CHECK(two.assignments[0] == two.assignments[1]);
  CHECK(two.assignments[2] == two.assignments[3]);
  CHECK(two.assignments[0] != two.assignments[2]);
  CHECK(error_of([&] { kmeans(X, 5, 1); }) == ErrorCode::Usage);
}

TEST_CASE("kmeans inertia and stability on random data") {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto X = random_matrix(rng, 20 + static_cast<Eigen::Index>(rng.below(60)), 3);
    const std::size_t k = 2 + rng.below(4);
    const auto r = kmeans(X, k, rng.next(), 300, 3);
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-12);
    }
    // each point sits at its nearest centroid
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      Eigen::Index best;
      (r.centroids.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
      const double d_best = (r.centroids.row(best) - X.row(i)).squaredNorm();
      const double d_own = (r.centroids.row(static_cast<Eigen::Index>(r.assignments[static_cast<std::size_t>(i)])) - X.row(i)).squaredNorm();
      CHECK(d_own <= d_best + 1e-12);
    }
    CHECK(std::set<std::size_t>(r.assignments.begin(), r.assignments.end()).size() == k);
    const auto again = kmeans(X, k, 5, 300, 3);
    CHECK(again.assignments == kmeans(X, k, 5, 300, 3).assignments);
  }
}

TEST_CASE("perplexity bisection") {
  Rng rng(11);
  const auto X = random_matrix(rng, 120, 5);
  std::vector<double> achieved;
  const auto P = conditional_affinities(squared_distances(X), 30.0, &achieved);
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    CHECK(std::abs(P.row(i).sum() - 1.0) <= 1e-9);
    CHECK(P(i, i) == 0.0);
    CHECK(std::abs(row_perplexity(P, i) - 30.0) < 1e-3);
    CHECK(std::abs(achieved[static_cast<std::size_t>(i)] - 30.0) < 1e-3);
  }
  const auto J = joint_affinities(P);
  CHECK((J - J.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(J.sum() - 1.0) < 1e-12);
}

TEST_CASE("tsne keeps duplicates together and lowers KL") {
  Rng rng(12);
  Matrix X = random_matrix(rng, 30, 6) * 5.0;
  const int dup[5][2] = {{0, 25}, {3, 26}, {7, 27}, {11, 28}, {19, 29}};
  for (auto [a, b] : dup) X.row(b) = X.row(a);
  TsneOptions o;
  o.perplexity = 5;
  o.iterations = 500;
  o.seed = 4;
  const auto r = tsne(X, o);
  CHECK(r.final_kl < r.initial_kl);
  CHECK(all_finite(r.embedding));
  for (auto [a, b] : dup) {
    const double pair = (r.embedding.row(a) - r.embedding.row(b)).norm();
    for (int c = 0; c < 30; ++c) {
      if (c == a || c == b) continue;
      CHECK(pair < (r.embedding.row(a) - r.embedding.row(c)).norm());
    }
  }
  CHECK(tsne(X, o).embedding == r.embedding);
  o.perplexity = 11;
  CHECK(error_of([&] { tsne(X, o); }) == ErrorCode::PerplexityTooLarge);
  o.perplexity = 1.5;
  CHECK(error_of([&] { tsne(X, o); }) == ErrorCode::Usage);
}

TEST_CASE("scatter svg") {
  const Matrix pts = (Matrix(2, 2) << 0, 0, 1, 1).finished();
  const auto two = scatter_svg(pts, {"automated", "non-automated"}, "t");
  std::string why;
  CHECK_MESSAGE(xmlcheck::well_formed(two, &why), why);
  CHECK(xmlcheck::count(two, "<circle class=\"marker\"") == 2);
  CHECK(xmlcheck::count(two, "class=\"legend-entry\"") == 2);

  const auto plain = scatter_svg(pts, {}, "t");
  CHECK(xmlcheck::count(plain, "class=\"legend-entry\"") == 0);
  std::set<std::string> fills;
  for (auto p = plain.find("<circle"); p != std::string::npos; p = plain.find("<circle", p + 1)) {
    const auto f = plain.find("fill=\"", p);
    fills.insert(plain.substr(f, plain.find('"', f + 6) - f));
  }
  CHECK(fills.size() == 1);

  Rng rng(3);
  const auto big = random_matrix(rng, 300, 2);
  std::vector<std::string> labels;
  for (int i = 0; i < 300; ++i) labels.push_back(i % 3 == 0 ? "a<b & \"c\"" : "cluster " + std::to_string(i % 3));
  const auto svg = scatter_svg(big, labels, "Fig & <test>");
  CHECK_MESSAGE(xmlcheck::well_formed(svg, &why), why);
  CHECK(svg == scatter_svg(big, labels, "Fig & <test>"));
  CHECK(error_of([&] { scatter_svg(big, {"x"}, "t"); }) == ErrorCode::LengthMismatch);

  const auto csv = coordinates_csv({"a", "b"}, pts, {"x", "y"});
  CHECK(csv.rfind("id,x,y,label\n", 0) == 0);
}

}  // TEST_SUITE
