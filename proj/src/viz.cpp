#include "aocgcn/viz.hpp"

#include "aocgcn/csv.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace aocgcn {

PcaResult pca(const Matrix& X, std::size_t k) {
  const auto n = X.rows(), d = X.cols();
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "pca needs at least 2 rows");
  if (k < 1 || k > static_cast<std::size_t>(std::min(n, d))) {
    throw Error(ErrorCode::Usage, fmt::format("k={} outside [1, min(N,d)]", k));
  }
  PcaResult r;
  r.mean = X.colwise().mean();
  const Matrix centered = X.rowwise() - r.mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::DegenerateInput, "eigensolver failed");
  const Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateInput, "zero variance");

  r.components.resize(static_cast<Eigen::Index>(k), d);
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = d - 1 - static_cast<Eigen::Index>(c);  // eigenvalues ascend
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    r.components.row(static_cast<Eigen::Index>(c)) = v.transpose();
    r.explained_ratio.push_back(values(col) / total);
  }
  r.projected = centered * r.components.transpose();
  return r;
}

namespace {

double sq_norm_row(const Matrix& X, Eigen::Index i, const Matrix& C, Eigen::Index j) {
  return (X.row(i) - C.row(j)).squaredNorm();
}

// Returns inertia of `assign` against `C`, reassigning every point to its
// nearest centroid (ties to the lowest index). Sets `changed` when any moved.
double assign_points(const Matrix& X, const Matrix& C, std::vector<std::size_t>& assign, bool& changed) {
  changed = false;
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < C.rows(); ++j) {
      const double dist = sq_norm_row(X, i, C, j);
      if (dist < best_d) {
        best_d = dist;
        best = static_cast<std::size_t>(j);
      }
    }
    if (assign[static_cast<std::size_t>(i)] != best) changed = true;
    assign[static_cast<std::size_t>(i)] = best;
    inertia += best_d;
  }
  return inertia;
}

void update_centroids(const Matrix& X, std::vector<std::size_t>& assign, Matrix& C) {
  const auto k = C.rows();
  C.setZero();
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto a = assign[static_cast<std::size_t>(i)];
    C.row(static_cast<Eigen::Index>(a)) += X.row(i);
    ++counts[a];
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)]) C.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)]) continue;
    // empty cluster: take the point farthest from its current centroid, from a
    // cluster that can spare one
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const auto a = assign[static_cast<std::size_t>(i)];
      if (counts[a] < 2) continue;
      const double dist = sq_norm_row(X, i, C, static_cast<Eigen::Index>(a));
      if (dist > far_d) {
        far_d = dist;
        far = i;
      }
    }
    if (far < 0) break;
    auto& a = assign[static_cast<std::size_t>(far)];
    --counts[a];
    C.row(j) = X.row(far);
    a = static_cast<std::size_t>(j);
    counts[static_cast<std::size_t>(j)] = 1;
  }
}

}  // namespace

KMeansResult kmeans(const Matrix& X, std::size_t k, std::uint64_t seed, std::size_t max_iter,
                    std::size_t restarts) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (k < 1 || k > n) throw Error(ErrorCode::Usage, fmt::format("k={} outside [1, N={}]", k, n));
  if (restarts < 1 || max_iter < 1) throw Error(ErrorCode::Usage, "restarts and max_iter must be >= 1");
  KMeansResult best;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    Matrix C(static_cast<Eigen::Index>(k), X.cols());
    // k-means++ seeding
    C.row(0) = X.row(static_cast<Eigen::Index>(rng.below(n)));
    std::vector<double> d2(n);
    for (std::size_t j = 1; j < k; ++j) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < j; ++c) {
          m = std::min(m, sq_norm_row(X, static_cast<Eigen::Index>(i), C, static_cast<Eigen::Index>(c)));
        }
        d2[i] = m;
        total += m;
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        double u = rng.uniform() * total;
        for (pick = 0; pick + 1 < n && u >= d2[pick]; ++pick) u -= d2[pick];
      } else {
        pick = static_cast<std::size_t>(rng.below(n));
      }
      C.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(pick));
    }

    KMeansResult run;
    run.assignments.assign(n, k);  // sentinel: everything "changes" on the first pass
    bool changed = true;
    for (std::size_t it = 0; it < max_iter; ++it) {
      const double inertia = assign_points(X, C, run.assignments, changed);
      run.inertia_history.push_back(inertia);
      if (!changed) break;
      update_centroids(X, run.assignments, C);
      ++run.iterations;
    }
    if (changed) {  // hit max_iter; finish with the centroids of the last assignment
      bool moved = false;
      run.inertia_history.push_back(assign_points(X, C, run.assignments, moved));
    }
    run.centroids = C;
    run.inertia = run.inertia_history.back();
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

Matrix squared_distances(const Matrix& X) {
  const Eigen::VectorXd norms = X.rowwise().squaredNorm();
  Matrix D = (-2.0 * (X * X.transpose())).eval();
  D.colwise() += norms;
  D.rowwise() += norms.transpose();
  D = D.cwiseMax(0.0);
  D.diagonal().setZero();
  return D;
}

Matrix conditional_affinities(const Matrix& sq_dist, double perplexity, std::vector<double>* achieved) {
  const auto n = sq_dist.rows();
  Matrix P = Matrix::Zero(n, n);
  const double target = std::log(perplexity);
  if (achieved) achieved->assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    // shift by the nearest distance; p(j|i) is unchanged and exp() stays in range
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, sq_dist(i, j));
    }
    auto entropy_at = [&](double beta) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double d = sq_dist(i, j) - dmin;
        const double v = j == i ? 0.0 : std::exp(-beta * d);
        row[static_cast<std::size_t>(j)] = v;
        sum += v;
        weighted += v * d;
      }
      for (auto& v : row) v /= sum;
      return std::log(sum) + beta * weighted / sum;
    };
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double h = entropy_at(beta);
    for (int step = 0; step < 200; ++step) {
      if (std::abs(std::exp(h) - perplexity) < 1e-5) break;
      if (h > target) {  // too flat: sharpen
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = (beta + lo) / 2.0;
      }
      h = entropy_at(beta);
    }
    for (Eigen::Index j = 0; j < n; ++j) P(i, j) = row[static_cast<std::size_t>(j)];
    if (achieved) (*achieved)[static_cast<std::size_t>(i)] = std::exp(h);
  }
  return P;
}

Matrix joint_affinities(const Matrix& conditional) {
  const auto n = static_cast<double>(conditional.rows());
  Matrix P = (conditional + conditional.transpose()) / (2.0 * n);
  return P.cwiseMax(std::numeric_limits<double>::min());
}

double kl_divergence(const Matrix& P, const Matrix& Y) {
  const auto n = P.rows();
  const Matrix D = squared_distances(Y);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) z += 1.0 / (1.0 + D(i, j));
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(1.0 / (1.0 + D(i, j)) / z, std::numeric_limits<double>::min());
      kl += P(i, j) * std::log(P(i, j) / q);
    }
  }
  return kl;
}

TsneResult tsne(const Matrix& X, const TsneOptions& opts) {
  const auto n = X.rows();
  if (opts.perplexity < 2.0) throw Error(ErrorCode::Usage, "perplexity must be >= 2");
  if (static_cast<double>(n) < 3.0 * opts.perplexity) {
    throw Error(ErrorCode::PerplexityTooLarge,
                fmt::format("N={} < 3 x perplexity {}", n, opts.perplexity));
  }
  TsneResult r;
  const Matrix P = joint_affinities(conditional_affinities(squared_distances(X), opts.perplexity,
                                                           &r.row_perplexity));
  Rng rng(opts.seed);
  Matrix Y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    Y(i, 0) = 1e-4 * rng.normal();
    Y(i, 1) = 1e-4 * rng.normal();
  }
  r.initial_kl = kl_divergence(P, Y);

  Matrix update = Matrix::Zero(n, 2), gains = Matrix::Ones(n, 2), grad(n, 2), num(n, n);
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    const double exaggeration = it < opts.exaggeration_iterations ? opts.early_exaggeration : 1.0;
    const double momentum = it < opts.momentum_switch ? opts.initial_momentum : opts.final_momentum;
    const Matrix D = squared_distances(Y);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = i == j ? 0.0 : 1.0 / (1.0 + D(i, j));
        num(i, j) = v;
        z += v;
      }
    }
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double w = (exaggeration * P(i, j) - num(i, j) / z) * num(i, j);
        gx += w * (Y(i, 0) - Y(j, 0));
        gy += w * (Y(i, 1) - Y(j, 1));
      }
      grad(i, 0) = 4.0 * gx;
      grad(i, 1) = 4.0 * gy;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        const bool same = (grad(i, c) > 0) == (update(i, c) > 0);
        gains(i, c) = same ? std::max(gains(i, c) * 0.8, 0.01) : gains(i, c) + 0.2;
        update(i, c) = momentum * update(i, c) - opts.learning_rate * gains(i, c) * grad(i, c);
      }
    }
    Y += update;
    Y.rowwise() -= Y.colwise().mean();
  }
  if (!all_finite(Y)) throw Error(ErrorCode::NonFiniteLoss, "t-SNE diverged");
  r.embedding = Y;
  r.final_kl = kl_divergence(P, Y);
  return r;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scatter_svg(const Matrix& points, const std::vector<std::string>& labels,
                        const std::string& title) {
  if (points.cols() != 2) throw Error(ErrorCode::ShapeMismatch, "scatter needs N x 2 points");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels vs points");
  }
  if (!all_finite(points)) throw Error(ErrorCode::DegenerateInput, "non-finite coordinates");
  constexpr double W = 640, H = 560, M = 40, plot = 480;
  std::map<std::string, std::size_t> color_of;
  for (const auto& l : std::set<std::string>(labels.begin(), labels.end())) {
    color_of.emplace(l, color_of.size());
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (points.rows() > 0) {
    x0 = points.col(0).minCoeff();
    x1 = points.col(0).maxCoeff();
    y0 = points.col(1).minCoeff();
    y1 = points.col(1).maxCoeff();
  }
  const double sx = x1 > x0 ? plot / (x1 - x0) : 0.0, sy = y1 > y0 ? plot / (y1 - y0) : 0.0;

  std::string out;
  out += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      W, H);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  out += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n", M,
                     xml_escape(title));
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", M - 8,
      M - 8, plot + 16, plot + 16);
  out += "<g id=\"points\">\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double px = M + (sx > 0 ? (points(i, 0) - x0) * sx : plot / 2);
    const double py = M + plot - (sy > 0 ? (points(i, 1) - y0) * sy : plot / 2);
    const auto color = labels.empty() ? kPalette[0]
                                      : kPalette[color_of.at(labels[static_cast<std::size_t>(i)]) % 8];
    out += fmt::format("<circle class=\"marker\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                       px, py, color);
  }
  out += "</g>\n<g id=\"legend\">\n";
  double ly = M;
  for (const auto& [label, idx] : color_of) {
    out += fmt::format(
        "<g class=\"legend-entry\"><rect x=\"{0}\" y=\"{1}\" width=\"10\" height=\"10\" fill=\"{2}\"/>"
        "<text x=\"{3}\" y=\"{4}\" font-family=\"sans-serif\" font-size=\"12\">{5}</text></g>\n",
        M + plot + 24, ly, kPalette[idx % 8], M + plot + 40, ly + 10, xml_escape(label));
    ly += 18;
  }
  out += "</g>\n</svg>\n";
  return out;
}

void emit_scatter(const Matrix& points, const std::vector<std::string>& labels, const std::string& title,
                  const std::filesystem::path& path) {
  csv::write_text(path, scatter_svg(points, labels, title));
}

std::string coordinates_csv(const std::vector<std::string>& ids, const Matrix& points,
                            const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(ids.size()) != points.rows() ||
      (!labels.empty() && labels.size() != ids.size())) {
    throw Error(ErrorCode::LengthMismatch, "ids, points and labels must align");
  }
  std::string out = csv::format_row({"id", "x", "y", "label"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += csv::format_row({ids[i], fmt::format("{:.6f}", points(r, 0)), fmt::format("{:.6f}", points(r, 1)),
                            labels.empty() ? std::string() : labels[i]});
  }
  return out;
}

}  // namespace aocgcn
