#pragma once

#include "aocgcn/common.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aocgcn {

struct PcaResult {
  Matrix components;  // k x d, orthonormal rows
  Matrix projected;   // N x k
  std::vector<double> explained_ratio;
  RowVector mean;
};

// Eigendecomposition of the sample covariance. Each component is signed so
// that its largest-magnitude entry is positive.
PcaResult pca(const Matrix& X, std::size_t k);

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Matrix centroids;
  std::vector<double> inertia_history;  // of the kept restart
  double inertia = 0.0;
  std::size_t iterations = 0;
};

// Lloyd iterations from k-means++ seeding, best of `restarts` by final
// inertia. A cluster that empties takes the point farthest from its centroid.
KMeansResult kmeans(const Matrix& X, std::size_t k, std::uint64_t seed, std::size_t max_iter = 300,
                    std::size_t restarts = 10);

struct TsneOptions {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch = 250;
  std::uint64_t seed = 1;
};

struct TsneResult {
  Matrix embedding;  // N x 2
  double initial_kl = 0.0;
  double final_kl = 0.0;
  std::vector<double> row_perplexity;
};

Matrix squared_distances(const Matrix& X);
// Row-conditional affinities p(j|i) matched to `perplexity` by bisection on
// the Gaussian precision. Achieved per-row perplexities go to `achieved`.
Matrix conditional_affinities(const Matrix& sq_dist, double perplexity, std::vector<double>* achieved);
Matrix joint_affinities(const Matrix& conditional);
double kl_divergence(const Matrix& P, const Matrix& Y);

// Exact O(N^2) t-SNE.
TsneResult tsne(const Matrix& X, const TsneOptions& opts = {});

// Standalone SVG scatter, one circle per point colored by label, with a legend
// of the distinct labels in sorted order. Empty `labels` draws one color.
std::string scatter_svg(const Matrix& points, const std::vector<std::string>& labels,
                        const std::string& title);
void emit_scatter(const Matrix& points, const std::vector<std::string>& labels, const std::string& title,
                  const std::filesystem::path& path);

// id,x,y,label
std::string coordinates_csv(const std::vector<std::string>& ids, const Matrix& points,
                            const std::vector<std::string>& labels);

}  // namespace aocgcn
