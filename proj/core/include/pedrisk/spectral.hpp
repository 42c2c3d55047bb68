#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pedrisk/kmeans.hpp"

namespace pedrisk {

enum class LaplacianKind { Unnormalized, SymmetricNormalized };

struct SpectralParams {
  int k_nn = 10;
  double sigma_s = 0.0;  // 0: median distance among connected pairs
  int k = 4;             // clusters
  LaplacianKind laplacian = LaplacianKind::SymmetricNormalized;
};

// Symmetrized k-nearest-neighbor adjacency: edge (i,j) present iff j is
// among i's k_nn nearest or i among j's. 0/1 matrix, zero diagonal.
// Requires rows > k_nn.
Eigen::MatrixXd knn_graph(const Eigen::MatrixXd& points, int k_nn);

// Eigen-decomposition of the graph Laplacian, reusable across several K.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd vectors;      // columns matching eigenvalues
  LaplacianKind laplacian = LaplacianKind::SymmetricNormalized;
  double sigma_used = 0.0;
};

SpectralBasis spectral_basis(const Eigen::MatrixXd& points,
                             const SpectralParams& params);

struct SpectralResult {
  std::vector<int> assignment;
  Eigen::VectorXd eigenvalues;  // all Laplacian eigenvalues, ascending
  Eigen::MatrixXd embedding;    // M x K rows fed to k-means
  KMeansResult kmeans;
};

// Gaussian-weighted kNN similarity graph, Laplacian eigenvectors of the K
// smallest eigenvalues as the embedding (row-normalized for the symmetric
// normalized Laplacian), then k-means on the embedding.
SpectralResult spectral_cluster(const Eigen::MatrixXd& points,
                                const SpectralParams& params, std::uint64_t seed,
                                int kmeans_restarts = 10);

// Same, reusing a precomputed basis (select_k path).
SpectralResult spectral_cluster_from_basis(const SpectralBasis& basis, int k,
                                           std::uint64_t seed,
                                           int kmeans_restarts = 10);

// Largest-gap heuristic on the smallest Laplacian eigenvalues; reported
// informationally next to the information criteria.
int eigengap_suggestion(const Eigen::VectorXd& eigenvalues, int k_max);

}  // namespace pedrisk
