#include "pedrisk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pedrisk/error.hpp"

namespace pedrisk {

Eigen::MatrixXd knn_graph(const Eigen::MatrixXd& points, int k_nn) {
  const Eigen::Index m = points.rows();
  if (k_nn < 1) throw DataError("knn_graph: k_nn must be >= 1");
  if (m <= k_nn) {
    throw DataError("knn_graph: need more than k_nn = " + std::to_string(k_nn) +
                    " points, got " + std::to_string(m));
  }

  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(m, m);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd d2 = (points.rowwise() - points.row(i)).rowwise().squaredNorm();
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Deterministic under ties: sort by (distance, index).
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (d2(a) != d2(b)) return d2(a) < d2(b);
      return a < b;
    });
    int taken = 0;
    for (Eigen::Index j : order) {
      if (j == i) continue;
      adj(i, j) = 1.0;
      adj(j, i) = 1.0;
      if (++taken == k_nn) break;
    }
  }
  return adj;
}

namespace {

double median_connected_distance(const Eigen::MatrixXd& points,
                                 const Eigen::MatrixXd& adj) {
  std::vector<double> dists;
  for (Eigen::Index i = 0; i < adj.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < adj.cols(); ++j) {
      if (adj(i, j) > 0.0) {
        dists.push_back((points.row(i) - points.row(j)).norm());
      }
    }
  }
  if (dists.empty()) return 1.0;
  std::sort(dists.begin(), dists.end());
  std::size_t n = dists.size();
  return n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

}  // namespace

SpectralBasis spectral_basis(const Eigen::MatrixXd& points,
                             const SpectralParams& params) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd adj = knn_graph(points, params.k_nn);

  double sigma = params.sigma_s > 0.0 ? params.sigma_s
                                      : median_connected_distance(points, adj);
  if (!(sigma > 0.0)) sigma = 1.0;

  // Gaussian similarity on the graph edges.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (adj(i, j) > 0.0) {
        double d2 = (points.row(i) - points.row(j)).squaredNorm();
        double v = std::exp(-d2 / (2.0 * sigma * sigma));
        w(i, j) = v;
        w(j, i) = v;
      }
    }
  }

  Eigen::VectorXd degree = w.rowwise().sum();
  Eigen::MatrixXd laplacian;
  if (params.laplacian == LaplacianKind::Unnormalized) {
    laplacian = -w;
    laplacian.diagonal() += degree;
  } else {
    // L_sym = I - D^{-1/2} W D^{-1/2}; isolated vertices keep a unit row.
    Eigen::VectorXd inv_sqrt(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
    }
    laplacian = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
    laplacian.diagonal().array() += 1.0;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw NumericError("spectral: Laplacian eigensolver failed to converge");
  }

  SpectralBasis basis;
  basis.eigenvalues = solver.eigenvalues();
  basis.vectors = solver.eigenvectors();
  basis.laplacian = params.laplacian;
  basis.sigma_used = sigma;
  return basis;
}

SpectralResult spectral_cluster_from_basis(const SpectralBasis& basis, int k,
                                           std::uint64_t seed, int kmeans_restarts) {
  const Eigen::Index m = basis.vectors.rows();
  if (k < 1 || m < k) throw DataError("spectral: K out of range");

  SpectralResult res;
  res.eigenvalues = basis.eigenvalues;
  res.embedding = basis.vectors.leftCols(k);
  if (basis.laplacian == LaplacianKind::SymmetricNormalized) {
    for (Eigen::Index i = 0; i < m; ++i) {
      double norm = res.embedding.row(i).norm();
      if (norm > 0.0) res.embedding.row(i) /= norm;
    }
  }
  res.kmeans = kmeans(res.embedding, k, kmeans_restarts, seed);
  res.assignment = res.kmeans.assignment;
  return res;
}

SpectralResult spectral_cluster(const Eigen::MatrixXd& points,
                                const SpectralParams& params, std::uint64_t seed,
                                int kmeans_restarts) {
  if (points.rows() < params.k) {
    throw DataError("spectral: fewer points than clusters");
  }
  SpectralBasis basis = spectral_basis(points, params);
  return spectral_cluster_from_basis(basis, params.k, seed, kmeans_restarts);
}

int eigengap_suggestion(const Eigen::VectorXd& eigenvalues, int k_max) {
  int limit = std::min<int>(k_max, static_cast<int>(eigenvalues.size()) - 1);
  int best_k = 1;
  double best_gap = -1.0;
  for (int k = 1; k <= limit; ++k) {
    // Relative gap after the k-th eigenvalue; near-zero leading eigenvalues
    // (disconnected components) give a gap of ~1.
    double lo = std::max(eigenvalues(k - 1), 0.0);
    double hi = std::max(eigenvalues(k), 0.0);
    double gap = (hi - lo) / std::max(hi, 1e-12);
    if (gap > best_gap) {
      best_gap = gap;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace pedrisk
