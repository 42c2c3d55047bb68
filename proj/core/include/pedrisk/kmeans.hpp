#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace pedrisk {

struct KMeansResult {
  Eigen::MatrixXd centroids;       // K x N
  std::vector<int> assignment;     // per point, no empty cluster
  double wcss = 0.0;               // within-cluster sum of squares
  std::vector<double> wcss_history;  // per Lloyd iteration of the best run
  int iterations = 0;
};

// Lloyd iterations from k-means++ seeding, best of `restarts` runs by WCSS.
// Deterministic for a given seed: restart r draws from
// derive_seed(seed, "kmeans", r). Empty clusters are re-seeded from the point
// farthest from its centroid. Throws DataError when K exceeds the number of
// points.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed, int max_iters = 100);

double wcss_of(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
               const Eigen::MatrixXd& centroids);

}  // namespace pedrisk
