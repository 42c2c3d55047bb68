#pragma once

#include <Eigen/Core>
#include <vector>

namespace pedrisk {

// Information criteria over a clustering: the within-cluster sum of squares
// plus a complexity penalty. K is the centroid count, N the data dimension,
// M the number of points.
//   aic = WCSS + 2 * K * N
//   bic = WCSS + ln(M) * K * N
double aic(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
           const Eigen::MatrixXd& centroids);
double bic(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
           const Eigen::MatrixXd& centroids);

struct SilhouetteResult {
  std::vector<double> scores;  // per point, in [-1, 1]
  double mean = 0.0;
};

// Euclidean silhouette; points in singleton clusters score 0, as does the
// fully degenerate case a = b = 0. Requires at least 2 non-empty clusters.
SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& assignment);

}  // namespace pedrisk
