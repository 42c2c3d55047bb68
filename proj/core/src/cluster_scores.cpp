#include "pedrisk/cluster_scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pedrisk/error.hpp"
#include "pedrisk/kmeans.hpp"

namespace pedrisk {

double aic(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
           const Eigen::MatrixXd& centroids) {
  const double k = static_cast<double>(centroids.rows());
  const double n = static_cast<double>(points.cols());
  return wcss_of(points, assignment, centroids) + 2.0 * k * n;
}

double bic(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
           const Eigen::MatrixXd& centroids) {
  const double k = static_cast<double>(centroids.rows());
  const double n = static_cast<double>(points.cols());
  const double m = static_cast<double>(points.rows());
  return wcss_of(points, assignment, centroids) + std::log(m) * k * n;
}

SilhouetteResult silhouette(const Eigen::MatrixXd& points,
                            const std::vector<int>& assignment) {
  const Eigen::Index m = points.rows();
  if (assignment.size() != static_cast<std::size_t>(m)) {
    throw DataError("silhouette: assignment size mismatch");
  }
  int k = 0;
  for (int a : assignment) {
    if (a < 0) throw DataError("silhouette: negative label");
    k = std::max(k, a + 1);
  }
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
  int non_empty = 0;
  for (auto c : counts) non_empty += c > 0 ? 1 : 0;
  if (non_empty < 2) throw DataError("silhouette: needs at least 2 clusters");

  SilhouetteResult res;
  res.scores.assign(static_cast<std::size_t>(m), 0.0);

  // Mean distance from each point to every cluster, one O(M) pass per point.
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<double> dist_sum(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      dist_sum[static_cast<std::size_t>(assignment[static_cast<std::size_t>(j)])] +=
          (points.row(i) - points.row(j)).norm();
    }
    const int own = assignment[static_cast<std::size_t>(i)];
    const Eigen::Index own_count = counts[static_cast<std::size_t>(own)];
    if (own_count <= 1) {
      res.scores[static_cast<std::size_t>(i)] = 0.0;  // singleton convention
      continue;
    }
    double a = dist_sum[static_cast<std::size_t>(own)] /
               static_cast<double>(own_count - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || counts[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, dist_sum[static_cast<std::size_t>(c)] /
                          static_cast<double>(counts[static_cast<std::size_t>(c)]));
    }
    double denom = std::max(a, b);
    res.scores[static_cast<std::size_t>(i)] = denom > 0.0 ? (b - a) / denom : 0.0;
  }

  double total = 0.0;
  for (double s : res.scores) total += s;
  res.mean = total / static_cast<double>(m);
  return res;
}

}  // namespace pedrisk
