#include "pedrisk/kmeans.hpp"

#include <limits>
#include <string>

#include "pedrisk/error.hpp"
#include "pedrisk/rng.hpp"

namespace pedrisk {

namespace {

// k-means++ seeding: first center uniform, then proportional to the squared
// distance to the nearest chosen center.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_int(m)));

  Eigen::VectorXd d2 =
      (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      chosen = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += d2(i);
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<Eigen::Index>(rng.uniform_int(m));
    }
    centroids.row(c) = points.row(chosen);
    d2 = d2.cwiseMin(
        (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

void assign_points(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                   std::vector<int>& assignment) {
  const Eigen::Index m = points.rows();
  const Eigen::Index k = centroids.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < k; ++c) {
      double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    assignment[static_cast<std::size_t>(i)] = best_c;
  }
}

// Nearest-centroid assignment; empty clusters are re-seeded from the point
// farthest from its current centroid (taken from a cluster of size >= 2).
void assign_and_repair(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                       std::vector<int>& assignment) {
  const Eigen::Index m = points.rows();
  const int k = static_cast<int>(centroids.rows());
  assign_points(points, centroids, assignment);

  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) continue;
    double worst = -1.0;
    Eigen::Index worst_i = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      int a = assignment[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(a)] <= 1) continue;
      double d = (points.row(i) - centroids.row(a)).squaredNorm();
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    int old = assignment[static_cast<std::size_t>(worst_i)];
    --counts[static_cast<std::size_t>(old)];
    assignment[static_cast<std::size_t>(worst_i)] = c;
    counts[static_cast<std::size_t>(c)] = 1;
    centroids.row(c) = points.row(worst_i);
  }
}

// Post-Lloyd single-point refinement (Hartigan moves): relocating one point
// between clusters can strictly lower the WCSS even when Lloyd is stable,
// which is what makes small instances reliably reach the global optimum.
// The move gain uses the exact closed form with the means recomputed.
void refine_by_moves(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                     std::vector<int>& assignment, std::vector<double>& history) {
  const Eigen::Index m = points.rows();
  const int k = static_cast<int>(centroids.rows());
  if (k < 2) return;

  std::vector<double> count(static_cast<std::size_t>(k), 0.0);
  for (int a : assignment) count[static_cast<std::size_t>(a)] += 1.0;

  const int max_moves = static_cast<int>(8 * m);
  for (int move = 0; move < max_moves; ++move) {
    double best_gain = 1e-12;
    Eigen::Index best_i = -1;
    int best_c = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      const int src = assignment[static_cast<std::size_t>(i)];
      const double n_src = count[static_cast<std::size_t>(src)];
      if (n_src <= 1.0) continue;  // keep clusters non-empty
      const double removal =
          n_src / (n_src - 1.0) * (points.row(i) - centroids.row(src)).squaredNorm();
      for (int c = 0; c < k; ++c) {
        if (c == src) continue;
        const double n_dst = count[static_cast<std::size_t>(c)];
        const double insertion =
            n_dst / (n_dst + 1.0) * (points.row(i) - centroids.row(c)).squaredNorm();
        const double gain = removal - insertion;
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_c = c;
        }
      }
    }
    if (best_i < 0) break;

    const int src = assignment[static_cast<std::size_t>(best_i)];
    const double n_src = count[static_cast<std::size_t>(src)];
    const double n_dst = count[static_cast<std::size_t>(best_c)];
    centroids.row(src) =
        (centroids.row(src) * n_src - points.row(best_i)) / (n_src - 1.0);
    centroids.row(best_c) =
        (centroids.row(best_c) * n_dst + points.row(best_i)) / (n_dst + 1.0);
    count[static_cast<std::size_t>(src)] -= 1.0;
    count[static_cast<std::size_t>(best_c)] += 1.0;
    assignment[static_cast<std::size_t>(best_i)] = best_c;
    history.push_back(wcss_of(points, assignment, centroids));
  }
}

KMeansResult run_lloyd(const Eigen::MatrixXd& points, int k, Rng& rng,
                       int max_iters) {
  const Eigen::Index m = points.rows();
  KMeansResult res;
  res.centroids = seed_centroids(points, k, rng);
  res.assignment.assign(static_cast<std::size_t>(m), 0);

  std::vector<int> previous;
  for (int iter = 0; iter < max_iters; ++iter) {
    assign_and_repair(points, res.centroids, res.assignment);

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<double> weight(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      int a = res.assignment[static_cast<std::size_t>(i)];
      sums.row(a) += points.row(i);
      weight[static_cast<std::size_t>(a)] += 1.0;
    }
    for (int c = 0; c < k; ++c) {
      if (weight[static_cast<std::size_t>(c)] > 0.0) {
        res.centroids.row(c) = sums.row(c) / weight[static_cast<std::size_t>(c)];
      }
    }

    res.wcss_history.push_back(wcss_of(points, res.assignment, res.centroids));
    res.iterations = iter + 1;
    if (res.assignment == previous) break;
    previous = res.assignment;
  }

  assign_and_repair(points, res.centroids, res.assignment);
  refine_by_moves(points, res.centroids, res.assignment, res.wcss_history);
  assign_and_repair(points, res.centroids, res.assignment);
  res.wcss = wcss_of(points, res.assignment, res.centroids);
  return res;
}

}  // namespace

double wcss_of(const Eigen::MatrixXd& points, const std::vector<int>& assignment,
               const Eigen::MatrixXd& centroids) {
  if (assignment.size() != static_cast<std::size_t>(points.rows())) {
    throw DataError("wcss: assignment size mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int a = assignment[static_cast<std::size_t>(i)];
    if (a < 0 || a >= centroids.rows()) throw DataError("wcss: label out of range");
    total += (points.row(i) - centroids.row(a)).squaredNorm();
  }
  return total;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed, int max_iters) {
  if (k < 1) throw DataError("kmeans: K must be >= 1");
  if (points.rows() < k) {
    throw DataError("kmeans: K = " + std::to_string(k) + " exceeds " +
                    std::to_string(points.rows()) + " points");
  }
  if (restarts < 1) throw DataError("kmeans: restarts must be >= 1");

  KMeansResult best;
  double best_wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, "kmeans", static_cast<std::uint64_t>(r)));
    KMeansResult run = run_lloyd(points, k, rng, max_iters);
    if (run.wcss < best_wcss) {
      best_wcss = run.wcss;
      best = std::move(run);
    }
  }
  return best;
}

}  // namespace pedrisk
