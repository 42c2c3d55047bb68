#include <doctest.h>

#include <cmath>

#include "pedrisk/cluster_scores.hpp"
#include "pedrisk/error.hpp"
#include "pedrisk/kmeans.hpp"
#include "pedrisk/rng.hpp"
#include "test_support.hpp"

using namespace pedrisk;

TEST_CASE("aic and bic hand values on {0, 2} with K = 1") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 2.0;
  Eigen::MatrixXd centroid(1, 1);
  centroid << 1.0;
  std::vector<int> assign{0, 0};
  CHECK(aic(pts, assign, centroid) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(bic(pts, assign, centroid) ==
        doctest::Approx(2.0 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("aic is penalty-only at zero WCSS") {
  Eigen::MatrixXd pts(4, 5);
  pts.setZero();
  pts.row(2).setConstant(3.0);
  pts.row(3).setConstant(3.0);
  Eigen::MatrixXd centroids(2, 5);
  centroids.setZero();
  centroids.row(1).setConstant(3.0);
  std::vector<int> assign{0, 0, 1, 1};
  CHECK(aic(pts, assign, centroids) == doctest::Approx(20.0));  // 2 * K * N
}

TEST_CASE("bic hand value with 8 coincident points") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Constant(8, 1, 4.0);
  Eigen::MatrixXd centroid = Eigen::MatrixXd::Constant(1, 1, 4.0);
  std::vector<int> assign(8, 0);
  CHECK(bic(pts, assign, centroid) == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("bic exceeds aic once M reaches 8 and their gap is exact") {
  Rng rng(17);
  Eigen::MatrixXd pts(10, 3);
  for (int i = 0; i < 10; ++i) {
    for (int d = 0; d < 3; ++d) pts(i, d) = rng.uniform(-2, 2);
  }
  auto res = kmeans(pts, 2, 4, 3);
  double a = aic(pts, res.assignment, res.centroids);
  double b = bic(pts, res.assignment, res.centroids);
  CHECK(b >= a);  // ln(10) > 2
  const double gap = (std::log(10.0) - 2.0) * 2.0 * 3.0;
  CHECK(b - a == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("silhouette hand value for two tight pairs") {
  Eigen::MatrixXd pts(4, 2);
  pts << 0, 0, 0, 1, 10, 0, 10, 1;
  std::vector<int> assign{0, 0, 1, 1};
  auto res = silhouette(pts, assign);
  const double b = (10.0 + std::sqrt(101.0)) / 2.0;
  const double expected = (b - 1.0) / b;  // ~0.9002
  for (double s : res.scores) {
    CHECK(s == doctest::Approx(expected).epsilon(1e-3));
  }
  CHECK(res.mean == doctest::Approx(0.9002).epsilon(1e-3));
}

TEST_CASE("silhouette scores a singleton cluster as zero") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.0, 0.1, 5.0;
  std::vector<int> assign{0, 0, 1};
  auto res = silhouette(pts, assign);
  CHECK(res.scores[2] == 0.0);
}

TEST_CASE("silhouette handles coincident points across clusters") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(4, 2);
  std::vector<int> assign{0, 0, 1, 1};
  auto res = silhouette(pts, assign);
  for (double s : res.scores) CHECK(s == 0.0);
}

TEST_CASE("silhouette values stay within [-1, 1]") {
  Rng rng(23);
  Eigen::MatrixXd pts(40, 2);
  for (int i = 0; i < 40; ++i) {
    pts(i, 0) = rng.uniform(-3, 3);
    pts(i, 1) = rng.uniform(-3, 3);
  }
  auto res = kmeans(pts, 3, 4, 5);
  auto sil = silhouette(pts, res.assignment);
  CHECK(sil.mean >= -1.0);
  CHECK(sil.mean <= 1.0);
  for (double s : sil.scores) {
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("silhouette rejects a single cluster") {
  Eigen::MatrixXd pts(3, 1);
  pts << 1, 2, 3;
  std::vector<int> assign{0, 0, 0};
  CHECK_THROWS_AS(silhouette(pts, assign), DataError);
}
