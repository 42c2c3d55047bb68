#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pedrisk/error.hpp"
#include "pedrisk/kmeans.hpp"
#include "pedrisk/spectral.hpp"
#include "test_support.hpp"

using namespace pedrisk;

TEST_CASE("knn graph connects the middle of three collinear points") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.0, 1.0, 2.0;
  auto adj = knn_graph(pts, 1);
  CHECK(adj(1, 0) == 1.0);
  CHECK(adj(1, 2) == 1.0);
  CHECK(adj(0, 2) == 0.0);
  CHECK(adj(0, 0) == 0.0);  // no self edges
}

TEST_CASE("knn graph is symmetric") {
  auto data = testsupport::make_blobs(
      (Eigen::MatrixXd(2, 2) << 0, 0, 3, 3).finished(), 15, 0.8, 4);
  auto adj = knn_graph(data.points, 4);
  CHECK((adj - adj.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("knn graph splits far-separated blobs into two components") {
  auto data = testsupport::make_blobs(
      (Eigen::MatrixXd(2, 2) << 0, 0, 100, 0).finished(), 5, 0.5, 8);
  auto adj = knn_graph(data.points, 2);
  auto comp = testsupport::graph_components(adj);
  int n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  CHECK(n_comp == 2);
}

TEST_CASE("knn graph rejects too-small inputs") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0, 1, 2;
  CHECK_THROWS_AS(knn_graph(pts, 3), DataError);
  CHECK_THROWS_AS(knn_graph(pts, 0), DataError);
}

TEST_CASE("disconnected components are recovered exactly") {
  auto data = testsupport::make_blobs(
      (Eigen::MatrixXd(2, 2) << 0, 0, 50, 0).finished(), 5, 0.4, 12);
  for (auto kind : {LaplacianKind::Unnormalized, LaplacianKind::SymmetricNormalized}) {
    SpectralParams params;
    params.k_nn = 2;
    params.k = 2;
    params.laplacian = kind;
    auto res = spectral_cluster(data.points, params, 5);
    CHECK(testsupport::adjusted_rand_index(res.assignment, data.labels) ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("zero eigenvalue multiplicity counts components") {
  auto data = testsupport::make_blobs(
      (Eigen::MatrixXd(2, 2) << 0, 0, 50, 0).finished(), 6, 0.4, 3);
  SpectralParams params;
  params.k_nn = 2;
  params.k = 2;
  params.laplacian = LaplacianKind::Unnormalized;
  auto res = spectral_cluster(data.points, params, 5);
  int near_zero = 0;
  for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
    if (std::abs(res.eigenvalues(i)) < 1e-8) ++near_zero;
  }
  CHECK(near_zero == 2);
}

TEST_CASE("half moons: spectral succeeds where raw k-means fails") {
  auto data = testsupport::make_half_moons(100, 0.05, 7);  // 200 points

  SpectralParams params;
  params.k_nn = 10;
  params.k = 2;
  auto res = spectral_cluster(data.points, params, 11);
  double spectral_ari = testsupport::adjusted_rand_index(res.assignment, data.labels);
  CHECK(spectral_ari >= 0.95);

  auto km = kmeans(data.points, 2, 10, 11);
  double kmeans_ari = testsupport::adjusted_rand_index(km.assignment, data.labels);
  CHECK(kmeans_ari < 0.95);
}

TEST_CASE("eigengap heuristic flags the component count") {
  auto data = testsupport::make_blobs(
      (Eigen::MatrixXd(3, 2) << 0, 0, 40, 0, 0, 40).finished(), 6, 0.4, 17);
  SpectralParams params;
  params.k_nn = 2;
  params.laplacian = LaplacianKind::Unnormalized;
  auto basis = spectral_basis(data.points, params);
  CHECK(eigengap_suggestion(basis.eigenvalues, 8) == 3);
}
