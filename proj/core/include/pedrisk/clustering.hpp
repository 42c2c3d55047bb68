#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pedrisk/kmeans.hpp"
#include "pedrisk/kpca.hpp"
#include "pedrisk/spectral.hpp"
#include "pedrisk/standardize.hpp"
#include "pedrisk/types.hpp"

namespace pedrisk {

enum class ClusterMethod { KpcaKmc, Spectral };

std::string to_string(ClusterMethod method);
ClusterMethod cluster_method_from_string(const std::string& name);

struct ClusterOptions {
  FeatureVariant variant = FeatureVariant::All;
  // Gaussian gamma <= 0 requests the default bandwidth for the
  // (standardized) input.
  KernelSpec kpca_kernel = KernelSpec::gaussian(0.0);
  double kpca_var_ratio = 0.95;
  int kpca_min_dims = 2;
  SpectralParams spectral;
  int kmeans_restarts = 20;
  int kmeans_max_iters = 100;
};

// Per-cluster medians of the raw feature columns (px, py, vx, vy, ttc).
struct ClusterSummary {
  std::array<double, 5> median{};
  std::size_t count = 0;
};

struct ClusterModel {
  ClusterMethod method = ClusterMethod::KpcaKmc;
  FeatureVariant variant = FeatureVariant::All;
  Standardizer standardizer;
  int k = 0;
  KpcaModel kpca;                    // KpcaKmc only
  KMeansResult km;                   // k-means in the embedding space
  std::vector<int> assignment;       // training rows, dataset order
  std::vector<ClusterSummary> summaries;
  std::vector<RiskLabel> labels;     // cluster -> risk, once assigned
  bool has_labels = false;
};

// Flattens the dataset into the selected feature sub-vectors, dataset order.
Eigen::MatrixXd feature_matrix(const FeatureDataset& data, FeatureVariant variant);
std::vector<FeatureState> flatten_states(const FeatureDataset& data);

// Standardizes the selected features, embeds them (KPCA scores or spectral
// eigenvectors), and k-means-partitions the embedding.
ClusterModel fit_cluster_model(const FeatureDataset& data, ClusterMethod method,
                               int k, const ClusterOptions& options,
                               std::uint64_t seed);

// Deterministic rule attaching the four risk names to cluster median
// profiles: the two lowest-TTC clusters split into Dangerous (shorter
// longitudinal distance) and Alert; the two highest-TTC clusters split into
// JointlySafe (shorter longitudinal distance) and IndependentlySafe.
// Requires exactly 4 medians / K = 4.
std::vector<RiskLabel> semantic_labels_from_medians(
    const std::vector<std::array<double, 5>>& cluster_medians);

// Applies the rule to a fitted model and stores the labels on it.
const std::vector<RiskLabel>& assign_semantic_labels(ClusterModel& model);

struct KSelectionRow {
  int k = 0;
  double aic = 0.0;
  double bic = 0.0;
  double silhouette = 0.0;
};

struct KSelection {
  int selected_k = 0;  // argmin BIC, ties toward smaller K
  std::vector<KSelectionRow> table;
  int eigengap_k = 0;  // informational, spectral method only (0 otherwise)
};

// Information criteria are evaluated in the embedding where k-means ran;
// silhouettes are evaluated on the input points so methods stay comparable.
KSelection select_k(const Eigen::MatrixXd& points, ClusterMethod method,
                    int k_min, int k_max, const ClusterOptions& options,
                    std::uint64_t seed);
KSelection select_k(const FeatureDataset& data, ClusterMethod method, int k_min,
                    int k_max, const ClusterOptions& options, std::uint64_t seed);

struct MethodComparison {
  ClusterMethod chosen = ClusterMethod::KpcaKmc;
  double kpca_kmc_silhouette = 0.0;
  double spectral_silhouette = 0.0;
};

// Runs both methods at the given K and picks the higher mean silhouette
// (computed on the input points; KPCA-KMC wins ties).
MethodComparison compare_methods(const Eigen::MatrixXd& points, int k,
                                 const ClusterOptions& options, std::uint64_t seed);
MethodComparison compare_methods(const FeatureDataset& data, int k,
                                 const ClusterOptions& options, std::uint64_t seed);

}  // namespace pedrisk
