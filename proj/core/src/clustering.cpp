#include "pedrisk/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pedrisk/cluster_scores.hpp"
#include "pedrisk/error.hpp"
#include "pedrisk/features.hpp"
#include "pedrisk/rng.hpp"

namespace pedrisk {

std::string to_string(ClusterMethod method) {
  return method == ClusterMethod::KpcaKmc ? "kpca-kmc" : "spectral";
}

ClusterMethod cluster_method_from_string(const std::string& name) {
  if (name == "kpca-kmc") return ClusterMethod::KpcaKmc;
  if (name == "spectral") return ClusterMethod::Spectral;
  throw DataError("unknown cluster method '" + name + "'");
}

std::vector<FeatureState> flatten_states(const FeatureDataset& data) {
  std::vector<FeatureState> out;
  out.reserve(data.total_rows());
  for (const auto& t : data.tracks) {
    out.insert(out.end(), t.states.begin(), t.states.end());
  }
  return out;
}

Eigen::MatrixXd feature_matrix(const FeatureDataset& data, FeatureVariant variant) {
  const auto states = flatten_states(data);
  const int dim = feature_dim(variant);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(states.size()), dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto v = select_features(states[i], variant);
    for (int c = 0; c < dim; ++c) rows(static_cast<Eigen::Index>(i), c) = v[c];
  }
  return rows;
}

namespace {

KernelSpec resolve_kernel(const KernelSpec& spec, const Eigen::MatrixXd& rows) {
  KernelSpec k = spec;
  if (k.kind == KernelKind::Gaussian && !(k.gamma > 0.0)) {
    k.gamma = default_gamma(rows);
  }
  return k;
}

std::vector<ClusterSummary> summarize_clusters(
    const std::vector<FeatureState>& states, const std::vector<int>& assignment,
    int k) {
  std::vector<std::array<std::vector<double>, 5>> buckets(
      static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& b = buckets[static_cast<std::size_t>(assignment[i])];
    b[0].push_back(states[i].px);
    b[1].push_back(states[i].py);
    b[2].push_back(states[i].vx);
    b[3].push_back(states[i].vy);
    b[4].push_back(states[i].ttc);
  }
  std::vector<ClusterSummary> out(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    auto& b = buckets[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(c)].count = b[0].size();
    for (int f = 0; f < 5; ++f) {
      auto& v = b[static_cast<std::size_t>(f)];
      if (v.empty()) continue;
      std::sort(v.begin(), v.end());
      std::size_t n = v.size();
      out[static_cast<std::size_t>(c)].median[static_cast<std::size_t>(f)] =
          n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
  }
  return out;
}

}  // namespace

ClusterModel fit_cluster_model(const FeatureDataset& data, ClusterMethod method,
                               int k, const ClusterOptions& options,
                               std::uint64_t seed) {
  if (k < 1) throw DataError("fit_cluster_model: K must be >= 1");
  Eigen::MatrixXd raw = feature_matrix(data, options.variant);
  if (raw.rows() < k) throw DataError("fit_cluster_model: fewer rows than clusters");

  ClusterModel model;
  model.method = method;
  model.variant = options.variant;
  model.k = k;
  model.standardizer = Standardizer::fit(raw);
  Eigen::MatrixXd x = model.standardizer.apply(raw);

  if (method == ClusterMethod::KpcaKmc) {
    KernelSpec kernel = resolve_kernel(options.kpca_kernel, x);
    model.kpca = kpca_fit_auto(x, kernel, options.kpca_var_ratio,
                               options.kpca_min_dims);
    model.km = kmeans(model.kpca.scores, k, options.kmeans_restarts,
                      derive_seed(seed, "cluster", 0), options.kmeans_max_iters);
    model.assignment = model.km.assignment;
  } else {
    SpectralParams params = options.spectral;
    params.k = k;
    SpectralResult res = spectral_cluster(x, params, derive_seed(seed, "cluster", 1),
                                          options.kmeans_restarts);
    model.km = res.kmeans;
    model.assignment = res.assignment;
  }

  model.summaries = summarize_clusters(flatten_states(data), model.assignment, k);
  return model;
}

std::vector<RiskLabel> semantic_labels_from_medians(
    const std::vector<std::array<double, 5>>& cluster_medians) {
  if (cluster_medians.size() != 4) {
    throw DataError("semantic labels: rule requires exactly K = 4 clusters");
  }
  constexpr int kTtc = 4;
  constexpr int kPx = 0;

  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ma = cluster_medians[static_cast<std::size_t>(a)];
    const auto& mb = cluster_medians[static_cast<std::size_t>(b)];
    if (ma[kTtc] != mb[kTtc]) return ma[kTtc] < mb[kTtc];
    if (ma[kPx] != mb[kPx]) return ma[kPx] < mb[kPx];
    return a < b;
  });

  auto px = [&](int cluster) {
    return cluster_medians[static_cast<std::size_t>(cluster)][kPx];
  };

  std::vector<RiskLabel> labels(4);
  // Low-TTC pair: nearer one is Dangerous, farther one Alert.
  if (px(order[0]) <= px(order[1])) {
    labels[static_cast<std::size_t>(order[0])] = RiskLabel::Dangerous;
    labels[static_cast<std::size_t>(order[1])] = RiskLabel::Alert;
  } else {
    labels[static_cast<std::size_t>(order[0])] = RiskLabel::Alert;
    labels[static_cast<std::size_t>(order[1])] = RiskLabel::Dangerous;
  }
  // High-TTC pair: nearer one is JointlySafe, farther one IndependentlySafe.
  if (px(order[2]) <= px(order[3])) {
    labels[static_cast<std::size_t>(order[2])] = RiskLabel::JointlySafe;
    labels[static_cast<std::size_t>(order[3])] = RiskLabel::IndependentlySafe;
  } else {
    labels[static_cast<std::size_t>(order[2])] = RiskLabel::IndependentlySafe;
    labels[static_cast<std::size_t>(order[3])] = RiskLabel::JointlySafe;
  }
  return labels;
}

const std::vector<RiskLabel>& assign_semantic_labels(ClusterModel& model) {
  if (model.k != 4) {
    throw DataError("assign_semantic_labels: requires K = 4, got K = " +
                    std::to_string(model.k));
  }
  std::vector<std::array<double, 5>> medians;
  medians.reserve(model.summaries.size());
  for (const auto& s : model.summaries) medians.push_back(s.median);
  model.labels = semantic_labels_from_medians(medians);
  model.has_labels = true;
  return model.labels;
}

namespace {

KSelection select_k_impl(const Eigen::MatrixXd& points, ClusterMethod method,
                         int k_min, int k_max, const ClusterOptions& options,
                         std::uint64_t seed) {
  if (k_min < 2) throw DataError("select_k: range must start at K >= 2");
  if (k_max < k_min) throw DataError("select_k: empty K range");
  if (points.rows() < k_max) throw DataError("select_k: K range exceeds points");

  KSelection sel;

  if (method == ClusterMethod::KpcaKmc) {
    KernelSpec kernel = resolve_kernel(options.kpca_kernel, points);
    KpcaModel kpca = kpca_fit_auto(points, kernel, options.kpca_var_ratio,
                                   options.kpca_min_dims);
    for (int k = k_min; k <= k_max; ++k) {
      auto km = kmeans(kpca.scores, k, options.kmeans_restarts,
                       derive_seed(seed, "select-k", static_cast<std::uint64_t>(k)),
                       options.kmeans_max_iters);
      KSelectionRow row;
      row.k = k;
      row.aic = aic(kpca.scores, km.assignment, km.centroids);
      row.bic = bic(kpca.scores, km.assignment, km.centroids);
      row.silhouette = silhouette(points, km.assignment).mean;
      sel.table.push_back(row);
    }
  } else {
    SpectralParams params = options.spectral;
    params.k = k_max;
    SpectralBasis basis = spectral_basis(points, params);
    sel.eigengap_k = eigengap_suggestion(basis.eigenvalues, k_max);
    for (int k = k_min; k <= k_max; ++k) {
      auto res = spectral_cluster_from_basis(
          basis, k, derive_seed(seed, "select-k", static_cast<std::uint64_t>(k)),
          options.kmeans_restarts);
      KSelectionRow row;
      row.k = k;
      row.aic = aic(res.embedding, res.assignment, res.kmeans.centroids);
      row.bic = bic(res.embedding, res.assignment, res.kmeans.centroids);
      row.silhouette = silhouette(points, res.assignment).mean;
      sel.table.push_back(row);
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : sel.table) {
    if (row.bic < best) {  // strict: ties resolve toward smaller K
      best = row.bic;
      sel.selected_k = row.k;
    }
  }
  return sel;
}

}  // namespace

KSelection select_k(const Eigen::MatrixXd& points, ClusterMethod method,
                    int k_min, int k_max, const ClusterOptions& options,
                    std::uint64_t seed) {
  return select_k_impl(points, method, k_min, k_max, options, seed);
}

KSelection select_k(const FeatureDataset& data, ClusterMethod method, int k_min,
                    int k_max, const ClusterOptions& options, std::uint64_t seed) {
  Eigen::MatrixXd raw = feature_matrix(data, options.variant);
  Eigen::MatrixXd x = Standardizer::fit(raw).apply(raw);
  return select_k_impl(x, method, k_min, k_max, options, seed);
}

MethodComparison compare_methods(const Eigen::MatrixXd& points, int k,
                                 const ClusterOptions& options,
                                 std::uint64_t seed) {
  if (k < 2) throw DataError("compare_methods: K must be >= 2");

  MethodComparison cmp;
  {
    KernelSpec kernel = resolve_kernel(options.kpca_kernel, points);
    KpcaModel kpca = kpca_fit_auto(points, kernel, options.kpca_var_ratio,
                                   options.kpca_min_dims);
    auto km = kmeans(kpca.scores, k, options.kmeans_restarts,
                     derive_seed(seed, "compare", 0), options.kmeans_max_iters);
    cmp.kpca_kmc_silhouette = silhouette(points, km.assignment).mean;
  }
  {
    SpectralParams params = options.spectral;
    params.k = k;
    auto res = spectral_cluster(points, params, derive_seed(seed, "compare", 1),
                                options.kmeans_restarts);
    cmp.spectral_silhouette = silhouette(points, res.assignment).mean;
  }
  cmp.chosen = cmp.spectral_silhouette > cmp.kpca_kmc_silhouette
                   ? ClusterMethod::Spectral
                   : ClusterMethod::KpcaKmc;
  return cmp;
}

MethodComparison compare_methods(const FeatureDataset& data, int k,
                                 const ClusterOptions& options,
                                 std::uint64_t seed) {
  Eigen::MatrixXd raw = feature_matrix(data, options.variant);
  Eigen::MatrixXd x = Standardizer::fit(raw).apply(raw);
  return compare_methods(x, k, options, seed);
}

}  // namespace pedrisk
