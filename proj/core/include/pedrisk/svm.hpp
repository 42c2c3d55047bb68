#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pedrisk/kernels.hpp"
#include "pedrisk/standardize.hpp"
#include "pedrisk/types.hpp"

namespace pedrisk {

// Maximum-margin binary classifier in kernel form. Only support vectors
// (alpha > 0) are stored; coeffs holds alpha_i * y_i.
struct BinarySvm {
  KernelSpec kernel;
  Eigen::MatrixXd support_vectors;  // S x N
  Eigen::VectorXd coeffs;           // S, alpha_i * y_i
  double bias = 0.0;
  double c = 10.0;
  double tol = 1e-3;

  double decision(const Eigen::VectorXd& x) const;
};

struct SvmTrainStats {
  Eigen::VectorXd alphas;  // full training-set alphas
  int sweeps = 0;
};

// Sequential minimal optimization of the dual with a deterministic
// working-pair rule (largest |E1 - E2| second choice, fixed scan order).
// Converges when every point satisfies the KKT conditions within tol.
// Throws DataError on single-class input, NumericError when the sweep cap
// is exceeded.
BinarySvm svm_train_binary(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const KernelSpec& kernel, double c, double tol,
                           int max_sweeps = 20000,
                           SvmTrainStats* stats = nullptr);

// One-vs-one multi-class risk classifier over standardized selected
// features.
struct SvmModel {
  std::vector<RiskLabel> classes;  // present classes, enum order
  FeatureVariant variant = FeatureVariant::All;
  Standardizer standardizer;
  KernelSpec kernel;
  double c = 10.0;
  double tol = 1e-3;

  struct PairMachine {
    int positive = 0;  // index into classes
    int negative = 0;
    BinarySvm svm;
  };
  std::vector<PairMachine> machines;  // one per unordered class pair

  bool fitted() const { return !machines.empty(); }
};

// Kernel gamma <= 0 requests the default bandwidth of the standardized
// training features.
SvmModel svm_train_multiclass(const std::vector<FeatureState>& states,
                              const std::vector<RiskLabel>& labels,
                              const KernelSpec& kernel, double c,
                              FeatureVariant variant, double tol = 1e-3,
                              int max_sweeps = 20000);

// Majority vote over the pairwise machines; ties break toward the largest
// summed decision margin, then enum order. Applies the stored
// standardization and feature variant.
RiskLabel svm_predict(const SvmModel& model, const FeatureState& state);

struct ClassifierEvaluation {
  double accuracy = 0.0;
  double preds_per_sec = 0.0;
  std::size_t evaluated = 0;
};

// Accuracy over the given set plus throughput measured over at least
// max(min_predictions, 10^4) calls, cycling the inputs when the set is
// smaller.
ClassifierEvaluation evaluate_classifier(const SvmModel& model,
                                         const std::vector<FeatureState>& states,
                                         const std::vector<RiskLabel>& labels,
                                         std::size_t min_predictions = 10000);

}  // namespace pedrisk
